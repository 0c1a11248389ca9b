"""Mod 2 Dyer-Lashof operations on free E-infinity homology.

Conventions (lower indexing, p = 2):

* ``Q^i x = 0`` for ``i < |x|`` and ``Q^{|x|} x = x^2``; ``Q^0`` on the unit is 1.
* Adem: for ``r > 2s``, ``Q^r Q^s = sum_i C(i-s-1, 2i-r) Q^{r+s-i} Q^i``.
* Nishida: ``Sq^a_* Q^b = sum_c C(b-a, a-2c) Q^{b-a+c} Sq^c_*`` (a right action,
  so ``Sq^3_* = Sq^2_* o Sq^1_*``).

Binomial coefficients are taken mod 2 and extended to negative tops by
``C(n, k) = (-1)^k C(k-n-1, k)``.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .f2poly import F2Polynomial, Generator, Monomial, UNIT

DLSequence = tuple[int, ...]


def binom2(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) mod 2 via Lucas' theorem."""
    if k < 0:
        return 0
    if n < 0:
        n = k - n - 1
    if k > n:
        return 0
    return 1 if (n & k) == k else 0


def check_sequence(seq: Sequence[int]) -> DLSequence:
    seq = tuple(seq)
    if any(i <= 0 for i in seq):
        raise ValueError(f"DL sequence entries must be positive: {seq}")
    return seq


def is_admissible(seq: Sequence[int]) -> bool:
    return all(seq[j] <= 2 * seq[j + 1] for j in range(len(seq) - 1))


def excess(seq: Sequence[int]) -> float:
    if not seq:
        return math.inf
    return seq[0] - sum(seq[1:])


def excess_and_degree(seq: Sequence[int], n: int) -> tuple[float, int]:
    seq = check_sequence(seq)
    return excess(seq), n + sum(seq)


def adem_terms(r: int, s: int) -> list[tuple[int, int]]:
    """The admissible pairs (a, b) with ``Q^r Q^s = sum Q^a Q^b`` when r > 2s."""
    if r <= 2 * s:
        raise ValueError(f"(Q^{r}, Q^{s}) is already admissible")
    return [
        (r + s - i, i)
        for i in range((r + 1) // 2, r - s)
        if binom2(i - s - 1, 2 * i - r)
    ]


def moment(seq: Sequence[int]) -> int:
    # position-weighted sum; strictly grows under an Adem rewrite and is
    # bounded by len(seq) * sum(seq), which gives termination
    return sum((j + 1) * i for j, i in enumerate(seq))


@lru_cache(maxsize=None)
def reduce_sequence(seq: DLSequence) -> frozenset[DLSequence]:
    """Write Q^seq as an F_2-sum of admissible composites."""
    for j in range(len(seq) - 1):
        r, s = seq[j], seq[j + 1]
        if r > 2 * s:
            out: set[DLSequence] = set()
            for a, b in adem_terms(r, s):
                new = seq[:j] + (a, b) + seq[j + 2:]
                assert moment(new) > moment(seq)
                out ^= reduce_sequence(new)
            return frozenset(out)
    return frozenset((seq,))


class DLExpression:
    """F_2-sum of terms Q^I m with I a sequence and m a monomial."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Sequence[int], Monomial]] = ()):
        acc: set[tuple[DLSequence, Monomial]] = set()
        for seq, mon in terms:
            acc ^= {(check_sequence(seq), mon)}
        self.terms = frozenset(acc)

    def __add__(self, other: "DLExpression") -> "DLExpression":
        e = DLExpression()
        e.terms = self.terms ^ other.terms
        return e

    def __eq__(self, other) -> bool:
        return isinstance(other, DLExpression) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sequences(self) -> set[DLSequence]:
        return {s for s, _ in self.terms}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = sorted(self.terms, key=lambda t: (t[0], t[1].sort_key()))
        return " + ".join(f"Q{list(s)}({m})" for s, m in parts)


def adem_reduce(expr: DLExpression) -> DLExpression:
    acc: set[tuple[DLSequence, Monomial]] = set()
    for seq, mon in expr.terms:
        for s in reduce_sequence(seq):
            acc ^= {(s, mon)}
    out = DLExpression()
    out.terms = frozenset(acc)
    return out


def admissible_sequences(max_weight: int, min_excess: float = -math.inf) -> Iterator[DLSequence]:
    """Admissible sequences of weight <= max_weight and excess > min_excess,
    including the empty sequence."""

    # Build right to left: the last entry is free, each earlier entry i_j <= 2 i_{j+1}.
    # Prepending never raises the excess, so the new head must already beat min_excess.
    def rec(tail: DLSequence, weight: int):
        yield tail
        bound = 2 * tail[0] if tail else max_weight
        low = 1 if min_excess == -math.inf else max(1, math.floor(weight + min_excess) + 1)
        for i in range(low, min(bound, max_weight - weight) + 1):
            yield from rec((i,) + tail, weight + i)

    yield from rec((), 0)


# ---------------------------------------------------------------------------
# Cartan-formula engines shared by every algebra with a DL / dual Steenrod action


def cartan_q(i: int, mon: Monomial, on_generator: Callable[[int, Generator], F2Polynomial],
             cache: dict, universe: str | None) -> F2Polynomial:
    """Q^i of a monomial from the action on generators."""
    key = (i, mon)
    hit = cache.get(key)
    if hit is not None:
        return hit
    zero = F2Polynomial.zero(universe)
    if mon.is_unit():
        res = F2Polynomial.one(universe) if i == 0 else zero
    elif i < mon.degree:
        res = zero
    elif len(mon.factors) == 1:
        g, e = mon.factors[0]
        if e == 1:
            res = on_generator(i, g)
        elif e % 2 == 0:
            res = zero if i % 2 else cartan_q(i // 2, Monomial.of(g, e // 2), on_generator,
                                              cache, universe).square()
        else:
            res = _cartan_split(i, Monomial.of(g), Monomial.of(g, e - 1), on_generator, cache,
                                universe)
    else:
        g, e = mon.factors[0]
        res = _cartan_split(i, Monomial.of(g, e), Monomial(mon.factors[1:]), on_generator, cache,
                            universe)
    cache[key] = res
    return res


def _cartan_split(i, a: Monomial, b: Monomial, on_generator, cache, universe) -> F2Polynomial:
    acc = F2Polynomial.zero(universe)
    for j in range(a.degree, i - b.degree + 1):
        left = cartan_q(j, a, on_generator, cache, universe)
        if not left:
            continue
        right = cartan_q(i - j, b, on_generator, cache, universe)
        if right:
            acc = acc + left * right
    return acc


def cartan_sq(a: int, mon: Monomial, on_generator: Callable[[int, Generator], F2Polynomial],
              cache: dict, universe: str | None) -> F2Polynomial:
    """Sq^a_* of a monomial from the action on generators."""
    if a == 0:
        return F2Polynomial.monomial(mon, universe)
    key = (a, mon)
    hit = cache.get(key)
    if hit is not None:
        return hit
    zero = F2Polynomial.zero(universe)
    if a < 0 or a > mon.degree:
        res = zero
    elif len(mon.factors) == 1:
        g, e = mon.factors[0]
        if e == 1:
            res = on_generator(a, g)
        elif e % 2 == 0:
            res = zero if a % 2 else cartan_sq(a // 2, Monomial.of(g, e // 2), on_generator,
                                               cache, universe).square()
        else:
            res = _sq_split(a, Monomial.of(g), Monomial.of(g, e - 1), on_generator, cache,
                            universe)
    else:
        g, e = mon.factors[0]
        res = _sq_split(a, Monomial.of(g, e), Monomial(mon.factors[1:]), on_generator, cache,
                        universe)
    cache[key] = res
    return res


def _sq_split(a, x: Monomial, y: Monomial, on_generator, cache, universe) -> F2Polynomial:
    acc = F2Polynomial.zero(universe)
    for j in range(max(0, a - y.degree), min(a, x.degree) + 1):
        left = cartan_sq(j, x, on_generator, cache, universe)
        if not left:
            continue
        right = cartan_sq(a - j, y, on_generator, cache, universe)
        if right:
            acc = acc + left * right
    return acc


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


class FreeDLAlgebra:
    """Homology of the free E-infinity algebra on a cone ``S -> C`` with bottom class x_n.

    As a ring it is polynomial on Q^I x_n with I admissible of excess > n.
    ``bottom_action`` maps a to ``Sq^a_* x_n``; by default ``Sq^n_* x_n = 1``
    when n is a power of two (the attaching map is detected by Sq^n) and all
    positive operations vanish otherwise.
    """

    def __init__(self, bottom_degree: int, bottom_action: dict[int, F2Polynomial] | None = None):
        if bottom_degree < 1:
            raise ValueError("bottom degree must be at least 1")
        self.n = bottom_degree
        self.universe = f"H(S//x{bottom_degree})"
        if bottom_action is None:
            bottom_action = {bottom_degree: self.one()} if _is_power_of_two(bottom_degree) else {}
        self.bottom_action = {a: F2Polynomial(p.terms, self.universe)
                              for a, p in bottom_action.items()}
        self._gens: dict[DLSequence, Generator] = {}
        self._q_gen: dict = {}
        self._q_cache: dict = {}
        self._sq_gen: dict = {}
        self._sq_cache: dict = {}

    # -- generators ---------------------------------------------------------
    def generator(self, seq: Sequence[int] = ()) -> Generator:
        seq = tuple(seq)
        g = self._gens.get(seq)
        if g is None:
            check_sequence(seq)
            if not is_admissible(seq) or excess(seq) <= self.n:
                raise ValueError(f"Q{list(seq)}x{self.n} is not a polynomial generator")
            name = f"x{self.n}" if not seq else "Q[" + ",".join(map(str, seq)) + f"]x{self.n}"
            g = Generator(name, self.n + sum(seq), key=seq)
            self._gens[seq] = g
        return g

    def gen_poly(self, seq: Sequence[int] = (), exp: int = 1) -> F2Polynomial:
        return F2Polynomial.gen(self.generator(seq), exp, self.universe)

    @property
    def x(self) -> F2Polynomial:
        return self.gen_poly(())

    def one(self) -> F2Polynomial:
        return F2Polynomial.one(getattr(self, "universe", None))

    def zero(self) -> F2Polynomial:
        return F2Polynomial.zero(self.universe)

    def generators_up_to(self, cap: int) -> list[Generator]:
        return [self.generator(s) for s in admissible_sequences(cap - self.n, self.n)]

    # -- Dyer-Lashof action -------------------------------------------------
    def _q_on_generator(self, i: int, g: Generator) -> F2Polynomial:
        key = (i, g.key)
        hit = self._q_gen.get(key)
        if hit is not None:
            return hit
        seq: DLSequence = g.key
        if i < g.degree:
            res = self.zero()
        elif i == g.degree:
            res = F2Polynomial.gen(g, 2, self.universe)
        elif not seq or i <= 2 * seq[0]:
            res = F2Polynomial.gen(self.generator((i,) + seq), 1, self.universe)
        else:
            rest = F2Polynomial.gen(self.generator(seq[1:]), 1, self.universe)
            res = self.zero()
            for a, b in adem_terms(i, seq[0]):
                res = res + self.Q(a, self.Q(b, rest))
        self._q_gen[key] = res
        return res

    def Q(self, i: int, value: F2Polynomial) -> F2Polynomial:
        if i < 0:
            return self.zero()
        return value.map_terms(
            lambda m: cartan_q(i, m, self._q_on_generator, self._q_cache, self.universe))

    def apply_operation(self, seq: Sequence[int], value: F2Polynomial) -> F2Polynomial:
        """Q^I value, evaluated right to left."""
        if not value.is_homogeneous():
            raise ValueError("apply_operation needs a homogeneous input")
        out = value
        for i in reversed(check_sequence(seq)):
            out = self.Q(i, out)
        return out

    # -- dual Steenrod action (Nishida) ---------------------------------------
    def _sq_on_generator(self, a: int, g: Generator) -> F2Polynomial:
        key = (a, g.key)
        hit = self._sq_gen.get(key)
        if hit is not None:
            return hit
        seq: DLSequence = g.key
        if not seq:
            res = self.bottom_action.get(a, self.zero())
        else:
            b = seq[0]
            rest = F2Polynomial.gen(self.generator(seq[1:]), 1, self.universe)
            res = self.zero()
            for c in range(a // 2 + 1):
                if binom2(b - a, a - 2 * c):
                    res = res + self.Q(b - a + c, self.sq(c, rest))
        self._sq_gen[key] = res
        return res

    def sq(self, a: int, value: F2Polynomial) -> F2Polynomial:
        """Right action of Sq^a_* (lowers degree by a)."""
        return value.map_terms(
            lambda m: cartan_sq(a, m, self._sq_on_generator, self._sq_cache, self.universe))

    def sq_sequence(self, seq: Sequence[int], value: F2Polynomial) -> F2Polynomial:
        """value * Sq^{j1} Sq^{j2} ...: apply Sq^{j1}_* first."""
        out = value
        for a in seq:
            out = self.sq(a, out)
        return out


def apply_operation(seq: Sequence[int], value: F2Polynomial, algebra: FreeDLAlgebra) -> F2Polynomial:
    return algebra.apply_operation(seq, value)


def dual_steenrod_action(a: int, value: F2Polynomial, algebra: FreeDLAlgebra) -> F2Polynomial:
    return algebra.sq(a, value)

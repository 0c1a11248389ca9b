"""The mod 2 dual Steenrod algebra A_* = F_2[zeta_1, zeta_2, ...].

The default generators are the conjugates zeta_s = chi(xi_s), with

    psi(zeta_n) = sum_{0<=i<=n} zeta_i (x) zeta_{n-i}^{2^i}

and the coacting factor on the left.  The right action of Sq^a_* on any left
comodule is ``m . Sq^a = sum theta_a(m') m''`` where theta_a is the functional
dual to Sq^a; on conjugate monomials theta_a is 1 on every monomial of
degree a.  On generators this gives ``Sq^{2^i-1}_* zeta_n = zeta_{n-i}^{2^i}``.

``DualSteenrodIdentification`` builds the ring map H_*(S//2) -> A_* (x_1 to
zeta_1) degree by degree, by matching Steenrod actions, and uses it to
evaluate the Dyer-Lashof action on A_*.
"""
from __future__ import annotations

import threading
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from . import linalg
from .dyer_lashof import FreeDLAlgebra, cartan_q, cartan_sq
from .f2poly import F2Polynomial, Generator, Monomial, TensorPolynomial, slice_basis, slice_count

UNIVERSE = "A*"


class AmbiguityError(ValueError):
    """Raised when a degreewise matching problem has no unique solution."""

    def __init__(self, message: str, kernel: list[F2Polynomial] | None = None):
        super().__init__(message)
        self.kernel = kernel or []


class DualSteenrod:
    def __init__(self, convention: str = "zeta"):
        if convention not in ("zeta", "xi"):
            raise ValueError("convention must be 'zeta' or 'xi'")
        self.convention = convention
        self._gens: dict[int, Generator] = {}
        self._coproduct_cache: dict[Monomial, TensorPolynomial] = {}
        self._sq_cache: dict = {}

    # -- presentation -------------------------------------------------------
    def generator(self, s: int) -> Generator:
        if s < 1:
            raise ValueError("generator index starts at 1")
        g = self._gens.get(s)
        if g is None:
            g = Generator(f"{self.convention}{s}", 2 ** s - 1, key=s)
            self._gens[s] = g
        return g

    def gen(self, s: int, exp: int = 1) -> F2Polynomial:
        return F2Polynomial.gen(self.generator(s), exp, UNIVERSE)

    def one(self) -> F2Polynomial:
        return F2Polynomial.one(UNIVERSE)

    def zero(self) -> F2Polynomial:
        return F2Polynomial.zero(UNIVERSE)

    def generators_up_to(self, cap: int) -> list[Generator]:
        out = []
        s = 1
        while 2 ** s - 1 <= cap:
            out.append(self.generator(s))
            s += 1
        return out

    def basis(self, n: int) -> list[Monomial]:
        return _basis(self, n)

    def dim(self, n: int) -> int:
        return slice_count([2 ** s - 1 for s in range(1, n.bit_length() + 1)], n) if n >= 0 else 0

    # -- Hopf structure -----------------------------------------------------
    def _coproduct_generator(self, s: int) -> TensorPolynomial:
        terms = []
        for i in range(s + 1):
            a = Monomial.of(self.generator(i)) if i else Monomial()
            b = Monomial.of(self.generator(s - i), 2 ** i) if s - i else Monomial()
            terms.append((a, b) if self.convention == "zeta" else (b, a))
        return TensorPolynomial(terms)

    def _coproduct_monomial(self, mon: Monomial) -> TensorPolynomial:
        hit = self._coproduct_cache.get(mon)
        if hit is not None:
            return hit
        res = TensorPolynomial([(Monomial(), Monomial())])
        for g, e in mon.factors:
            res = res * _tensor_power(self._coproduct_generator(g.key), e)
        self._coproduct_cache[mon] = res
        return res

    def coproduct(self, p: F2Polynomial) -> TensorPolynomial:
        acc = TensorPolynomial()
        for m in p.terms:
            acc = acc + self._coproduct_monomial(m)
        return acc

    def coproduct_tensor(self, t: TensorPolynomial, side: str) -> "TripleTensor":
        """(psi (x) 1) t or (1 (x) psi) t, as a set of monomial triples."""
        acc: set = set()
        for a, b in t.terms:
            if side == "left":
                for a1, a2 in self._coproduct_monomial(a).terms:
                    acc ^= {(a1, a2, b)}
            else:
                for b1, b2 in self._coproduct_monomial(b).terms:
                    acc ^= {(a, b1, b2)}
        return frozenset(acc)

    @staticmethod
    def counit(p: F2Polynomial) -> int:
        return 1 if Monomial() in p.terms else 0

    # -- Steenrod action ----------------------------------------------------
    def theta(self, a: int, mon: Monomial) -> int:
        """Value of the functional dual to Sq^a on a basis monomial."""
        if mon.degree != a:
            return 0
        if self.convention == "zeta":
            return 1
        return 1 if all(g.key == 1 for g, _ in mon.factors) else 0

    def _sq_on_generator(self, a: int, g: Generator) -> F2Polynomial:
        self._require_zeta()
        s = g.key
        i = (a + 1).bit_length() - 1
        if a + 1 != 2 ** i or i > s or i == 0:
            return self.zero()
        if i == s:
            return self.one()
        return self.gen(s - i, 2 ** i)

    def sq(self, a: int, p: F2Polynomial) -> F2Polynomial:
        return p.map_terms(
            lambda m: cartan_sq(a, m, self._sq_on_generator, self._sq_cache, UNIVERSE))

    def sq_sequence(self, seq: Sequence[int], p: F2Polynomial) -> F2Polynomial:
        for a in seq:
            p = self.sq(a, p)
        return p

    def sq_from_coproduct(self, a: int, p: F2Polynomial) -> F2Polynomial:
        """Sq^a_* computed directly from psi and theta_a (independent route)."""
        return F2Polynomial((b for m in p.terms for l, b in self._coproduct_monomial(m).terms
                             if self.theta(a, l)), UNIVERSE)

    def _require_zeta(self):
        if self.convention != "zeta":
            raise NotImplementedError("the Steenrod action is implemented for conjugate generators")

    # -- duality with the Steenrod algebra ---------------------------------
    def dual_basis(self, k: int) -> dict[Monomial, list[tuple[int, ...]]]:
        """For each monomial b of degree k, admissible Sq^J summing to the dual element b*."""
        return _dual_basis(self, k)

    def coaction_from_action(self, value: F2Polynomial,
                             act: Callable[[Sequence[int], F2Polynomial], F2Polynomial]
                             ) -> TensorPolynomial:
        """Recover a left coaction from the right action of composites Sq^J_*."""
        if not value:
            return TensorPolynomial()
        top = max(value.degrees())
        terms = []
        for t in range(top + 1):
            cache = {}
            for b, seqs in self.dual_basis(t).items():
                coeff = F2Polynomial.zero()
                for J in seqs:
                    if J not in cache:
                        cache[J] = act(J, value)
                    coeff = coeff + cache[J]
                terms.extend((b, m) for m in coeff.terms)
        return TensorPolynomial(terms)

    def subalgebra_slice_dim(self, d: int, n: int) -> int:
        return subalgebra_slice_dim(d, n)


TripleTensor = frozenset


def _tensor_power(t: TensorPolynomial, e: int) -> TensorPolynomial:
    res = TensorPolynomial([(Monomial(), Monomial())])
    base = t
    while e:
        if e & 1:
            res = res * base
        e >>= 1
        if e:
            base = TensorPolynomial((a ** 2, b ** 2) for a, b in base.terms)
    return res


def _basis(ds: DualSteenrod, n: int) -> list[Monomial]:
    key = ("basis", n)
    cache = ds.__dict__.setdefault("_basis_cache", {})
    if key not in cache:
        cache[key] = slice_basis(ds.generators_up_to(max(n, 1)), n) if n >= 0 else []
    return cache[key]


def steenrod_admissible(k: int) -> list[tuple[int, ...]]:
    """Serre-Cartan admissible sequences (j_i >= 2 j_{i+1}, entries >= 1) of total k."""
    out = []

    def rec(prefix: tuple[int, ...], remaining: int):
        if remaining == 0:
            out.append(prefix)
            return
        # the next entry j must allow a valid tail; prefix[-1] >= 2j
        hi = remaining if not prefix else min(remaining, prefix[-1] // 2)
        for j in range(hi, 0, -1):
            rec(prefix + (j,), remaining - j)

    rec((), k)
    return out


def _dual_basis(ds: DualSteenrod, k: int) -> dict[Monomial, list[tuple[int, ...]]]:
    cache = ds.__dict__.setdefault("_dual_cache", {})
    if k in cache:
        return cache[k]
    basis = ds.basis(k)
    seqs = steenrod_admissible(k)
    if len(seqs) != len(basis):
        raise AmbiguityError(f"degree {k}: {len(seqs)} admissibles vs {len(basis)} monomials")
    index = {m: i for i, m in enumerate(basis)}
    # row J: pairing <Sq^J, b> = counit(b . Sq^J) over all b
    rows = []
    for J in seqs:
        row = 0
        for m in basis:
            if ds.counit(ds.sq_sequence(J, F2Polynomial.monomial(m, UNIVERSE))):
                row |= 1 << index[m]
        rows.append(row)
    out: dict[Monomial, list[tuple[int, ...]]] = {}
    for m in basis:
        combo = linalg.solve(rows, 1 << index[m])
        if combo is None:
            raise AmbiguityError(f"degree {k}: Steenrod pairing is singular")
        out[m] = [seqs[i] for i in linalg.bits_of(combo)]
    cache[k] = out
    return out


def subalgebra_slice_dim(d: int, n: int) -> int:
    """dim of the degree-n part of F_2[zeta_s^{2^d} : s >= 1]."""
    if d < 0 or n < 0:
        raise ValueError("d and n must be non-negative")
    degs = []
    s = 1
    while 2 ** d * (2 ** s - 1) <= max(n, 1):
        degs.append(2 ** d * (2 ** s - 1))
        s += 1
    return slice_count(degs, n)


def coproduct(p: F2Polynomial, algebra: DualSteenrod | None = None) -> TensorPolynomial:
    return (algebra or default_algebra()).coproduct(p)


@lru_cache(maxsize=None)
def default_algebra() -> DualSteenrod:
    return DualSteenrod("zeta")


class DualSteenrodIdentification:
    """The map H_*(S//2) -> A_* sending x_1 to zeta_1, built by matching
    Sq^a_* actions degree by degree, and the Dyer-Lashof action it transports."""

    def __init__(self, dual: DualSteenrod | None = None):
        self.dual = dual or default_algebra()
        self.dual._require_zeta()
        self.source = FreeDLAlgebra(1)
        self._lock = threading.Lock()
        self._gen_image: dict[Generator, F2Polynomial] = {}
        self._mon_image: dict[Monomial, F2Polynomial] = {}
        self._zeta_q: dict[tuple[int, int], F2Polynomial] = {}
        self._q_cache: dict = {}

    # -- matching solver ----------------------------------------------------
    def _signature(self, k: int, sq_values: Callable[[int], F2Polynomial]) -> int:
        bits = 0
        offset = 0
        for a in range(1, k + 1):
            basis = self.dual.basis(k - a)
            idx = {m: i for i, m in enumerate(basis)}
            for m in sq_values(a).terms:
                bits ^= 1 << (offset + idx[m])
            offset += len(basis)
        return bits

    def match(self, k: int, sq_values: Callable[[int], F2Polynomial]) -> F2Polynomial:
        """The unique z in A_k with Sq^a_* z = sq_values(a) for all 1 <= a <= k."""
        basis = self.dual.basis(k)
        rows = [self._signature(k, lambda a, m=m: self.dual.sq(a, F2Polynomial.monomial(m, UNIVERSE)))
                for m in basis]
        ker = linalg.kernel(rows)
        if ker:
            amb = [F2Polynomial((basis[i] for i in linalg.bits_of(c)), UNIVERSE) for c in ker]
            raise AmbiguityError(f"degree {k}: action matching is not unique", amb)
        combo = linalg.solve(rows, self._signature(k, sq_values))
        if combo is None:
            raise AmbiguityError(f"degree {k}: no element of A_* has the required action")
        return F2Polynomial((basis[i] for i in linalg.bits_of(combo)), UNIVERSE)

    # -- the identification ------------------------------------------------
    def image_of_generator(self, g: Generator) -> F2Polynomial:
        hit = self._gen_image.get(g)
        if hit is not None:
            return hit
        if g.key == ():
            res = self.dual.gen(1)  # anchor: x_1 -> zeta_1
        else:
            gp = F2Polynomial.gen(g, 1, self.source.universe)
            res = self.match(g.degree, lambda a: self(self.source.sq(a, gp)))
        with self._lock:
            self._gen_image.setdefault(g, res)
        return res

    def _image_monomial(self, mon: Monomial) -> F2Polynomial:
        hit = self._mon_image.get(mon)
        if hit is None:
            hit = self.dual.one()
            for g, e in mon.factors:
                hit = hit * self.image_of_generator(g) ** e
            with self._lock:
                self._mon_image.setdefault(mon, hit)
        return hit

    def __call__(self, value: F2Polynomial) -> F2Polynomial:
        out = self.dual.zero()
        for m in value.terms:
            out = out + self._image_monomial(m)
        return out

    def preimage(self, value: F2Polynomial) -> F2Polynomial:
        """Some inverse image of a homogeneous element of A_*.

        The identification is onto but has a kernel from degree 4 on, so the
        choice is not canonical; Q^i commutes with it, so the image of Q^i of
        any choice is the same.
        """
        k = value.degree
        if k is None:
            return self.source.zero()
        basis = slice_basis(self.source.generators_up_to(k), k) if k else [Monomial()]
        target_basis = self.dual.basis(k)
        idx = {m: i for i, m in enumerate(target_basis)}

        def vec(p: F2Polynomial) -> int:
            v = 0
            for m in p.terms:
                v ^= 1 << idx[m]
            return v

        rows = [vec(self._image_monomial(m)) for m in basis]
        combo = linalg.solve(rows, vec(value))
        if combo is None:
            raise AmbiguityError(f"degree {k}: {value} is not in the image")
        return F2Polynomial((basis[i] for i in linalg.bits_of(combo)), self.source.universe)

    # -- Dyer-Lashof action on A_* ------------------------------------------
    def dl_on_zeta(self, i: int, s: int, cap: int | None = None) -> F2Polynomial:
        deg = 2 ** s - 1 + i
        if cap is not None and deg > cap:
            raise ValueError(f"Q^{i} zeta_{s} has degree {deg} > cap {cap}")
        key = (i, s)
        hit = self._zeta_q.get(key)
        if hit is not None:
            return hit
        pre = self.preimage(self.dual.gen(s))
        lifted = self.source.Q(i, pre)
        res = self.match(deg, lambda a: self(self.source.sq(a, lifted)))
        with self._lock:
            self._zeta_q.setdefault(key, res)
        return res

    def Q(self, i: int, value: F2Polynomial) -> F2Polynomial:
        """Q^i on A_* through the Cartan formula and ``dl_on_zeta``."""
        if i < 0:
            return self.dual.zero()
        on_gen = lambda j, g: self.dl_on_zeta(j, g.key)
        return value.map_terms(lambda m: cartan_q(i, m, on_gen, self._q_cache, UNIVERSE))


@lru_cache(maxsize=None)
def default_identification() -> DualSteenrodIdentification:
    return DualSteenrodIdentification(default_algebra())


def dl_on_zeta(i: int, s: int, cap: int) -> F2Polynomial:
    return default_identification().dl_on_zeta(i, s, cap)


def iter_monomials(ds: DualSteenrod, cap: int) -> Iterator[Monomial]:
    for n in range(cap + 1):
        yield from ds.basis(n)

"""Graded polynomial algebras over F_2 with named generators.

Everything here is immutable.  Polynomials use set semantics: a monomial
is either present (coefficient 1) or absent, so addition is symmetric
difference.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


@dataclass(frozen=True, order=False)
class Generator:
    name: str
    degree: int
    # arbitrary hashable payload (a DL sequence, a zeta index, ...)
    key: object = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"generator {self.name!r} has negative degree")
        if any(c in self.name for c in "^*+ "):
            raise ValueError(f"generator name {self.name!r} clashes with the text form")

    def __str__(self) -> str:
        return self.name


class Monomial:
    """A finite product of generator powers; the empty product is 1."""

    __slots__ = ("factors", "degree", "_hash")

    def __init__(self, exponents: Mapping[Generator, int] | Iterable[tuple[Generator, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        merged: dict[Generator, int] = {}
        for gen, exp in items:
            if exp < 0:
                raise ValueError("negative exponent")
            if exp:
                merged[gen] = merged.get(gen, 0) + exp
        self.factors: tuple[tuple[Generator, int], ...] = tuple(
            sorted(merged.items(), key=lambda ge: ge[0].name)
        )
        self.degree = sum(g.degree * e for g, e in self.factors)
        self._hash = hash(self.factors)

    @classmethod
    def of(cls, gen: Generator, exp: int = 1) -> "Monomial":
        return cls(((gen, exp),))

    def __mul__(self, other: "Monomial") -> "Monomial":
        if not self.factors:
            return other
        if not other.factors:
            return self
        return Monomial(self.factors + other.factors)

    def __pow__(self, k: int) -> "Monomial":
        return Monomial((g, e * k) for g, e in self.factors)

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.factors == other.factors

    def __hash__(self) -> int:
        return self._hash

    def is_unit(self) -> bool:
        return not self.factors

    def exponent(self, gen: Generator) -> int:
        for g, e in self.factors:
            if g == gen:
                return e
        return 0

    def generators(self) -> tuple[Generator, ...]:
        return tuple(g for g, _ in self.factors)

    def sort_key(self):
        # degree first, then the exponent sequence over name-sorted generators
        return (self.degree, tuple((g.name, -e) for g, e in self.factors))

    def __lt__(self, other: "Monomial") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in self.factors)

    __repr__ = __str__


UNIT = Monomial()


def _merge_universe(a: str | None, b: str | None) -> str | None:
    if a is not None and b is not None and a != b:
        raise ValueError(f"mismatched generator universes: {a!r} vs {b!r}")
    return a if a is not None else b


class F2Polynomial:
    """Sum of distinct monomials over F_2."""

    __slots__ = ("terms", "universe", "_hash")

    def __init__(self, terms: Iterable[Monomial] = (), universe: str | None = None):
        acc: set[Monomial] = set()
        for m in terms:
            acc ^= {m}
        self.terms: frozenset[Monomial] = frozenset(acc)
        self.universe = universe
        self._hash = None

    @classmethod
    def _raw(cls, terms: frozenset, universe: str | None) -> "F2Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p.universe = universe
        p._hash = None
        return p

    @classmethod
    def zero(cls, universe: str | None = None) -> "F2Polynomial":
        return cls._raw(frozenset(), universe)

    @classmethod
    def one(cls, universe: str | None = None) -> "F2Polynomial":
        return cls._raw(frozenset((UNIT,)), universe)

    @classmethod
    def monomial(cls, m: Monomial, universe: str | None = None) -> "F2Polynomial":
        return cls._raw(frozenset((m,)), universe)

    @classmethod
    def gen(cls, g: Generator, exp: int = 1, universe: str | None = None) -> "F2Polynomial":
        return cls.monomial(Monomial.of(g, exp), universe)

    def __add__(self, other: "F2Polynomial") -> "F2Polynomial":
        u = _merge_universe(self.universe, other.universe)
        return F2Polynomial._raw(self.terms ^ other.terms, u)

    __sub__ = __add__

    def __mul__(self, other: "F2Polynomial") -> "F2Polynomial":
        u = _merge_universe(self.universe, other.universe)
        acc: set[Monomial] = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {a * b}
        return F2Polynomial._raw(frozenset(acc), u)

    def __pow__(self, k: int) -> "F2Polynomial":
        result = F2Polynomial.one(self.universe)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base.square()
        return result

    def square(self) -> "F2Polynomial":
        # Frobenius: cross terms cancel in characteristic 2
        return F2Polynomial._raw(frozenset(m ** 2 for m in self.terms), self.universe)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(sorted(self.terms, key=Monomial.sort_key))

    def __contains__(self, m: Monomial) -> bool:
        return m in self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other in (0, 1):
            return self.terms == (F2Polynomial.one().terms if other else frozenset())
        return isinstance(other, F2Polynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def degrees(self) -> set[int]:
        return {m.degree for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        """Degree of a homogeneous polynomial (None for zero)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous polynomial {self}")
        return next(iter(ds)) if ds else None

    def homogeneous_part(self, n: int) -> "F2Polynomial":
        return F2Polynomial._raw(frozenset(m for m in self.terms if m.degree == n), self.universe)

    def map_terms(self, fn) -> "F2Polynomial":
        """Linear extension of ``fn: Monomial -> F2Polynomial``."""
        acc: set[Monomial] = set()
        u = None
        for m in self.terms:
            img = fn(m)
            u = _merge_universe(u, img.universe)
            acc ^= img.terms
        return F2Polynomial._raw(frozenset(acc), u)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(m) for m in self)

    def __repr__(self) -> str:
        return f"F2Polynomial({self})"


class TensorPolynomial:
    """F_2-sum of pairs of monomials, i.e. an element of a tensor product."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Monomial, Monomial]] = ()):
        acc: set[tuple[Monomial, Monomial]] = set()
        for t in terms:
            acc ^= {t}
        self.terms = frozenset(acc)

    @classmethod
    def tensor(cls, left: F2Polynomial, right: F2Polynomial) -> "TensorPolynomial":
        return cls((a, b) for a in left.terms for b in right.terms)

    def __add__(self, other: "TensorPolynomial") -> "TensorPolynomial":
        t = TensorPolynomial()
        t.terms = self.terms ^ other.terms
        return t

    def __mul__(self, other: "TensorPolynomial") -> "TensorPolynomial":
        return TensorPolynomial(
            (a1 * a2, b1 * b2) for a1, b1 in self.terms for a2, b2 in other.terms
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorPolynomial) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms, key=lambda t: (t[0].sort_key(), t[1].sort_key())))

    def bidegrees(self) -> set[tuple[int, int]]:
        return {(a.degree, b.degree) for a, b in self.terms}

    def map_left(self, fn) -> "TensorPolynomial":
        """Apply a linear map (Monomial -> F2Polynomial) to the left factor."""
        return TensorPolynomial((a2, b) for a, b in self.terms for a2 in fn(a).terms)

    def map_right(self, fn) -> "TensorPolynomial":
        return TensorPolynomial((a, b2) for a, b in self.terms for b2 in fn(b).terms)

    def collapse_left(self) -> F2Polynomial:
        """Apply the augmentation to the left factor."""
        return F2Polynomial(b for a, b in self.terms if a.is_unit())

    def collapse_right(self) -> F2Polynomial:
        return F2Polynomial(a for a, b in self.terms if b.is_unit())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{a}(x){b}" for a, b in self)

    __repr__ = __str__


def multiply(p: F2Polynomial, q: F2Polynomial) -> F2Polynomial:
    return p * q


def slice_basis(generators: Iterable[Generator], n: int) -> list[Monomial]:
    """All monomials of total degree exactly ``n``, in canonical order."""
    gens = sorted(set(generators), key=lambda g: g.name)
    if n < 0:
        raise ValueError("degree must be non-negative")
    for g in gens:
        if g.degree == 0:
            raise ValueError(f"degree-0 generator {g.name!r} makes slices infinite")
    gens = [g for g in gens if g.degree <= n]
    out: list[Monomial] = []

    def rec(i: int, remaining: int, acc: list[tuple[Generator, int]]):
        if remaining == 0:
            out.append(Monomial(acc))
            return
        if i == len(gens):
            return
        g = gens[i]
        for e in range(remaining // g.degree, -1, -1):
            rec(i + 1, remaining - e * g.degree, acc + [(g, e)] if e else acc)

    rec(0, n, [])
    out.sort(key=Monomial.sort_key)
    return out


def slice_count(degrees: Iterable[int], n: int) -> int:
    """Number of monomials of degree ``n`` in generators of the given degrees."""
    counts = [1] + [0] * n
    for d in degrees:
        if d <= 0:
            raise ValueError("generator degrees must be positive")
        for k in range(d, n + 1):
            counts[k] += counts[k - d]
    return counts[n]

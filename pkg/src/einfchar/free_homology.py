"""Degreewise computations in H_*(S//x_n), the homology of a free E-infinity cone.

H_*(S//x_n) = F_2[Q^I x_n : I admissible, exc(I) > n], with the empty
sequence standing for x_n itself.  For n = 2^d the ring maps to A_* by
x_n -> zeta_1^{2^d}, Q^I x_n -> (Q^{I/2^d} zeta_1)^{2^d} when every entry of I
is divisible by 2^d, and 0 otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import linalg
from .dual_steenrod import DualSteenrodIdentification, default_identification, subalgebra_slice_dim
from .dyer_lashof import DLSequence, FreeDLAlgebra, admissible_sequences, check_sequence
from .f2poly import F2Polynomial, Monomial, TensorPolynomial, slice_basis, slice_count

DEFAULT_CAP = 32
POINCARE_CAP = 40


@lru_cache(maxsize=None)
def algebra(n: int) -> FreeDLAlgebra:
    return FreeDLAlgebra(n)


@dataclass(frozen=True)
class FreeConePresentation:
    bottom: int
    cap: int
    generators: tuple[DLSequence, ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(generators_up_to(self.bottom, self.cap)))

    def degrees(self) -> list[int]:
        return [self.bottom + sum(I) for I in self.generators]


def generators_up_to(n: int, cap: int) -> list[DLSequence]:
    if cap < n:
        raise ValueError("cap must be at least the bottom degree")
    seqs = list(admissible_sequences(cap - n, n))
    seqs.sort(key=lambda I: (sum(I), I))
    return seqs


def slice_dim(n: int, k: int) -> int:
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k < n:
        return 1 if k == 0 else 0
    return slice_count([n + sum(I) for I in generators_up_to(n, k)], k)


def slice_monomials(n: int, k: int) -> list[Monomial]:
    if k == 0:
        return [Monomial()]
    if k < n:
        return []
    return slice_basis(algebra(n).generators_up_to(k), k)


def coaction_of_generator(n: int, seq: Sequence[int], cap: int = DEFAULT_CAP) -> TensorPolynomial:
    """A_*-coaction on Q^I x_n, recovered from the Nishida action by duality."""
    seq = check_sequence(seq)
    alg = algebra(n)
    g = alg.generator(seq)
    if g.degree > cap:
        raise ValueError(f"Q{list(seq)}x{n} has degree {g.degree} > cap {cap}")
    return coaction(alg, F2Polynomial.gen(g, 1, alg.universe))


def coaction(alg: FreeDLAlgebra, value: F2Polynomial) -> TensorPolynomial:
    dual = default_identification().dual
    return dual.coaction_from_action(value, alg.sq_sequence)


class RhoMap:
    """The ring map H_*(S//x_{2^d}) -> A_*."""

    def __init__(self, d: int, ident: DualSteenrodIdentification | None = None):
        if d < 0:
            raise ValueError("d must be non-negative")
        self.d = d
        self.source = algebra(2 ** d)
        self.ident = ident or default_identification()
        self._gen_cache: dict = {}
        self._mon_cache: dict = {}

    def on_generator(self, seq: DLSequence) -> F2Polynomial:
        hit = self._gen_cache.get(seq)
        if hit is None:
            q = 2 ** self.d
            if all(i % q == 0 for i in seq):
                base = algebra(1).gen_poly(tuple(i // q for i in seq))
                hit = self.ident(base) ** q
            else:
                hit = self.ident.dual.zero()
            self._gen_cache[seq] = hit
        return hit

    def on_monomial(self, mon: Monomial) -> F2Polynomial:
        hit = self._mon_cache.get(mon)
        if hit is None:
            hit = self.ident.dual.one()
            for g, e in mon.factors:
                hit = hit * self.on_generator(g.key) ** e
            self._mon_cache[mon] = hit
        return hit

    def __call__(self, value: F2Polynomial) -> F2Polynomial:
        if value.universe not in (None, self.source.universe):
            raise ValueError(f"rho_{self.d} expects elements of {self.source.universe}")
        return value.map_terms(self.on_monomial)


@lru_cache(maxsize=None)
def rho(d: int) -> RhoMap:
    return RhoMap(d)


def rho_map(d: int, value: F2Polynomial) -> F2Polynomial:
    return rho(d)(value)


@dataclass(frozen=True)
class DegreeRow:
    degree: int
    source_dim: int
    image_dim: int
    target_dim: int
    in_target: bool

    @property
    def surjective(self) -> bool:
        return self.in_target and self.image_dim == self.target_dim

    @property
    def kernel_dim(self) -> int:
        return self.source_dim - self.image_dim

    @property
    def injective(self) -> bool:
        return self.kernel_dim == 0


@dataclass(frozen=True)
class EpiReport:
    d: int
    cap: int
    rows: tuple[DegreeRow, ...]

    @property
    def surjective(self) -> bool:
        return all(r.surjective for r in self.rows)

    @property
    def injective(self) -> bool:
        return all(r.injective for r in self.rows)

    def surjective_count(self) -> int:
        return sum(r.surjective for r in self.rows if r.degree > 0)

    def first_kernel_degree(self) -> int | None:
        return next((r.degree for r in self.rows if r.kernel_dim), None)


def _in_power_subalgebra(mon: Monomial, d: int) -> bool:
    return all(e % (2 ** d) == 0 for _, e in mon.factors)


def verify_epi(d: int, cap: int) -> EpiReport:
    """Image of rho_d against F_2[zeta_s^{2^d}] in every degree <= cap."""
    r = rho(d)
    dual = r.ident.dual
    rows = []
    for k in range(cap + 1):
        basis = slice_monomials(2 ** d, k)
        target_basis = dual.basis(k)
        idx = {m: i for i, m in enumerate(target_basis)}
        vecs = []
        in_target = True
        for m in basis:
            v = 0
            for t in r.on_monomial(m).terms:
                in_target &= _in_power_subalgebra(t, d)
                v ^= 1 << idx[t]
            vecs.append(v)
        rows.append(DegreeRow(k, len(basis), linalg.rank(vecs), subalgebra_slice_dim(d, k),
                              in_target))
    return EpiReport(d, cap, tuple(rows))

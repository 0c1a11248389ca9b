"""Homotopy of two-cell complexes C_alpha = S^0 cup_alpha e^n from the exact sequence

    pi_{k-n+1}(S) --alpha--> pi_k(S) -> pi_k(C_alpha) -> pi_{k-n}(S) --alpha--> pi_{k-1}(S)

so pi_k(C_alpha) is an extension of ker(alpha on pi_{k-n}) by coker(alpha on pi_{k-n+1}).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .stems import (
    UNKNOWN,
    Element,
    ExtensionRecord,
    StemGroup,
    StemsError,
    StemsTable,
    Subgroup,
    element_order,
    format_element,
)

INFINITE = 0  # invariant factor of a Z summand


class CofiberRangeError(StemsError):
    pass


def _fmt_factors(factors: tuple[int, ...]) -> str:
    if not factors:
        return "0"
    return " ⊕ ".join("Z" if f == INFINITE else f"Z/{f}" for f in factors)


@dataclass(frozen=True)
class CofiberResult:
    alpha: str
    degree: int
    coker: tuple[int, ...] | None
    ker: tuple[int, ...] | None
    extension: str  # "trivial", "split", "annotated" or "orders only"
    group: tuple[tuple[str, int], ...] | None = None
    cite: str = ""
    incomplete: bool = False

    @property
    def orders(self) -> tuple[int, ...]:
        """Invariant factors when the extension is known, else those of both pieces."""
        if self.group is not None:
            return tuple(sorted((o for _, o in self.group), reverse=True))
        return tuple(sorted((self.coker or ()) + (self.ker or ()), reverse=True))

    def order(self) -> int:
        """Size of pi_k(C_alpha); 0 if infinite, -1 if undetermined."""
        if self.incomplete:
            return -1
        parts = self.coker + self.ker
        return 0 if INFINITE in parts else math.prod(parts)

    def describe(self) -> str:
        if self.incomplete:
            known = []
            if self.coker is not None:
                known.append(f"coker {_fmt_factors(self.coker)}")
            if self.ker is not None:
                known.append(f"ker {_fmt_factors(self.ker)}")
            return "incomplete (unknown products)" + (": " + ", ".join(known) if known else "")
        if self.group is not None:
            return _fmt_factors(tuple(o for _, o in self.group))
        return (f"orders only: coker {_fmt_factors(self.coker)}, ker {_fmt_factors(self.ker)}"
                f" (extension unresolved)")


def invariant_factors(group: StemGroup, sub: Subgroup) -> tuple[int, ...]:
    """Invariant factors of group/sub, largest first."""
    if not group.summands:
        return ()
    if sub.kind == "cyclic":
        g = sub.cyclic_generator()
        return () if g == 1 else (g,)
    if sub.kind != "finite":
        raise StemsError(f"quotients of pi_{group.degree} are not supported")
    # Count cosets killed by p^j; successive ratios give the number of cyclic
    # factors of order at least p^j.
    p = _prime_of(group)
    cosets = {}
    for x in group.elements():
        rep = min((group.element([a + b for a, b in zip(x.coeffs, h)]).coeffs for h in sub.elements))
        cosets[rep] = x
    counts = [1]
    j = 1
    while counts[-1] < len(cosets):
        m = p ** j
        counts.append(sum(1 for x in cosets.values() if x.scaled(m) in sub))
        j += 1
    at_least = [round(math.log(counts[i] // counts[i - 1], p)) for i in range(1, len(counts))]
    factors = []
    for i, c in enumerate(at_least):
        nxt = at_least[i + 1] if i + 1 < len(at_least) else 0
        factors += [p ** (i + 1)] * (c - nxt)
    return tuple(sorted(factors, reverse=True))


def _prime_of(group: StemGroup) -> int:
    for o in group.orders:
        if o > 1:
            return min(q for q in range(2, o + 1) if o % q == 0)
    return 2


def _ker_factors(table: StemsTable, alpha: Element, m: int):
    """Invariant factors of ker(alpha . : pi_m -> pi_{m+|alpha|}), or UNKNOWN."""
    if m < 0:
        return ()
    src = table.group(m)
    if not src.summands:
        return ()
    if not src.is_finite:
        if len(src.summands) != 1:
            raise StemsError(f"pi_{m} has mixed type")
        v = table.product(alpha, src.basis()[0])
        if v is UNKNOWN:
            return UNKNOWN
        # the kernel of Z -> G is 0 exactly when the image has infinite order
        return () if element_order(table, v) == 0 else (INFINITE,)
    kernel = []
    for x in src.elements():
        v = table.product(alpha, x)
        if v is UNKNOWN:
            return UNKNOWN
        if v.is_zero():
            kernel.append(x)
    return _factors_of_subgroup(src, Subgroup(src, kernel))


def _factors_of_subgroup(group: StemGroup, sub: Subgroup) -> tuple[int, ...]:
    els = [group.element(c) for c in sub.elements]
    if len(els) == 1:
        return ()
    p = _prime_of(group)
    counts = [1]
    j = 1
    while counts[-1] < len(els):
        counts.append(sum(1 for x in els if group.element(x.scaled(p ** j).coeffs).is_zero()))
        j += 1
    at_least = [round(math.log(counts[i] // counts[i - 1], p)) for i in range(1, len(counts))]
    factors = []
    for i, c in enumerate(at_least):
        nxt = at_least[i + 1] if i + 1 < len(at_least) else 0
        factors += [p ** (i + 1)] * (c - nxt)
    return tuple(sorted(factors, reverse=True))


def _coker_factors(table: StemsTable, alpha: Element, k: int):
    target = table.group(k)
    m = k - alpha.degree
    images = []
    if m >= 0:
        for x in table.generators(m):
            v = table.product(alpha, x)
            if v is UNKNOWN:
                return UNKNOWN
            images.append(v)
    return invariant_factors(target, Subgroup(target, images))


def _find_extension(table: StemsTable, alpha: Element, k: int) -> ExtensionRecord | None:
    for e in table.extensions:
        if e.degree == k and table.element(e.alpha) == alpha:
            return e
    return None


def cofiber_pi(alpha: str | Element, k: int, table: StemsTable) -> CofiberResult:
    a = table.element(alpha) if isinstance(alpha, str) else alpha
    name = alpha if isinstance(alpha, str) else format_element(table, a)
    if k > table.trust:
        raise CofiberRangeError(
            f"k={k} lies beyond the table's trust range ({table.trust}); refusing")
    if k < 0:
        raise CofiberRangeError("negative degree")
    n = a.degree + 1
    coker = _coker_factors(table, a, k)
    ker = _ker_factors(table, a, k - n)
    if coker is UNKNOWN or ker is UNKNOWN:
        return CofiberResult(name, k, None if coker is UNKNOWN else coker,
                             None if ker is UNKNOWN else ker, "orders only", incomplete=True)
    if not coker or not ker:
        parts = coker or ker
        return CofiberResult(name, k, coker, ker, "trivial",
                             tuple((f"c{i}", o) for i, o in enumerate(parts)))
    if a.is_zero():
        parts = tuple(sorted(coker + ker, reverse=True))
        return CofiberResult(name, k, coker, ker, "split",
                             tuple((f"c{i}", o) for i, o in enumerate(parts)))
    ext = _find_extension(table, a, k)
    if ext is not None:
        if INFINITE not in coker + ker:
            total = math.prod(coker + ker)
            if math.prod(o for _, o in ext.summands) != total:
                raise StemsError(
                    f"extension annotation for {name} in degree {k} has order "
                    f"{math.prod(o for _, o in ext.summands)}, the sequence gives {total}")
        return CofiberResult(name, k, coker, ker, "annotated", ext.summands, ext.cite)
    return CofiberResult(name, k, coker, ker, "orders only")

"""Bookkeeping simulation of the inductive E-infinity cell construction.

At stage n the builder compares two subgroups of pi_n(S):

* ``Kill_n``: what dies in the target R (ideal closure of the kernel data);
* ``Dead_n``: what is already known to die in the partial cone T built so far
  (ideal closure of the attached cells, enlarged by cited oracle facts).

Cells are attached along a minimal generating set of Kill_n modulo
Kill_n ∩ Dead_n.  Ideal closure is only a lower bound on Dead_n, so an
attachment made after earlier cells, without a ``survives`` record backing
it, is flagged ``assumption``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .stems import (
    SPHERE,
    Element,
    KernelSpec,
    OverrideRecord,
    StemsError,
    StemsTable,
    Subgroup,
    element_order,
    format_element,
    ideal_closure_groups,
    kernel_subgroups,
    kill_generators,
)

ASSUMPTION = "assumption"


class OracleContradiction(StemsError):
    pass


@dataclass(frozen=True)
class Closure:
    groups: dict
    incomplete: frozenset[int]

    @property
    def lower_bound(self) -> bool:
        return bool(self.incomplete)

    def __getitem__(self, n: int) -> Subgroup:
        return self.groups[n]

    def contains(self, x: Element) -> bool:
        return x in self.groups[x.degree]


def ideal_closure(killed: Iterable[Element], table: StemsTable, cap: int) -> Closure:
    gens: dict[int, list[Element]] = {}
    for x in killed:
        if x.scope != SPHERE:
            raise StemsError("killed elements must live in pi_*(S)")
        if x.degree <= cap:
            gens.setdefault(x.degree, []).append(x)
    groups, incomplete = ideal_closure_groups(table, gens, cap)
    return Closure(groups, frozenset(incomplete))


# ---------------------------------------------------------------------------
# survival oracle


@dataclass(frozen=True)
class SurvivalOracle:
    """Default ideal-closure model plus cited override records."""

    overrides: tuple[OverrideRecord, ...] = ()

    @classmethod
    def from_table(cls, table: StemsTable) -> "SurvivalOracle":
        return cls(tuple(table.overrides))

    def applicable(self, table: StemsTable, cells: tuple[str, ...], n: int
                   ) -> list[OverrideRecord]:
        have = {table.element(c) for c in cells}
        out = []
        for rec in self.overrides:
            if rec.degree is None and n == 0:
                continue
            if rec.degree is not None and rec.degree != n:
                continue
            after = {table.element(c) for c in rec.after}
            if rec.fate == "dies" and after <= have:
                out.append(rec)
            elif rec.fate == "survives" and after == have:
                out.append(rec)
        return out


def _override_elements(table: StemsTable, rec: OverrideRecord, n: int) -> list[Element]:
    if rec.expr == "all":
        return table.generators(n)
    return [table.element(rec.expr)]


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class AttachedCell:
    stage: int
    element: str
    flag: str | None
    dies_because: str
    survives_because: str


@dataclass(frozen=True)
class AttachmentStep:
    stage: int
    cells: tuple[AttachedCell, ...]
    target: tuple[str, ...]  # generators of Kill_n
    dead: tuple[str, ...]    # generators of Kill_n ∩ Dead_n

    @property
    def elements(self) -> tuple[str, ...]:
        return tuple(c.element for c in self.cells)


@dataclass(frozen=True)
class CellDiagram:
    target: str
    cap: int
    mode: str
    steps: tuple[AttachmentStep, ...]
    ledger: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()
    suppressed: tuple[str, ...] = field(default=())

    @property
    def name(self) -> str:
        names = [c.element for s in self.steps for c in s.cells]
        return "S//" + ",".join(names) if names else "S"

    @property
    def cells(self) -> tuple[AttachedCell, ...]:
        return tuple(c for s in self.steps for c in s.cells)

    def shape(self) -> tuple[tuple[int, str], ...]:
        return tuple((c.stage, c.element) for c in self.cells)

    @property
    def assumptions(self) -> tuple[AttachedCell, ...]:
        return tuple(c for c in self.cells if c.flag == ASSUMPTION)

    def machine_lines(self) -> list[str]:
        return [f"cell {c.stage} {c.element}" + (f" {c.flag}" if c.flag else "") for c in self.cells]


def parse_machine_lines(lines: Iterable[str]) -> list[tuple[int, str, str | None]]:
    out = []
    for line in lines:
        parts = line.split()
        if not parts or parts[0] != "cell" or len(parts) not in (3, 4):
            raise ValueError(f"not a cell line: {line!r}")
        out.append((int(parts[1]), parts[2], parts[3] if len(parts) == 4 else None))
    return out


# ---------------------------------------------------------------------------
# the builder


def _candidate_key(table: StemsTable, x: Element):
    g = table.group(x.degree)
    val = 0
    for c, o in zip(x.coeffs, g.orders):
        while c and c % table.prime == 0:
            c //= table.prime
            val += 1
    terms = sum(1 for c in x.coeffs if c)
    return (val, terms, table.af(x), sum(x.coeffs), format_element(table, x))


def _span(group, base: Subgroup, extra: list[Element]) -> Subgroup:
    return Subgroup(group, list(base.gens) + extra)


def minimal_generators(table: StemsTable, whole: Subgroup, base: Subgroup) -> list[Element]:
    """Canonical minimal list generating ``whole`` together with ``base``."""
    group = whole.group
    if whole.kind == "cyclic":
        g = whole.cyclic_generator()
        return [] if whole == base else [group.element([g])]
    cands = sorted((group.element(c) for c in whole.elements if c not in base.elements),
                   key=lambda x: _candidate_key(table, x))
    chosen: list[Element] = []
    span = base
    for x in cands:
        if span == whole:
            break
        if x not in span:
            chosen.append(x)
            span = _span(group, base, chosen)
    for x in list(reversed(chosen)):
        rest = [y for y in chosen if y != x]
        if _span(group, base, rest) == whole:
            chosen = rest
    return chosen


def is_minimal(table: StemsTable, gens: list[Element], whole: Subgroup, base: Subgroup) -> bool:
    """No proper sublist of ``gens`` generates ``whole`` modulo ``base``."""
    group = whole.group
    if _span(group, base, gens) != whole:
        return False
    for r in range(len(gens)):
        for sub in combinations(gens, r):
            if _span(group, base, list(sub)) == whole:
                return False
    return True


def _fmt(table: StemsTable, xs) -> tuple[str, ...]:
    return tuple(format_element(table, x) for x in xs)


def build(spec: KernelSpec, oracle: SurvivalOracle | None, table: StemsTable, cap: int,
          mode: str = "full") -> CellDiagram:
    if mode not in ("full", "core"):
        raise ValueError("mode is 'full' or 'core'")
    if spec.through is not None and cap > spec.through:
        raise StemsError(f"kernel data for {spec.name} only runs through degree {spec.through}")
    if cap > table.max_degree:
        raise StemsError(f"cap {cap} exceeds the table range {table.max_degree}")
    oracle = oracle or SurvivalOracle()
    kill, kill_incomplete = kernel_subgroups(table, spec, cap)
    if mode == "core" and not kill[0].is_trivial():
        raise StemsError("core mode needs a spec with torsion-free pi_0 (nothing killed in degree 0)")

    cells: list[str] = []
    cell_elements: list[Element] = []
    steps: list[AttachmentStep] = []
    ledger: list[str] = []
    warnings: list[str] = []
    suppressed: list[str] = []
    extra_dead: dict[int, list[Element]] = {}

    for n in range(cap + 1):
        group = table.group(n)
        fired = [] if mode == "core" else oracle.applicable(table, tuple(cells), n)
        support: dict[Element, OverrideRecord] = {}
        for rec in fired:
            xs = _override_elements(table, rec, n)
            if rec.fate == "dies":
                extra_dead.setdefault(n, []).extend(xs)
            else:
                x = xs[0]
                extra_dead.setdefault(n, []).append(x.scaled(rec.order))
                support[group.element(x.coeffs)] = rec
        base_gens = {m: list(v) for m, v in extra_dead.items()}
        for x in cell_elements:
            base_gens.setdefault(x.degree, []).append(x)
        dead_groups, dead_incomplete = ideal_closure_groups(table, base_gens, n)
        dead = dead_groups[n]

        # survives records must be compatible with the dead set and with dies records
        for x, rec in support.items():
            o = element_order(table, x)
            for j in range(1, rec.order):
                if rec.order % j == 0 and group.element(x.scaled(j).coeffs) in dead:
                    raise OracleContradiction(
                        f"{rec.label()} contradicts: {format_element(table, x.scaled(j))} already dies")
            if o and o % rec.order:
                raise OracleContradiction(f"{rec.label()} is incompatible with order {o}")

        for rec in fired:
            # record an override in the ledger when it changes the outcome
            xs = _override_elements(table, rec, n)
            if rec.fate == "dies":
                plain, _ = ideal_closure_groups(table, _without(base_gens, xs, n), n)
                if any(x in kill[n] and x not in plain[n] for x in xs):
                    ledger.append(rec.label())
                    suppressed.extend(f"{format_element(table, x)}@{n}" for x in xs
                                      if x in kill[n] and x not in plain[n] and not x.is_zero())
            else:
                ledger.append(rec.label())

        killed_here = kill[n]
        overlap = killed_here.intersect(dead)
        if killed_here == overlap:
            continue
        gens = minimal_generators(table, killed_here, overlap)
        attached = []
        for x in gens:
            name = format_element(table, x)
            rec = support.get(x)
            if not cells:
                because, flag = "nonzero in pi_*(S); no cells attached yet", None
            elif rec is not None:
                because, flag = rec.label(), None
            else:
                because, flag = "not in the ideal closure of the attached cells", ASSUMPTION
                warnings.append(f"stage {n}: {name} assumed to survive after {','.join(cells)}")
            if n in kill_incomplete:
                warnings.append(f"stage {n}: kernel closure is a lower bound (unknown products)")
            dies = f"in the kernel: degree {n} subgroup <{', '.join(_fmt(table, killed_here.gens))}>"
            attached.append(AttachedCell(n, name, flag, dies, because))
        for x, c in zip(gens, attached):
            cells.append(c.element)
            cell_elements.append(x)
        steps.append(AttachmentStep(n, tuple(attached), _fmt(table, killed_here.gens),
                                    _fmt(table, overlap.gens)))

    return CellDiagram(spec.name, cap, mode, tuple(steps), tuple(dict.fromkeys(ledger)),
                       tuple(dict.fromkeys(warnings)), tuple(suppressed))


def _without(gens: dict, xs: list[Element], n: int) -> dict:
    out = {m: list(v) for m, v in gens.items()}
    out[n] = [g for g in out.get(n, []) if g not in xs]
    return out


# ---------------------------------------------------------------------------
# kernel comparison


def compare_kernels(spec_a: KernelSpec, spec_b: KernelSpec, table: StemsTable, cap: int) -> str:
    """'A->B', 'B->A', 'both' or 'incomparable' from degreewise kernel inclusion."""
    for spec in (spec_a, spec_b):
        if spec.through is not None:
            cap = min(cap, spec.through)
    ka, _ = kernel_subgroups(table, spec_a, cap)
    kb, _ = kernel_subgroups(table, spec_b, cap)
    a_in_b = all(ka[n].issubset(kb[n]) for n in range(cap + 1))
    b_in_a = all(kb[n].issubset(ka[n]) for n in range(cap + 1))
    if a_in_b and b_in_a:
        return "both"
    if a_in_b:
        return "A->B"
    if b_in_a:
        return "B->A"
    return "incomparable"


def suggest_overrides(diagram: CellDiagram, catalog: SurvivalOracle, table: StemsTable
                      ) -> list[OverrideRecord]:
    """Catalog records that would settle the assumption-flagged cells."""
    out = []
    for c in diagram.assumptions:
        x = table.element(c.element)
        before = {table.element(b.element) for b in diagram.cells if b.stage < c.stage}
        for rec in catalog.overrides:
            if rec.degree not in (None, c.stage):
                continue
            after = {table.element(a) for a in rec.after}
            if not (after <= before if rec.fate == "dies" else after == before):
                continue
            if rec.expr != "all" and table.element(rec.expr) != x:
                continue
            if rec not in out:
                out.append(rec)
    return out


# ---------------------------------------------------------------------------
# conjecture reports


@dataclass(frozen=True)
class ConjectureSection:
    title: str
    claim: str
    checks: tuple[tuple[str, bool], ...]
    open_items: tuple[str, ...]


CONJECTURE_SHAPES = (
    ("kU", "Char(kU) = S//eta,sigma", ("eta", "sigma"), 7),
    ("kO", "Char(kO) = S//nu,sigma", ("nu", "sigma"), 7),
    ("tmf", "Char(tmf) = S//sigma", ("sigma",), 8),
    ("HF2", "S//2 is a characteristic for HF2", ("2",), 8),
)


def conjecture_report(table: StemsTable, oracle: SurvivalOracle) -> list[ConjectureSection]:
    sections = []
    for target, claim, shape, cap in CONJECTURE_SHAPES:
        if target not in table.targets:
            continue
        spec = table.targets[target]
        checks = []
        try:
            d = build(spec, oracle, table, cap)
            checks.append((f"builder emits {','.join(shape)} through degree {cap}",
                           tuple(c.element for c in d.cells) == shape))
            checks.append(("no assumption-flagged cells", not d.assumptions))
        except StemsError as exc:
            checks.append((f"builder ran: {exc}", False))
        name = "S//" + ",".join(shape)
        open_items = (f"ker[pi_*(S) -> pi_*({name})] = ker[pi_*(S) -> pi_*({target})] in all degrees",)
        sections.append(ConjectureSection(f"{target} characteristic", claim, tuple(checks), open_items))
    return sections

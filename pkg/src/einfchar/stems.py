"""Tabulated p-local stable stems, products, Toda brackets and kernel data.

File format (one record per line, ``#`` starts a comment)::

    prime 2
    trust 8
    group <n> [<gen>:<order>[:af<k>] ...] [@<target>]
    prod <gen>*<gen> = <expr> [@<target>]
    bracket <e>,<e>,<e> [@<target>] = <expr> [cite <text>]
    extension <alpha> <k> = <name>:<order> [...] [cite <text>]
    target <name> [through <n>]
    kills <n>|* <expr>|all
    survives <n> <expr> order <k> after <cell>[,<cell>...] [cite <text>]
    dies <n>|* <expr>|all after <cell>[,<cell>...] [cite <text>]

Order 0 means infinite cyclic.  ``kills`` lines belong to the most recent
``target``.  ``trust n`` declares the product table complete through total
degree n: an unlisted product in that range is 0, beyond it "unknown".
Expressions are ``+``-sums of ``[<int>][*]<gen>`` terms; a bare integer is a
multiple of the degree-0 generator ``1``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

SPHERE = "S"
UNIT_NAME = "1"


class StemsError(ValueError):
    pass


class StemsParseError(StemsError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConsistencyError(StemsError):
    pass


class NoData(StemsError):
    pass


class _Unknown:
    """A product the table does not determine; distinct from zero."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __bool__(self) -> bool:
        raise TypeError("UNKNOWN has no truth value; test `is UNKNOWN` first")


UNKNOWN = _Unknown()


# ---------------------------------------------------------------------------
# groups and elements


@dataclass(frozen=True)
class Summand:
    name: str
    order: int
    af: int | None = None


@dataclass(frozen=True)
class StemGroup:
    degree: int
    summands: tuple[Summand, ...] = ()
    scope: str = SPHERE

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(s.order for s in self.summands)

    @property
    def is_finite(self) -> bool:
        return all(o > 0 for o in self.orders)

    @property
    def size(self) -> int:
        """Group order, 0 if infinite."""
        return math.prod(self.orders) if self.is_finite else 0

    def zero(self) -> "Element":
        return Element(self.scope, self.degree, (0,) * len(self.summands))

    def element(self, coeffs: Sequence[int]) -> "Element":
        return Element(self.scope, self.degree,
                       tuple(c % o if o else c for c, o in zip(coeffs, self.orders)))

    def basis(self) -> list["Element"]:
        n = len(self.summands)
        return [self.element([1 if j == i else 0 for j in range(n)]) for i in range(n)]

    def index_of(self, name: str) -> int:
        for i, s in enumerate(self.summands):
            if s.name == name:
                return i
        raise KeyError(name)

    def elements(self) -> Iterator["Element"]:
        if not self.is_finite:
            raise StemsError(f"pi_{self.degree} is infinite")

        def rec(i, acc):
            if i == len(self.summands):
                yield self.element(acc)
                return
            for c in range(self.orders[i]):
                yield from rec(i + 1, acc + [c])

        yield from rec(0, [])

    def describe(self) -> str:
        if not self.summands:
            return "0"
        return " + ".join(("Z" if s.order == 0 else f"Z/{s.order}") + f" {s.name}"
                          for s in self.summands)


@dataclass(frozen=True)
class Element:
    scope: str
    degree: int
    coeffs: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "Element") -> "Element":
        if (self.scope, self.degree) != (other.scope, other.degree):
            raise StemsError("adding elements of different groups")
        return Element(self.scope, self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scaled(self, k: int) -> "Element":
        return Element(self.scope, self.degree, tuple(k * c for c in self.coeffs))


# ---------------------------------------------------------------------------
# subgroups of the tiny groups that appear here


class Subgroup:
    """Subgroup of a finitely generated abelian group given by generators.

    Finite groups are handled by enumeration; an infinite cyclic group by the
    gcd of the generators.  Mixed groups only support generator bookkeeping.
    """

    def __init__(self, group: StemGroup, gens: Iterable[Element] = ()):
        self.group = group
        self.gens = tuple(group.element(g.coeffs) for g in gens)
        self._elements: frozenset | None = None

    @property
    def kind(self) -> str:
        if self.group.is_finite:
            return "finite"
        if len(self.group.summands) == 1:
            return "cyclic"
        return "mixed"

    def cyclic_generator(self) -> int:
        g = 0
        for e in self.gens:
            g = math.gcd(g, e.coeffs[0])
        return g

    @property
    def elements(self) -> frozenset:
        if self._elements is None:
            if self.kind != "finite":
                raise StemsError(f"cannot enumerate a subgroup of pi_{self.group.degree}")
            seen = {self.group.zero().coeffs}
            frontier = list(seen)
            while frontier:
                cur = frontier.pop()
                for g in self.gens:
                    nxt = self.group.element([a + b for a, b in zip(cur, g.coeffs)]).coeffs
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
            self._elements = frozenset(seen)
        return self._elements

    def __contains__(self, x: Element) -> bool:
        x = self.group.element(x.coeffs)
        if self.kind == "finite":
            return x.coeffs in self.elements
        if self.kind == "cyclic":
            g = self.cyclic_generator()
            return x.coeffs[0] == 0 if g == 0 else x.coeffs[0] % g == 0
        raise StemsError("membership in a mixed group is not supported")

    def order(self) -> int:
        """Number of elements (0 if infinite)."""
        if self.kind == "finite":
            return len(self.elements)
        if self.kind == "cyclic":
            return 1 if self.cyclic_generator() == 0 else 0
        raise StemsError("order of a subgroup of a mixed group")

    def index(self) -> int:
        """[group : subgroup], 0 if infinite."""
        if self.kind == "finite":
            return self.group.size // len(self.elements)
        if self.kind == "cyclic":
            return self.cyclic_generator()
        raise StemsError("index in a mixed group")

    def issubset(self, other: "Subgroup") -> bool:
        return all(g in other for g in self.gens)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.issubset(other) and other.issubset(self)

    def __hash__(self):
        return hash(self.group.degree)

    def join(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self.gens + other.gens).simplified()

    def intersect(self, other: "Subgroup") -> "Subgroup":
        if self.kind == "finite":
            els = [self.group.element(c) for c in self.elements & other.elements]
            return Subgroup(self.group, els).simplified()
        if self.kind == "cyclic":
            a, b = self.cyclic_generator(), other.cyclic_generator()
            m = 0 if a == 0 or b == 0 else a * b // math.gcd(a, b)
            return Subgroup(self.group, [self.group.element([m])])
        raise StemsError("intersection in a mixed group")

    def is_trivial(self) -> bool:
        return all(g.is_zero() for g in self.gens)

    def simplified(self) -> "Subgroup":
        """Same subgroup on a short canonical generating list."""
        if self.kind == "cyclic":
            g = self.cyclic_generator()
            return Subgroup(self.group, [self.group.element([g])] if g else [])
        if self.kind != "finite":
            return self
        target = self.elements
        chosen: list[Element] = []
        span = Subgroup(self.group, [])
        for c in sorted(target, key=_element_sort_key):
            if len(span.elements) == len(target):
                break
            if c not in span.elements:
                chosen.append(self.group.element(c))
                span = Subgroup(self.group, chosen)
        return span

    def __repr__(self) -> str:
        return f"Subgroup(pi_{self.group.degree}, {[g.coeffs for g in self.gens]})"


def _element_sort_key(coeffs: tuple[int, ...]):
    return (sum(1 for c in coeffs if c), tuple(c if c else 10 ** 9 for c in coeffs))


# ---------------------------------------------------------------------------
# records


@dataclass(frozen=True)
class ProductEntry:
    a: str
    b: str
    value: str
    scope: str = SPHERE


@dataclass(frozen=True)
class TodaBracketEntry:
    elems: tuple[str, str, str]
    representative: str
    scope: str = SPHERE
    cite: str = ""


@dataclass(frozen=True)
class ExtensionRecord:
    alpha: str
    degree: int
    summands: tuple[tuple[str, int], ...]
    cite: str = ""


@dataclass(frozen=True)
class KillRecord:
    degree: int | None  # None: every positive degree
    expr: str  # "all" for the whole group


@dataclass(frozen=True)
class KernelSpec:
    name: str
    kills: tuple[KillRecord, ...] = ()
    through: int | None = None


@dataclass(frozen=True)
class OverrideRecord:
    degree: int | None
    expr: str
    fate: str  # "dies" or "survives"
    after: tuple[str, ...]
    order: int = 1
    cite: str = ""

    def label(self) -> str:
        where = "*" if self.degree is None else str(self.degree)
        fate = "dies" if self.fate == "dies" else f"survives with order {self.order}"
        text = f"{self.expr} (degree {where}) {fate} after {','.join(self.after)}"
        return text + (f" [{self.cite}]" if self.cite else "")


@dataclass
class StemsTable:
    prime: int = 2
    trust: int = 0
    groups: dict[str, dict[int, StemGroup]] = field(default_factory=dict)
    products: dict[str, dict[tuple[str, str], str]] = field(default_factory=dict)
    brackets: list[TodaBracketEntry] = field(default_factory=list)
    extensions: list[ExtensionRecord] = field(default_factory=list)
    targets: dict[str, KernelSpec] = field(default_factory=dict)
    overrides: list[OverrideRecord] = field(default_factory=list)

    # -- lookups ------------------------------------------------------------
    @property
    def max_degree(self) -> int:
        return max(self.groups.get(SPHERE, {0: None}))

    def group(self, n: int, scope: str = SPHERE) -> StemGroup:
        try:
            return self.groups[scope][n]
        except KeyError:
            if scope == SPHERE:
                raise StemsError(f"degree {n} is outside the table") from None
            raise NoData(f"pi_{n}({scope}) is not tabulated") from None

    def locate(self, name: str, scope: str = SPHERE) -> tuple[int, int]:
        for n, g in self.groups.get(scope, {}).items():
            for i, s in enumerate(g.summands):
                if s.name == name:
                    return n, i
        raise StemsError(f"unknown generator {name!r}" + ("" if scope == SPHERE else f" in {scope}"))

    def generator(self, name: str, scope: str = SPHERE) -> Element:
        n, i = self.locate(name, scope)
        return self.group(n, scope).basis()[i]

    def generators(self, n: int, scope: str = SPHERE) -> list[Element]:
        return self.group(n, scope).basis()

    def element(self, expr: str, scope: str = SPHERE) -> Element:
        return parse_element(self, expr, scope)

    def format(self, x: Element) -> str:
        return format_element(self, x)

    def af(self, x: Element) -> int:
        g = self.group(x.degree, x.scope)
        vals = [s.af for s, c in zip(g.summands, x.coeffs) if c and s.af is not None]
        return min(vals) if vals else 10 ** 6

    # -- products -----------------------------------------------------------
    def product(self, a: Element, b: Element, scope: str = SPHERE):
        """Bilinear product; UNKNOWN when the table cannot decide it."""
        if a.scope != b.scope:
            raise StemsError("product across scopes; use the unit map first")
        n = a.degree + b.degree
        target = self.group(n, a.scope)
        if a.is_zero() or b.is_zero():
            return target.zero()
        ga = self.group(a.degree, a.scope)
        gb = self.group(b.degree, b.scope)
        table = self.products.get(a.scope, {})
        acc = target.zero()
        for sa, ca in zip(ga.summands, a.coeffs):
            if not ca:
                continue
            for sb, cb in zip(gb.summands, b.coeffs):
                if not cb:
                    continue
                if sa.name == UNIT_NAME:
                    v = self.generator(sb.name, a.scope)
                elif sb.name == UNIT_NAME:
                    v = self.generator(sa.name, a.scope)
                else:
                    expr = table.get((sa.name, sb.name)) or table.get((sb.name, sa.name))
                    if expr is not None:
                        v = parse_element(self, expr, a.scope, degree=n)
                    elif a.scope == SPHERE and n <= self.trust:
                        v = target.zero()
                    else:
                        return UNKNOWN
                acc = acc + v.scaled(ca * cb)
        return target.element(acc.coeffs)

    # -- serialization ------------------------------------------------------
    def dump(self) -> str:
        return dump(self)


# ---------------------------------------------------------------------------
# expressions

_TERM = re.compile(r"^(\d*)\*?([A-Za-z_][A-Za-z0-9_'~]*)?$")


def parse_element(table: StemsTable, expr: str, scope: str = SPHERE, degree: int | None = None) -> Element:
    expr = expr.strip()
    if expr == "0":
        if degree is None:
            raise StemsError("bare 0 needs a known degree")
        return table.group(degree, scope).zero()
    pieces = []
    for term in expr.split("+"):
        m = _TERM.match(term.strip())
        if not m or (not m.group(1) and not m.group(2)):
            raise StemsError(f"bad term {term!r} in {expr!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        name = m.group(2) or UNIT_NAME
        pieces.append((coeff, name))
    acc = None
    for coeff, name in pieces:
        n, i = table.locate(name, scope)
        if degree is not None and n != degree:
            raise StemsError(f"{expr!r} does not live in degree {degree}")
        g = table.group(n, scope)
        v = g.basis()[i].scaled(coeff)
        acc = v if acc is None else acc + v
    return table.group(acc.degree, scope).element(acc.coeffs)


def format_element(table: StemsTable, x: Element) -> str:
    g = table.group(x.degree, x.scope)
    terms = []
    for s, c in zip(g.summands, x.coeffs):
        if not c:
            continue
        if s.name == UNIT_NAME:
            terms.append(str(c))
        else:
            terms.append(s.name if c == 1 else f"{c}{s.name}")
    return "+".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# parsing


def _split_cite(tokens: list[str]) -> tuple[list[str], str]:
    if "cite" in tokens:
        k = tokens.index("cite")
        return tokens[:k], " ".join(tokens[k + 1:]).strip('"')
    return tokens, ""


def _split_scope(tokens: list[str]) -> tuple[list[str], str]:
    if tokens and tokens[-1].startswith("@"):
        return tokens[:-1], tokens[-1][1:]
    return tokens, SPHERE


def _degree_field(tok: str, lineno: int) -> int | None:
    if tok == "*":
        return None
    try:
        n = int(tok)
    except ValueError:
        raise StemsParseError(lineno, f"expected a degree, got {tok!r}") from None
    if n < 0:
        raise StemsParseError(lineno, "negative degree")
    return n


def loads(text: str, table: StemsTable | None = None) -> StemsTable:
    """Parse the line format; appending to ``table`` when given (for oracle files)."""
    t = table if table is not None else StemsTable()
    seen_prime = table is not None
    current_target: str | None = None
    raw_products: list[tuple[int, ProductEntry]] = []
    raw_brackets: list[tuple[int, TodaBracketEntry]] = []
    raw_ext: list[tuple[int, ExtensionRecord]] = []
    raw_overrides: list[tuple[int, OverrideRecord]] = []
    raw_kills: list[tuple[int, str, KillRecord]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kw, rest = tokens[0], tokens[1:]
        try:
            if kw == "prime":
                if len(rest) != 1:
                    raise StemsParseError(lineno, "prime takes one argument")
                t.prime = int(rest[0])
                seen_prime = True
            elif kw == "trust":
                t.trust = int(rest[0])
            elif kw == "group":
                rest, scope = _split_scope(rest)
                if not rest:
                    raise StemsParseError(lineno, "group needs a degree")
                n = _degree_field(rest[0], lineno)
                if n is None:
                    raise StemsParseError(lineno, "group degree cannot be *")
                summands = []
                for tok in rest[1:]:
                    parts = tok.split(":")
                    if len(parts) not in (2, 3):
                        raise StemsParseError(lineno, f"bad summand {tok!r}")
                    af = None
                    if len(parts) == 3:
                        if not parts[2].startswith("af"):
                            raise StemsParseError(lineno, f"bad filtration field {parts[2]!r}")
                        af = int(parts[2][2:])
                    summands.append(Summand(parts[0], int(parts[1]), af))
                groups = t.groups.setdefault(scope, {})
                if n in groups:
                    raise StemsParseError(lineno, f"duplicate group {n}" + (f" @{scope}" if scope != SPHERE else ""))
                groups[n] = StemGroup(n, tuple(summands), scope)
            elif kw == "prod":
                rest, scope = _split_scope(rest)
                if len(rest) != 3 or rest[1] != "=" or rest[0].count("*") != 1:
                    raise StemsParseError(lineno, "expected: prod <gen>*<gen> = <expr>")
                a, b = rest[0].split("*")
                raw_products.append((lineno, ProductEntry(a, b, rest[2], scope)))
            elif kw == "bracket":
                rest, cite = _split_cite(rest)
                if "=" not in rest:
                    raise StemsParseError(lineno, "bracket needs '= <expr>'")
                k = rest.index("=")
                lhs, rhs = rest[:k], rest[k + 1:]
                lhs, scope = _split_scope(lhs)
                elems = lhs[0].split(",") if len(lhs) == 1 else []
                if len(elems) != 3 or len(rhs) != 1:
                    raise StemsParseError(lineno, "expected: bracket a,b,c [@target] = <expr>")
                raw_brackets.append((lineno, TodaBracketEntry(tuple(elems), rhs[0], scope, cite)))
            elif kw == "extension":
                rest, cite = _split_cite(rest)
                if len(rest) < 4 or rest[2] != "=":
                    raise StemsParseError(lineno, "expected: extension <alpha> <k> = <name>:<order> ...")
                summ = []
                for tok in rest[3:]:
                    name, _, order = tok.partition(":")
                    summ.append((name, int(order)))
                raw_ext.append((lineno, ExtensionRecord(rest[0], int(rest[1]), tuple(summ), cite)))
            elif kw == "target":
                if len(rest) not in (1, 3) or (len(rest) == 3 and rest[1] != "through"):
                    raise StemsParseError(lineno, "expected: target <name> [through <n>]")
                current_target = rest[0]
                if current_target in t.targets:
                    raise StemsParseError(lineno, f"duplicate target {current_target}")
                through = int(rest[2]) if len(rest) == 3 else None
                t.targets[current_target] = KernelSpec(current_target, (), through)
            elif kw == "kills":
                if current_target is None:
                    raise StemsParseError(lineno, "kills outside a target block")
                if len(rest) != 2:
                    raise StemsParseError(lineno, "expected: kills <n>|* <expr>|all")
                rec = KillRecord(_degree_field(rest[0], lineno), rest[1])
                if rec.degree is None and rec.expr != "all":
                    raise StemsParseError(lineno, "kills * only accepts 'all'")
                raw_kills.append((lineno, current_target, rec))
            elif kw in ("survives", "dies"):
                rest, cite = _split_cite(rest)
                if "after" not in rest:
                    raise StemsParseError(lineno, f"{kw} needs 'after <cells>'")
                k = rest.index("after")
                head, cells = rest[:k], rest[k + 1:]
                if len(cells) != 1:
                    raise StemsParseError(lineno, "cell list is comma separated, no spaces")
                after = tuple(cells[0].split(","))
                if kw == "survives":
                    if len(head) != 4 or head[2] != "order":
                        raise StemsParseError(lineno, "expected: survives <n> <expr> order <k> after ...")
                    order = int(head[3])
                    if order < 1:
                        raise StemsParseError(lineno, "order must be positive")
                    rec = OverrideRecord(_degree_field(head[0], lineno), head[1],
                                         "dies" if order == 1 else "survives", after, order, cite)
                else:
                    if len(head) != 2:
                        raise StemsParseError(lineno, "expected: dies <n> <expr> after ...")
                    rec = OverrideRecord(_degree_field(head[0], lineno), head[1], "dies", after, 1, cite)
                if rec.degree is None and rec.expr != "all":
                    raise StemsParseError(lineno, "degree * only accepts 'all'")
                raw_overrides.append((lineno, rec))
            else:
                raise StemsParseError(lineno, f"unknown record {kw!r}")
        except StemsParseError:
            raise
        except (ValueError, IndexError) as exc:
            raise StemsParseError(lineno, str(exc)) from None
    if not seen_prime:
        raise StemsParseError(0, "missing 'prime' record")
    _validate_groups(t)
    for lineno, p in raw_products:
        _add_product(t, p, lineno)
    for lineno, tgt, rec in raw_kills:
        _check_kill(t, rec, lineno)
        spec = t.targets[tgt]
        t.targets[tgt] = KernelSpec(spec.name, spec.kills + (rec,), spec.through)
    for lineno, rec in raw_overrides:
        _check_override(t, rec, lineno)
        t.overrides.append(rec)
    for lineno, b in raw_brackets:
        _check_bracket(t, b, lineno)
        t.brackets.append(b)
    for lineno, e in raw_ext:
        try:
            t.element(e.alpha)
        except StemsError as exc:
            raise StemsParseError(lineno, str(exc)) from None
        t.extensions.append(e)
    return t


def _validate_groups(t: StemsTable) -> None:
    sphere = t.groups.get(SPHERE)
    if not sphere:
        return
    for n in range(max(sphere) + 1):
        if n not in sphere:
            raise ConsistencyError(f"pi_{n} missing (list empty groups explicitly)")
    names: dict[tuple[str, str], int] = {}
    for scope, groups in t.groups.items():
        for n, g in groups.items():
            for s in g.summands:
                if (scope, s.name) in names:
                    raise ConsistencyError(f"generator {s.name!r} listed twice")
                names[(scope, s.name)] = n
                if s.order and not _is_power(s.order, t.prime):
                    raise ConsistencyError(
                        f"{s.name}: order {s.order} is not a power of {t.prime}")
                if s.order == 0 and scope == SPHERE and n != 0:
                    raise ConsistencyError(f"{s.name}: infinite summand in positive stem")
    if 0 in sphere and UNIT_NAME not in {s.name for s in sphere[0].summands}:
        raise ConsistencyError("pi_0 must contain the unit generator '1'")


def _is_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _add_product(t: StemsTable, p: ProductEntry, lineno: int) -> None:
    try:
        a = t.generator(p.a, p.scope)
        b = t.generator(p.b, p.scope)
        n = a.degree + b.degree
        target = t.group(n, p.scope)
        v = parse_element(t, p.value, p.scope, degree=n)
        raw = _raw_coeffs(t, p.value, p.scope, n)
    except StemsError as exc:
        raise ConsistencyError(f"line {lineno}: {exc}") from None
    if p.value.strip() != "0" and v.is_zero():
        raise ConsistencyError(
            f"line {lineno}: {p.a}*{p.b} = {p.value} vanishes in {target.describe()}"
            f" (coefficients {raw} reduce to 0)")
    for x in (a, b):
        o = t.group(x.degree, p.scope).orders[x.coeffs.index(1)]
        if o and not target.element(v.scaled(o).coeffs).is_zero():
            raise ConsistencyError(
                f"line {lineno}: {p.a}*{p.b} = {p.value} is not killed by the order {o}")
    key = (p.a, p.b)
    table = t.products.setdefault(p.scope, {})
    if key in table or (p.b, p.a) in table:
        raise ConsistencyError(f"line {lineno}: duplicate product {p.a}*{p.b}")
    table[key] = p.value


def _raw_coeffs(t, expr, scope, n):
    if expr.strip() == "0":
        return ()
    out = []
    for term in expr.split("+"):
        m = _TERM.match(term.strip())
        out.append(int(m.group(1)) if m.group(1) else 1)
    return tuple(out)


def _check_kill(t: StemsTable, rec: KillRecord, lineno: int) -> None:
    if rec.expr == "all":
        if rec.degree is not None:
            t.group(rec.degree)
        return
    try:
        x = t.element(rec.expr)
    except StemsError as exc:
        raise StemsParseError(lineno, str(exc)) from None
    if x.degree != rec.degree:
        raise StemsParseError(lineno, f"{rec.expr} lives in degree {x.degree}, not {rec.degree}")


def _check_override(t: StemsTable, rec: OverrideRecord, lineno: int) -> None:
    _check_kill(t, KillRecord(rec.degree, rec.expr), lineno)
    for c in rec.after:
        try:
            t.element(c)
        except StemsError as exc:
            raise StemsParseError(lineno, f"cell {c!r}: {exc}") from None
    if rec.fate == "survives":
        x = t.element(rec.expr)
        o = element_order(t, x)
        if o and o % rec.order:
            raise ConsistencyError(
                f"line {lineno}: {rec.expr} has order {o}; it cannot survive with order {rec.order}")


def element_order(t: StemsTable, x: Element) -> int:
    g = t.group(x.degree, x.scope)
    o = 1
    for c, m in zip(x.coeffs, g.orders):
        if c:
            if m == 0:
                return 0
            o = math.lcm(o, m // math.gcd(m, c))
    return o


def _check_bracket(t: StemsTable, b: TodaBracketEntry, lineno: int) -> None:
    try:
        a = t.element(b.elems[0])
        bb = t.element(b.elems[1])
        c = t.element(b.elems[2], b.scope)
        n = a.degree + bb.degree + c.degree + 1
        parse_element(t, b.representative, b.scope, degree=n)
    except StemsError as exc:
        raise StemsParseError(lineno, f"bracket: {exc}") from None


def load(path: str | Path, oracle: str | Path | None = None) -> StemsTable:
    t = loads(Path(path).read_text())
    if oracle is not None:
        load_oracle(oracle, t)
    return t


def load_oracle(path: str | Path, table: StemsTable) -> StemsTable:
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        kw = line.split("#", 1)[0].split()[:1]
        if kw and kw[0] not in ("survives", "dies"):
            raise StemsParseError(lineno, f"oracle files only hold survives/dies records, got {kw[0]!r}")
    return loads(text, table)


def dump(t: StemsTable) -> str:
    lines = [f"prime {t.prime}", f"trust {t.trust}"]
    for scope, groups in t.groups.items():
        suffix = "" if scope == SPHERE else f" @{scope}"
        for n in sorted(groups):
            parts = [f"{s.name}:{s.order}" + (f":af{s.af}" if s.af is not None else "")
                     for s in groups[n].summands]
            lines.append(" ".join(["group", str(n)] + parts) + suffix)
    for scope, prods in t.products.items():
        suffix = "" if scope == SPHERE else f" @{scope}"
        for (a, b), v in prods.items():
            lines.append(f"prod {a}*{b} = {v}{suffix}")
    for b in t.brackets:
        scope = "" if b.scope == SPHERE else f" @{b.scope}"
        cite = f" cite {b.cite}" if b.cite else ""
        lines.append(f"bracket {','.join(b.elems)}{scope} = {b.representative}{cite}")
    for e in t.extensions:
        parts = " ".join(f"{n}:{o}" for n, o in e.summands)
        cite = f" cite {e.cite}" if e.cite else ""
        lines.append(f"extension {e.alpha} {e.degree} = {parts}{cite}")
    for spec in t.targets.values():
        lines.append(f"target {spec.name}" + (f" through {spec.through}" if spec.through is not None else ""))
        for k in spec.kills:
            lines.append(f"kills {'*' if k.degree is None else k.degree} {k.expr}")
    for o in t.overrides:
        where = "*" if o.degree is None else str(o.degree)
        cite = f" cite {o.cite}" if o.cite else ""
        if o.fate == "dies":
            lines.append(f"dies {where} {o.expr} after {','.join(o.after)}{cite}")
        else:
            lines.append(f"survives {where} {o.expr} order {o.order} after {','.join(o.after)}{cite}")
    return "\n".join(lines) + "\n"


def reference_path() -> Path:
    return Path(__file__).parent / "data" / "reference_2local.stems"


def reference_oracle_path() -> Path:
    return Path(__file__).parent / "data" / "reference_overrides.oracle"


def reference_table(with_overrides: bool = False) -> StemsTable:
    return load(reference_path(), reference_oracle_path() if with_overrides else None)


def product(table: StemsTable, a: Element, b: Element):
    return table.product(a, b)


# ---------------------------------------------------------------------------
# kernels of unit maps


def ideal_closure_groups(table: StemsTable, killed: dict[int, list[Element]], cap: int
                         ) -> tuple[dict[int, Subgroup], set[int]]:
    """Smallest degreewise subgroups containing ``killed`` and closed under
    multiplication by sphere elements with known products.

    Returns the subgroups and the set of degrees where an unknown product was
    needed (there the subgroup is only a lower bound).
    """
    out: dict[int, Subgroup] = {}
    incomplete: set[int] = set()
    for n in range(cap + 1):
        g = table.group(n)
        gens = [table.group(n).element(x.coeffs) for x in killed.get(n, [])]
        for m in range(n):
            lower = out[m]
            for x in lower.gens:
                if x.is_zero():
                    continue
                for y in table.generators(n - m):
                    v = table.product(x, y)
                    if v is UNKNOWN:
                        incomplete.add(n)
                    else:
                        gens.append(v)
        out[n] = Subgroup(g, gens).simplified()
    return out, incomplete


def kill_generators(table: StemsTable, spec: KernelSpec, cap: int) -> dict[int, list[Element]]:
    gens: dict[int, list[Element]] = {}
    for rec in spec.kills:
        degrees = range(1, cap + 1) if rec.degree is None else [rec.degree]
        for n in degrees:
            if n > cap:
                continue
            if rec.expr == "all":
                gens.setdefault(n, []).extend(table.generators(n))
            else:
                gens.setdefault(n, []).append(table.element(rec.expr))
    return gens


def kernel_subgroups(table: StemsTable, spec: KernelSpec, cap: int
                     ) -> tuple[dict[int, Subgroup], set[int]]:
    return ideal_closure_groups(table, kill_generators(table, spec, cap), cap)


# ---------------------------------------------------------------------------
# Toda brackets


@dataclass(frozen=True)
class BracketResult:
    representative: Element
    indeterminacy: Subgroup
    entry: TodaBracketEntry


def _is_killed(table: StemsTable, x: Element, scope: str) -> bool | None:
    if x.is_zero():
        return True
    spec = table.targets.get(scope)
    if spec is None:
        return None
    ker, incomplete = kernel_subgroups(table, spec, x.degree)
    if x in ker[x.degree]:
        return True
    return None if x.degree in incomplete else False


def _act(table: StemsTable, x: Element, r: Element, scope: str):
    """x . r for x in pi_*(S) and r in pi_*(scope)."""
    if scope == SPHERE:
        return table.product(x, r)
    if x.degree == 0:
        return r.scaled(x.coeffs[0])
    if _is_killed(table, x, scope):
        return table.group(x.degree + r.degree, scope).zero()
    return UNKNOWN


def toda_bracket(table: StemsTable, a: str | Element, b: str | Element, c: str | Element,
                 scope: str | None = None) -> BracketResult:
    scope = scope or SPHERE
    a = table.element(a) if isinstance(a, str) else a
    b = table.element(b) if isinstance(b, str) else b
    c = table.element(c, scope) if isinstance(c, str) else c
    ab = table.product(a, b)
    if ab is UNKNOWN:
        raise StemsError("cannot verify that the first two entries multiply to zero")
    if not ab.is_zero():
        raise StemsError(f"bracket undefined: {table.format(a)}*{table.format(b)} = {table.format(ab)} != 0")
    bc = _act(table, b, c, scope)
    if bc is UNKNOWN:
        raise StemsError("cannot verify that the last two entries multiply to zero")
    if not bc.is_zero():
        raise StemsError(f"bracket undefined: {table.format(b)}*{table.format(c)} != 0")
    entry = None
    for e in table.brackets:
        if e.scope != scope:
            continue
        try:
            ea, eb, ec = (table.element(e.elems[0]), table.element(e.elems[1]),
                          table.element(e.elems[2], scope))
        except StemsError:
            continue
        if (ea, eb, ec) == (a, b, c):
            entry = e
            break
    if entry is None:
        raise NoData(f"no data for <{table.format(a)},{table.format(b)},{table.format(c)}>")
    n = a.degree + b.degree + c.degree + 1
    rep = parse_element(table, entry.representative, scope, degree=n)
    target = table.group(n, scope)
    gens: list[Element] = []
    for r in table.generators(b.degree + c.degree + 1, scope):
        v = _act(table, a, r, scope)
        if v is UNKNOWN:
            raise StemsError(f"indeterminacy needs an unknown product {table.format(a)}*{r}")
        gens.append(v)
    for x in table.generators(a.degree + b.degree + 1):
        v = _act(table, x, c, scope)
        if v is UNKNOWN:
            raise StemsError(f"indeterminacy needs an unknown product with {table.format(c)}")
        gens.append(v)
    return BracketResult(rep, Subgroup(target, gens).simplified(), entry)

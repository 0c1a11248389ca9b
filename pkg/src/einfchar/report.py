"""Plain-text reports with a machine-readable ``#!`` suffix.

Each machine line is ``#! <kind> key=value ...`` with shell-style quoting,
so ``parse_machine`` recovers exactly the values that were displayed.
"""
from __future__ import annotations

import shlex
from dataclasses import dataclass, field


@dataclass
class Section:
    title: str
    header: tuple[str, ...] = ()
    rows: list[tuple] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)

    def render(self) -> list[str]:
        out = [self.title, "-" * len(self.title)]
        if self.rows:
            table = [tuple(map(str, self.header))] + [tuple(map(str, r)) for r in self.rows]
            widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
            for r in table:
                out.append("  ".join(c.rjust(w) if c.lstrip("-").isdigit() else c.ljust(w)
                                     for c, w in zip(r, widths)).rstrip())
        out.extend(self.lines)
        return out


@dataclass
class ReportDocument:
    title: str
    sections: list[Section] = field(default_factory=list)
    machine: list[tuple[str, dict]] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)

    def section(self, title: str, header: tuple[str, ...] = ()) -> Section:
        s = Section(title, header)
        self.sections.append(s)
        return s

    def record(self, kind: str, **values) -> None:
        self.machine.append((kind, {k: str(v) for k, v in values.items()}))

    def machine_lines(self) -> list[str]:
        return [format_machine(kind, values) for kind, values in self.machine]

    def render(self, fmt: str = "text") -> str:
        if fmt == "machine":
            return "\n".join(self.machine_lines()) + "\n"
        out = [self.title, "=" * len(self.title)]
        for s in self.sections:
            out.append("")
            out.extend(s.render())
        if self.summary:
            out.append("")
            out.extend(self.summary)
        if self.machine:
            out.append("")
            out.extend(self.machine_lines())
        return "\n".join(out) + "\n"


def format_machine(kind: str, values: dict) -> str:
    parts = [f"{k}={shlex.quote(v)}" for k, v in values.items()]
    return " ".join(["#!", kind] + parts)


def parse_machine(text: str) -> list[tuple[str, dict]]:
    out = []
    for line in text.splitlines():
        if not line.startswith("#! "):
            continue
        tokens = shlex.split(line[3:])
        kind, values = tokens[0], {}
        for tok in tokens[1:]:
            key, sep, val = tok.partition("=")
            if not sep:
                raise ValueError(f"malformed machine field {tok!r}")
            values[key] = val
        out.append((kind, values))
    return out

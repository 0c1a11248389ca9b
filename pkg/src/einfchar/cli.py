"""Command-line front end: ``einfchar <subcommand> ...``.

Every subcommand prints a report (``--format text``) or only its ``#!``
machine lines (``--format machine``) and exits nonzero when a verification
fails, input is rejected, or an unapproved assumption fires.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import char_builder, cofiber_les, free_homology, stems
from .dual_steenrod import default_algebra
from .report import ReportDocument


def _table(args) -> stems.StemsTable:
    path = Path(args.table) if args.table else stems.reference_path()
    return stems.load(path)


def _seq(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "()", "[]"):
        return ()
    return tuple(int(t) for t in text.strip("[]()").split(","))


def cmd_verify_images(args) -> tuple[ReportDocument, int]:
    rep = free_homology.verify_epi(args.d, args.cap)
    doc = ReportDocument(f"Image of H_*(S//x_{2 ** args.d}) in F_2[zeta_s^{2 ** args.d}]")
    sec = doc.section("degrees", ("k", "dim source", "rank", "dim target", "kernel", "onto"))
    for r in rep.rows:
        sec.rows.append((r.degree, r.source_dim, r.image_dim, r.target_dim, r.kernel_dim,
                         "yes" if r.surjective else "NO"))
    n_pos = sum(1 for r in rep.rows if r.degree > 0)
    first = rep.first_kernel_degree()
    kern = f"kernel first nonzero in degree {first}" if first is not None else "kernel zero throughout"
    doc.summary.append(f"surjective: {rep.surjective_count()}/{n_pos} degrees; {kern}")
    ok = rep.surjective and (args.d > 0 or rep.injective)
    if args.d == 0 and not rep.injective:
        doc.summary.append("FAILED: the d=0 map is expected to be an isomorphism but has a kernel")
    doc.record("verify-images", d=args.d, cap=args.cap, surjective=f"{rep.surjective_count()}/{n_pos}",
               first_kernel=first if first is not None else "none", ok=ok)
    return doc, 0 if ok else 1


def cmd_poincare(args) -> tuple[ReportDocument, int]:
    dual = default_algebra()
    doc = ReportDocument("Poincare series of H_*(S//2) against A_*")
    sec = doc.section("degrees", ("k", "dim H_k(S//2)", "dim A_k", "equal"))
    bad = []
    for k in range(args.cap + 1):
        h, a = free_homology.slice_dim(1, k), dual.dim(k)
        sec.rows.append((k, h, a, "yes" if h == a else "NO"))
        doc.record("poincare", k=k, source=h, target=a)
        if h != a:
            bad.append(k)
    doc.summary.append("dimensions agree through degree %d" % args.cap if not bad
                       else f"FAILED: dimensions differ in degrees {bad}")
    return doc, 0 if not bad else 1


def cmd_coaction(args) -> tuple[ReportDocument, int]:
    seq = _seq(args.seq)
    value = free_homology.coaction_of_generator(args.bottom, seq, args.cap)
    alg = free_homology.algebra(args.bottom)
    name = alg.generator(seq).name
    doc = ReportDocument(f"Coaction on {name}")
    doc.summary.append(f"psi({name}) = {value}")
    doc.record("coaction", bottom=args.bottom, seq=",".join(map(str, seq)), value=str(value))
    return doc, 0


def cmd_cofiber(args) -> tuple[ReportDocument, int]:
    table = _table(args)
    res = cofiber_les.cofiber_pi(args.alpha, args.k, table)
    doc = ReportDocument(f"pi_{args.k} of the cofiber of {args.alpha}")
    sec = doc.section("exact sequence pieces")
    sec.lines.append(f"coker: {cofiber_les._fmt_factors(res.coker) if res.coker is not None else 'unknown'}")
    sec.lines.append(f"ker:   {cofiber_les._fmt_factors(res.ker) if res.ker is not None else 'unknown'}")
    sec.lines.append(f"extension: {res.extension}" + (f" [{res.cite}]" if res.cite else ""))
    doc.summary.append(res.describe())
    doc.record("cofiber", alpha=args.alpha, k=args.k, group=res.describe(),
               orders=",".join(map(str, res.orders)), extension=res.extension)
    return doc, 1 if res.incomplete else 0


def cmd_build(args) -> tuple[ReportDocument, int]:
    table = _table(args)
    if args.target not in table.targets:
        raise stems.StemsError(f"unknown target {args.target!r}; known: {', '.join(table.targets)}")
    if args.oracle:
        stems.load_oracle(args.oracle, table)
    oracle = char_builder.SurvivalOracle.from_table(table)
    d = char_builder.build(table.targets[args.target], oracle, table, args.cap, args.mode)
    doc = ReportDocument(f"Characteristic of {args.target} through degree {args.cap} ({args.mode})")
    sec = doc.section("cells", ("stage", "element", "flag", "survives because"))
    for c in d.cells:
        sec.rows.append((c.stage, c.element, c.flag or "-", c.survives_because))
    if d.ledger:
        doc.section("oracle facts used").lines.extend(f"* {x}" for x in d.ledger)
    if d.warnings:
        doc.section("warnings").lines.extend(f"! {w}" for w in d.warnings)
    status = 0
    if d.assumptions:
        catalog = char_builder.SurvivalOracle(tuple(stems.reference_table(True).overrides))
        needed = char_builder.suggest_overrides(d, catalog, table)
        if needed:
            doc.section("required overrides").lines.extend(f"- {r.label()}" for r in needed)
        if not args.allow_assumptions:
            status = 1
            doc.summary.append("FAILED: assumption-flagged cells (pass --oracle or --allow-assumptions)")
    doc.summary.insert(0, f"{d.name}")
    for line in d.machine_lines():
        parts = line.split()
        doc.record("cell", stage=parts[1], element=parts[2], flag=parts[3] if len(parts) > 3 else "")
    return doc, status


def cmd_compare(args) -> tuple[ReportDocument, int]:
    table = _table(args)
    for name in (args.a, args.b):
        if name not in table.targets:
            raise stems.StemsError(f"unknown target {name!r}")
    verdict = char_builder.compare_kernels(table.targets[args.a], table.targets[args.b], table, args.cap)
    text = {
        "A->B": f"morphism Char({args.a}) -> Char({args.b})",
        "B->A": f"morphism Char({args.b}) -> Char({args.a})",
        "both": f"Char({args.a}) and Char({args.b}) agree (equal kernels)",
        "incomparable": "kernels are incomparable",
    }[verdict]
    doc = ReportDocument(f"Kernel comparison {args.a} vs {args.b}")
    doc.summary.append(text)
    doc.record("compare", a=args.a, b=args.b, cap=args.cap, verdict=verdict)
    return doc, 0


def cmd_bracket(args) -> tuple[ReportDocument, int]:
    table = _table(args)
    parts = args.elems.split(",")
    if len(parts) != 3:
        raise stems.StemsError("--elems takes three comma-separated entries")
    res = stems.toda_bracket(table, *parts, scope=args.scope)
    rep = table.format(res.representative)
    ind = ", ".join(table.format(g) for g in res.indeterminacy.gens) or "0"
    doc = ReportDocument(f"Toda bracket <{args.elems}>" + (f" in {args.scope}" if args.scope else ""))
    doc.summary.append(f"representative {rep}; indeterminacy generated by {ind}")
    doc.record("bracket", elems=args.elems, scope=args.scope or stems.SPHERE, representative=rep,
               indeterminacy=ind)
    return doc, 0


def cmd_conjectures(args) -> tuple[ReportDocument, int]:
    table = stems.load(Path(args.table) if args.table else stems.reference_path(),
                       args.oracle or stems.reference_oracle_path())
    oracle = char_builder.SurvivalOracle.from_table(table)
    doc = ReportDocument("Conjectured characteristics")
    for s in char_builder.conjecture_report(table, oracle):
        sec = doc.section(f"{s.title}: {s.claim}")
        sec.lines.extend(f"[{'ok' if ok else 'no'}] {text}" for text, ok in s.checks)
        sec.lines.extend(f"[open] {item}" for item in s.open_items)
        doc.record("conjecture", target=s.title.split()[0],
                   checked=all(ok for _, ok in s.checks), open=len(s.open_items))
    return doc, 0


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="einfchar", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", help="stems file (default: shipped reference table)")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--allow-assumptions", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-images", parents=[common])
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--cap", type=int, default=24)
    s.set_defaults(func=cmd_verify_images)

    s = sub.add_parser("poincare", parents=[common])
    s.add_argument("--cap", type=int, default=free_homology.POINCARE_CAP)
    s.set_defaults(func=cmd_poincare)

    s = sub.add_parser("coaction", parents=[common])
    s.add_argument("--bottom", type=int, required=True)
    s.add_argument("--seq", default="", help="admissible sequence, e.g. 4,2")
    s.add_argument("--cap", type=int, default=free_homology.DEFAULT_CAP)
    s.set_defaults(func=cmd_coaction)

    s = sub.add_parser("cofiber", parents=[common])
    s.add_argument("--alpha", required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_cofiber)

    s = sub.add_parser("build", parents=[common])
    s.add_argument("--target", required=True)
    s.add_argument("--oracle")
    s.add_argument("--cap", type=int, default=8)
    s.add_argument("--mode", choices=("full", "core"), default="full")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("compare", parents=[common])
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--cap", type=int, default=8)
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("bracket", parents=[common])
    s.add_argument("--elems", required=True)
    s.add_argument("--scope")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("conjectures", parents=[common])
    s.add_argument("--oracle")
    s.set_defaults(func=cmd_conjectures)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        doc, status = args.func(args)
    except (stems.StemsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(doc.render(args.format))
    return status


if __name__ == "__main__":
    sys.exit(main())

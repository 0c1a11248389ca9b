import random

import pytest

from einfchar import char_builder as cb
from einfchar import stems
from einfchar.stems import KernelSpec, KillRecord, OverrideRecord


@pytest.fixture(scope="module")
def table():
    return stems.reference_table()


@pytest.fixture(scope="module")
def oracle():
    return cb.SurvivalOracle.from_table(stems.reference_table(with_overrides=True))


def test_closure_of_two(table):
    c = cb.ideal_closure([table.element("2")], table, 8)
    for n in range(9):
        for x in table.generators(n):
            assert x.scaled(2) in c[n]
    assert not c.contains(table.element("eta"))


def test_closure_of_eta_misses_nu(table):
    c = cb.ideal_closure([table.element("eta")], table, 8)
    assert c.contains(table.element("4nu"))
    assert not c.contains(table.element("nu"))
    assert not c.lower_bound


def test_empty_closure(table):
    c = cb.ideal_closure([], table, 8)
    assert all(c[n].is_trivial() for n in range(9))


def test_closure_beyond_trust_is_flagged(table):
    c = cb.ideal_closure([table.element("nu")], table, 12)
    assert c.lower_bound


@pytest.mark.parametrize("target,cap,expected", [
    ("HF2", 8, ["cell 0 2"]),
    ("HF2", 20, ["cell 0 2"]),
    ("kU", 7, ["cell 1 eta", "cell 7 sigma"]),
    ("kO", 7, ["cell 3 nu", "cell 7 sigma"]),
    ("tmf", 8, ["cell 7 sigma"]),
])
def test_golden_shapes(table, oracle, target, cap, expected):
    d = cb.build(table.targets[target], oracle, table, cap)
    assert d.machine_lines() == expected
    assert not d.assumptions


def test_kU_dependencies_are_cited(table, oracle):
    d = cb.build(table.targets["kU"], oracle, table, 7)
    assert any("nu (degree 3) dies after eta" in x for x in d.ledger)
    assert any("sigma (degree 7) survives with order 4 after eta" in x for x in d.ledger)
    assert d.name == "S//eta,sigma"


def test_kU_without_overrides_needs_an_assumption(table, oracle):
    d = cb.build(table.targets["kU"], None, table, 8)
    assert ("3", "nu") in {(str(c.stage), c.element) for c in d.assumptions}
    needed = cb.suggest_overrides(d, oracle, table)
    assert [r.expr for r in needed] == ["nu"]


def test_eps_would_be_assumed_at_stage_eight(table, oracle):
    d = cb.build(table.targets["kO"], oracle, table, 8)
    assert [c.element for c in d.assumptions] == ["eps"]


def test_build_is_deterministic(table, oracle):
    outs = {tuple(cb.build(table.targets[t], oracle, table, 8 if t != "kU" else 7).machine_lines())
            for t in ["kU"] * 3}
    assert len(outs) == 1


def test_contradiction_is_reported(table):
    bad = cb.SurvivalOracle((OverrideRecord(3, "nu", "survives", ("eta",), 8, "test"),))
    with pytest.raises(cb.OracleContradiction, match="4nu"):
        cb.build(table.targets["kU"], bad, table, 7)


def test_kernel_range_is_enforced(table, oracle):
    with pytest.raises(stems.StemsError):
        cb.build(table.targets["tmf"], oracle, table, 9)


def test_core_mode(table, oracle):
    spec = table.targets["kO"]
    assert cb.build(spec, oracle, table, 8, mode="core").shape() == cb.build(spec, None, table, 8).shape()
    with pytest.raises(stems.StemsError):
        cb.build(table.targets["HF2"], oracle, table, 8, mode="core")


def test_compare_examples(table):
    t = table.targets
    assert cb.compare_kernels(t["HZ"], t["HF2"], table, 8) == "A->B"
    assert cb.compare_kernels(t["kU"], t["HZ"], table, 20) == "both"
    assert cb.compare_kernels(t["kO"], t["kU"], table, 20) == "A->B"
    assert cb.compare_kernels(t["tmf"], t["kO"], table, 20) == "A->B"


def test_machine_lines_round_trip(table, oracle):
    d = cb.build(table.targets["kU"], None, table, 8)
    parsed = cb.parse_machine_lines(d.machine_lines())
    assert parsed == [(c.stage, c.element, c.flag) for c in d.cells]


# -- randomized kill sets -----------------------------------------------------

NAMES = [(n, s.name) for n in range(1, 9) for s in stems.reference_table().group(n).summands]


def random_spec(rng, name="R"):
    kills = [KillRecord(n, g) for n, g in NAMES if rng.random() < 0.3]
    if rng.random() < 0.3:
        kills.append(KillRecord(0, rng.choice(["2", "4", "8"])))
    if rng.random() < 0.2:
        kills.append(KillRecord(3, "2nu"))
    return KernelSpec(name, tuple(kills))


def degreewise_subset(table, a, b, cap):
    ka, _ = stems.kernel_subgroups(table, a, cap)
    kb, _ = stems.kernel_subgroups(table, b, cap)
    return all(ka[n].issubset(kb[n]) for n in range(cap + 1))


def check_minimal(table, d, spec):
    kill, _ = stems.kernel_subgroups(table, spec, d.cap)
    for step in d.steps:
        group = table.group(step.stage)
        whole = kill[step.stage]
        base = stems.Subgroup(group, [table.element(x) if x != "0" else group.zero() for x in step.dead])
        gens = [table.element(c.element) for c in step.cells]
        assert cb.is_minimal(table, gens, whole, base), (spec, step)


def test_random_kernel_specs(table):
    rng = random.Random(20261016)
    for trial in range(100):
        a = random_spec(rng, "A")
        b = random_spec(rng, "B")
        # an equal spec written differently: duplicated and permuted records
        a2 = KernelSpec("A2", tuple(reversed(a.kills)) + a.kills[:1])
        assert cb.compare_kernels(a, a2, table, 8) == "both"
        da, da2 = cb.build(a, None, table, 8), cb.build(a2, None, table, 8)
        assert da.steps == da2.steps
        verdict = cb.compare_kernels(a, b, table, 8)
        sub_ab, sub_ba = degreewise_subset(table, a, b, 8), degreewise_subset(table, b, a, 8)
        assert verdict == {(True, True): "both", (True, False): "A->B",
                           (False, True): "B->A", (False, False): "incomparable"}[(sub_ab, sub_ba)]
        union = KernelSpec("AB", a.kills + b.kills)
        assert cb.compare_kernels(a, union, table, 8) in ("A->B", "both")
        for spec, d in ((a, da), (b, cb.build(b, None, table, 8)), (union, cb.build(union, None, table, 8))):
            check_minimal(table, d, spec)


def test_monotonicity_below_divergence(table):
    rng = random.Random(7)
    for _ in range(50):
        a = random_spec(rng)
        b = KernelSpec("B", a.kills + random_spec(rng).kills)
        ka, _ = stems.kernel_subgroups(table, a, 8)
        kb, _ = stems.kernel_subgroups(table, b, 8)
        diverge = next((n for n in range(9) if ka[n] != kb[n]), 9)
        sa = {s.stage for s in cb.build(a, None, table, 8).steps if s.stage < diverge}
        sb = {s.stage for s in cb.build(b, None, table, 8).steps if s.stage < diverge}
        assert sa <= sb


def test_conjecture_report(table, oracle):
    sections = {s.title: s for s in cb.conjecture_report(table, oracle)}
    assert all(ok for _, ok in sections["kU characteristic"].checks)
    assert sections["tmf characteristic"].open_items

import pytest

from einfchar import stems
from einfchar.cli import main
from einfchar.report import format_machine, parse_machine


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_verify_images(capsys):
    status, out, _ = run(capsys, "verify-images", "--d", "1", "--cap", "12")
    assert status == 0
    assert "surjective: 12/12 degrees; kernel first nonzero in degree 5" in out


def test_verify_images_d0_fails_on_injectivity(capsys):
    status, out, _ = run(capsys, "verify-images", "--d", "0", "--cap", "6")
    assert status == 1
    assert "kernel first nonzero in degree 4" in out


def test_cofiber(capsys):
    status, out, _ = run(capsys, "cofiber", "--alpha", "eta", "--k", "3")
    assert status == 0
    assert "\nZ/4\n" in out


def test_build_without_oracle_lists_override(capsys):
    status, out, _ = run(capsys, "build", "--target", "kU", "--cap", "8")
    assert status != 0
    assert "nu (degree 3) dies after eta" in out


def test_build_with_oracle(capsys):
    oracle = str(stems.reference_oracle_path())
    status, out, _ = run(capsys, "build", "--target", "kU", "--cap", "7", "--oracle", oracle,
                         "--format", "machine")
    assert status == 0
    cells = [v for k, v in parse_machine(out) if k == "cell"]
    assert [(c["stage"], c["element"]) for c in cells] == [("1", "eta"), ("7", "sigma")]


def test_assumptions_allowed_with_flag(capsys):
    status, _, _ = run(capsys, "build", "--target", "kU", "--cap", "8", "--allow-assumptions")
    assert status == 0


def test_compare_and_bracket(capsys):
    status, out, _ = run(capsys, "compare", "--a", "HZ", "--b", "HF2")
    assert status == 0 and "morphism Char(HZ) -> Char(HF2)" in out
    status, out, _ = run(capsys, "bracket", "--elems", "2,eta,1", "--scope", "kU", "--format", "machine")
    assert status == 0
    [(kind, values)] = parse_machine(out)
    assert values["representative"] == "beta" and values["indeterminacy"] == "2beta"


def test_bracket_precondition_failure(capsys):
    status, _, err = run(capsys, "bracket", "--elems", "eta,eta,eta")
    assert status == 2 and "undefined" in err


def test_coaction_machine_round_trip(capsys):
    status, out, _ = run(capsys, "coaction", "--bottom", "2", "--seq", "", "--format", "machine")
    assert status == 0
    [(kind, values)] = parse_machine(out)
    assert values["value"] == "1(x)x2 + zeta1^2(x)1"


def test_poincare_reports_mismatch(capsys):
    status, out, _ = run(capsys, "poincare", "--cap", "5", "--format", "machine")
    rows = [v for _, v in parse_machine(out)]
    assert [(r["source"], r["target"]) for r in rows][3:] == [("2", "2"), ("3", "2"), ("4", "2")]
    assert status == 1


def test_bad_table_path(capsys, tmp_path):
    status, _, err = run(capsys, "cofiber", "--alpha", "eta", "--k", "3", "--table", str(tmp_path / "no"))
    assert status == 2 and err.startswith("error:")


def test_text_output_carries_machine_suffix(capsys):
    _, out, _ = run(capsys, "cofiber", "--alpha", "nu", "--k", "7")
    [(kind, values)] = parse_machine(out)
    assert values["group"] in out.split("#!")[0]


@pytest.mark.parametrize("values", [{"a": "x y"}, {"b": "it's"}, {"c": ""}])
def test_machine_quoting(values):
    assert parse_machine(format_machine("k", values)) == [("k", values)]

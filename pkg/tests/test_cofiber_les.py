import pytest

from einfchar import stems
from einfchar.cofiber_les import CofiberRangeError, cofiber_pi, invariant_factors


@pytest.fixture(scope="module")
def table():
    return stems.reference_table()


def test_eta_cone_in_degree_three(table):
    res = cofiber_pi("eta", 3, table)
    assert res.describe() == "Z/4"
    assert res.coker == (4,) and res.ker == ()


def test_nu_cone_in_degree_seven(table):
    res = cofiber_pi("nu", 7, table)
    assert res.coker == (16,) and res.ker == (4,)
    assert res.extension == "annotated"
    assert res.orders == (16, 4)
    assert res.describe() == "Z/16 ⊕ Z/4"


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_moore_spectra(table, r):
    assert cofiber_pi(str(2 ** r), 0, table).describe() == f"Z/{2 ** r}"


def test_unannotated_extension_reports_orders_only(table):
    res = cofiber_pi("eta", 8, table)
    assert res.extension == "orders only"
    assert res.order() == 4


@pytest.mark.parametrize("k", range(0, 9))
@pytest.mark.parametrize("degree", [0, 1, 3])
def test_null_map_gives_a_wedge(table, k, degree):
    zero = table.group(degree).zero()
    res = cofiber_pi(zero, k, table)
    n = degree + 1
    expected = sorted(table.group(k).orders + (table.group(k - n).orders if k >= n else ()), reverse=True)
    assert list(res.orders) == expected


@pytest.mark.parametrize("alpha", ["eta", "nu", "2", "4", "sigma", "eta2"])
@pytest.mark.parametrize("k", range(0, 9))
def test_orders_multiply(table, alpha, k):
    res = cofiber_pi(alpha, k, table)
    if res.order() > 0:
        import math
        assert math.prod(res.orders) == res.order()


def test_refuses_beyond_trust(table):
    with pytest.raises(CofiberRangeError):
        cofiber_pi("eta", 9, table)


def test_unknown_products_flag_incomplete(table, monkeypatch):
    real = stems.StemsTable.product

    def patchy(self, a, b, scope=stems.SPHERE):
        if a.degree + b.degree == 3:
            return stems.UNKNOWN
        return real(self, a, b, scope)

    monkeypatch.setattr(stems.StemsTable, "product", patchy)
    res = cofiber_pi("eta", 3, table)
    assert res.incomplete
    assert res.coker is None and res.ker == ()
    assert res.order() == -1
    assert res.describe().startswith("incomplete")


def test_invariant_factors_of_a_quotient(table):
    g = table.group(8)
    sub = stems.Subgroup(g, [table.element("etasigma")])
    assert invariant_factors(g, sub) == (2,)

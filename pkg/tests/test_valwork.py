from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ladderwork.ladder import AlphaPolicy, run_ladder
from ladderwork.pseries import PrecisionError, TruncatedSeries, gens
from ladderwork.valwork import DepthInsufficient, DyadicValue, dyadic_gcd, value_group_report, value_of


def test_dyadic_normalization():
    a = DyadicValue(9, 3, 3)
    assert (a.numerator, a.p_exponent) == (1, 1)
    assert str(a) == "1/3"
    assert str(DyadicValue(2, -2, 3)) == "18"
    assert DyadicValue.from_fraction(Fraction(5, 25), 5) == Fraction(1, 5)
    with pytest.raises(ValueError):
        DyadicValue.from_fraction(Fraction(1, 2), 3)


@given(st.integers(-50, 50), st.integers(0, 4), st.integers(-50, 50), st.integers(0, 4))
def test_dyadic_arithmetic_matches_fractions(m, k, n, l):
    a, b = DyadicValue(m, k, 3), DyadicValue(n, l, 3)
    assert (a + b).as_fraction() == a.as_fraction() + b.as_fraction()
    assert (a - b).as_fraction() == a.as_fraction() - b.as_fraction()
    assert (a < b) == (a.as_fraction() < b.as_fraction())


def test_dyadic_gcd():
    g = dyadic_gcd([DyadicValue(1, 0, 3), DyadicValue(2, 2, 3)])
    assert g == Fraction(1, 9)
    assert dyadic_gcd([DyadicValue(6, 0, 5), DyadicValue(4, 0, 5)]) == 2


@pytest.fixture(scope="module")
def tr():
    return run_ladder(3, 2, AlphaPolicy("smallest"))


def test_values(tr):
    x, y = gens(3, 30)
    assert value_of(x, tr) == 1
    assert value_of(y, tr) == Fraction(1, 3)
    assert value_of(x ** 3 * (1 + y), tr) == 3
    assert value_of(y ** 3 + x, tr) == 1
    assert value_of(x ** 2 * y ** 2 * (2 + x + y), tr) == Fraction(8, 3)
    assert value_of(x + y, tr) == Fraction(1, 3)


def test_value_p5():
    tr = run_ladder(5, 1)
    x, y = gens(5, 40)
    assert value_of(y, tr) == Fraction(1, 5)
    assert value_of(y ** 5 + x, tr) == 1


def test_depth_insufficient():
    tr = run_ladder(3, 0)
    _, y = gens(3, 20)
    with pytest.raises(DepthInsufficient):
        value_of(y, tr)


def test_uncertified_value(tr):
    x, _ = gens(3, 4)
    with pytest.raises(PrecisionError):
        value_of(x ** 3, tr)


def test_zero_series(tr):
    with pytest.raises(PrecisionError):
        value_of(TruncatedSeries.zero(3, 10), tr)


@pytest.mark.parametrize("p,depth", [(3, 3), (3, 0), (5, 2)])
def test_report_generators(p, depth):
    rep = value_group_report(run_ladder(p, depth))
    want = [Fraction(1, p ** j) for j in range(depth + 1)]
    assert [g.as_fraction() for g in rep.generators_up] == want
    assert [g.as_fraction() for g in rep.generators_down] == want
    assert rep.groups_agree and rep.residue_constants_in_prime_field


def test_report_json():
    rep = value_group_report(run_ladder(3, 2)).to_json()
    assert rep["generators"]["upstairs"] == ["1", "1/3", "1/9"]
    assert rep["finite_stage"]["e"] == 1 and rep["finite_stage"]["f"] == 1
    assert rep["metadata"]["defect"]["value"] == 2

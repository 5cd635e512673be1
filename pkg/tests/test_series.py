from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from whmf.errors import NonzeroConstantTerm, PrecisionError
from whmf.series import (BiSeries, QSeries, bi_divide, convolve_kronecker, convolve_naive,
                         format_rational, parse_rational)

ints = st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=40)
fracs = st.lists(st.fractions(max_denominator=50), min_size=1, max_size=25)


@given(ints, ints)
def test_kronecker_product_matches_naive(a, b):
    n = max(len(a), len(b))
    assert convolve_kronecker(a, b, n) == convolve_naive(a, b, n)


@given(fracs, fracs, st.integers(-3, 3), st.integers(-3, 3))
def test_ring_laws(a, b, va, vb):
    f = QSeries(a, va)
    g = QSeries(b, vb)
    assert f * g == g * f
    assert (f + g) - g == f.truncate(min(f.precision, g.precision))


@settings(max_examples=50)
@given(fracs.filter(lambda c: c[0] != 0), st.integers(-4, 4))
def test_inverse(a, v):
    f = QSeries(a, v)
    prod = f * f.invert()
    assert prod.valuation == 0 and prod.leading_coefficient() == 1
    assert all(prod[n] == 0 for n in range(1, prod.precision))


def test_precision_of_product():
    f = QSeries([1, 1], 0, 5)
    g = QSeries([1], -1, 3)
    assert (f * g).precision == min(5 - 1, 3 + 0)


def test_coefficient_beyond_precision():
    with pytest.raises(PrecisionError):
        QSeries([1, 2], 0, 2)[2]


def test_theta_and_integration_invert_each_other():
    f = QSeries([1, 0, 3, Fraction(1, 2)], -1, 4)
    assert f.theta().integrate_theta() == f
    with pytest.raises(NonzeroConstantTerm):
        QSeries([1, 1], 0).integrate_theta()


def test_substitute():
    f = QSeries([1, 2, 3], 0, 3)
    g = f.substitute(2)
    assert g.precision == 6
    assert [g[n] for n in range(6)] == [1, 0, 2, 0, 3, 0]


def test_json_round_trip():
    f = QSeries([Fraction(-3, 7), 0, 5], -2, 3)
    assert QSeries.from_json(f.to_json()) == f
    assert format_rational(Fraction(-3, 7)) == "-3/7"
    assert parse_rational("-3/7") == Fraction(-3, 7)


def test_geometric_series_bivariate():
    # 1/(1 - x y) = sum x^m y^m, outer variable x, inner y
    inner = 6
    one = BiSeries.from_inner(QSeries.one(inner), 6)
    xy = BiSeries([QSeries.zero(inner), QSeries.monomial(1, 1, inner)], 0, 6, inner)
    r = bi_divide(one, one - xy)
    for m in range(6):
        assert r[m] == QSeries.monomial(m, 1, inner)

import pytest

from whmf.errors import FractionalValuation, InvalidLevel
from whmf.levels import (ADMITTED_LEVELS, EtaQuotient, as_level, delta_N, delta_quotient,
                         eta_core, eta_core_naive, expand_eta_quotient, expand_eta_quotient_naive)


def test_pentagonal_against_product():
    assert eta_core(300) == eta_core_naive(300)


def test_k1_values():
    # k1 = 12 sigma0 / sigma1
    assert {N: as_level(N).k1 for N in ADMITTED_LEVELS} == {
        2: 8, 3: 6, 5: 4, 6: 4, 7: 3, 11: 2, 14: 2, 15: 2, 23: 1}


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_delta_sparse_against_naive(N):
    P = 120
    d = delta_N(N, P)
    assert d == expand_eta_quotient_naive(delta_quotient(N), P)
    assert d.valuation == 1 and d[1] == 1 and d.is_integral()


def test_delta2_hecke_multiplicativity():
    # Delta_2 is a Hecke eigenform of level 2: a(mn) = a(m) a(n) for coprime m, n
    d = delta_N(2, 60)
    for m in range(2, 8):
        for n in range(2, 8):
            if m * n < 60 and all(m % p or n % p for p in range(2, 8)):
                assert d[m * n] == d[m] * d[n]


def test_invalid_level():
    with pytest.raises(InvalidLevel):
        as_level(4)


def test_fractional_order_rejected():
    with pytest.raises(FractionalValuation):
        expand_eta_quotient(EtaQuotient.of({1: 1}), 10)

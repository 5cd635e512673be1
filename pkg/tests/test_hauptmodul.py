from fractions import Fraction

import pytest

from whmf.characters import psi
from whmf.errors import HypothesisViolated, InvarianceFailure
from whmf.hauptmodul import (Hauptmodul, hauptmodul, invariance_terms, round_trip,
                             verify_factorization, verify_numeric_invariance)
from whmf.levels import ADMITTED_LEVELS, EtaQuotient, expand_eta_quotient
from whmf.series import QSeries
from whmf.theorems import factorization_instances


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_level_eta_quotient_formula(p):
    # for p - 1 | 24, t = (eta(z)/eta(pz))^(24/(p-1)) and j_p = t + 24/(p-1) + p^(12/(p-1))/t
    P = 150
    e = 24 // (p - 1)
    t = expand_eta_quotient(EtaQuotient.of({1: e, p: -e}), P + 2)
    expect = t + QSeries.one(P) * Fraction(e) + t.invert() * Fraction(p ** (12 // (p - 1)))
    assert hauptmodul(p, P).series.first_difference(expect) is None


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_integral_and_round_trip(N):
    h = hauptmodul(N, 120)
    assert h.series.valuation == -1 and h.series[-1] == 1 and h.c(0) == 0
    assert h.series.is_integral()
    assert round_trip(N, 120)


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_numeric_invariance(N):
    rep = verify_numeric_invariance(hauptmodul(N, invariance_terms(N)))
    assert rep.passed and rep.worst < 1e-40


def test_corrupted_coefficient_is_detected():
    h = hauptmodul(5, invariance_terms(5))
    bad = Hauptmodul(5, h.series + QSeries.monomial(1, 1, h.precision))
    with pytest.raises(InvarianceFailure):
        verify_numeric_invariance(bad)


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_factorization_for_minimal_weights(N):
    for chi, k in factorization_instances(N):
        assert verify_factorization(N, chi, k, 120).passed


def test_factorization_needs_minimal_weight():
    # at N = 23 the weight one character psi is not at its minimal weight
    with pytest.raises(HypothesisViolated):
        verify_factorization(23, psi(23), 1, 50)


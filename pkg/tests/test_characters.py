from fractions import Fraction

import mpmath
import pytest

from whmf.atkin_lehner import al_matrix
from whmf.characters import (AUX_MODULI, bernoulli_chi, family, parse_character, psi,
                             psi_power, trivial, xi)
from whmf.errors import InvalidCharacter, ParityMismatch
from whmf.levels import ADMITTED_LEVELS, as_level, delta_N
from whmf.plus import evaluate_coeffs, mobius, mp_coefficients, sample_points, slash_factor


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_delta_transforms_with_psi_power(N):
    # Delta_N | W_m = psi^k1(W_m) Delta_N, checked numerically at every m | N
    lvl = as_level(N)
    chi = psi_power(N, lvl.k1)
    d = mp_coefficients(delta_N(N, 260))
    with mpmath.workprec(200):
        for m in lvl.divisors[1:]:
            W = al_matrix(N, m).matrix
            z = sample_points(N, m)[0]
            lhs = slash_factor(W, z, lvl.k1) * evaluate_coeffs(d, mobius(W, z))
            rhs = mpmath.mpc(chi.w_value(m)) * evaluate_coeffs(d, z)
            assert abs(lhs - rhs) < mpmath.mpf(10) ** -40 * abs(rhs)


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_psi_family_is_cyclic(N):
    p = psi(N)
    assert (p ** 4).is_trivial() or (p ** 2).is_trivial()
    assert (p * p.inverse()).is_trivial()
    # the trivial character and the character of Delta_N both carry forms
    assert trivial(N).is_consistent() and psi_power(N, as_level(N).k1).is_consistent()


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_names_round_trip(N):
    for chi in family(N, with_aux=True):
        assert parse_character(N, chi.name) == chi


def test_aux_characters():
    assert set(AUX_MODULI) == {14, 15}
    assert parse_character(14, "psi*xi7") == psi(14) * xi(14)
    with pytest.raises(InvalidCharacter):
        parse_character(2, "psi*xi7")
    with pytest.raises(InvalidCharacter):
        parse_character(3, "phi")


def test_parity():
    trivial(7).require_weight(2)
    psi(7).require_weight(3)
    with pytest.raises(ParityMismatch):
        psi(7).require_weight(2)


@pytest.mark.parametrize("disc,value", [
    # B_{1,chi_D} = -h(D) / (w/2) for imaginary quadratic D
    (-3, Fraction(-1, 3)), (-4, Fraction(-1, 2)), (-7, Fraction(-1)), (-23, Fraction(-3)),
])
def test_generalized_bernoulli_weight_one(disc, value):
    assert bernoulli_chi(1, disc) == value


def test_bernoulli_numbers():
    assert [bernoulli_chi(k) for k in (2, 4, 6, 8)] == [
        Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30)]

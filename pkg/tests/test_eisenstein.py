from fractions import Fraction

import pytest

from whmf.characters import family, psi, psi_power, trivial, xi
from whmf.eisenstein import dimension_d, e2, eisenstein_series, rank_for, sturm_margin
from whmf.errors import EmptyPlusSpace, InsufficientPrecision, ParityMismatch
from whmf.levels import ADMITTED_LEVELS, as_level
from whmf.plus import (closed_form_prime, expected_empty, plus_dimension, plus_eisenstein,
                       project_plus, search_aux_w)
from whmf.characters import DEFAULT_AUX_W


def sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def theta(form, P):
    a, b, c = form
    out = [0] * P
    R = 3 * int(P ** 0.5) + 3
    for x in range(-R, R + 1):
        for y in range(-R, R + 1):
            n = a * x * x + b * x * y + c * y * y
            if n < P:
                out[n] += 1
    return out


def test_level_one_eisenstein():
    e4 = eisenstein_series(4, 1, 1, 12)
    e4 = e4 * (1 / e4[0])
    assert [e4[n] for n in range(12)] == [1] + [240 * sigma(3, n) for n in range(1, 12)]
    assert [e2(8)[n] for n in range(8)] == [1] + [-24 * sigma(1, n) for n in range(1, 8)]


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_dimension_table_matches_rank(N):
    # Gamma_0(N) for squarefree N has 2^omega(N) cusps; weight 2 loses one
    cusps = 2 ** len(as_level(N).primes)
    assert dimension_d(N, 4, trivial(N)) == cusps
    assert dimension_d(N, 2, trivial(N)) == cusps - 1
    for k in (2, 4, 6):
        assert rank_for(N, k, trivial(N)) == dimension_d(N, k, trivial(N))


def test_rank_needs_sturm_margin():
    with pytest.raises(InsufficientPrecision):
        rank_for(7, 4, trivial(7), sturm_margin(7, 4) - 1)


def test_parity_mismatch():
    with pytest.raises(ParityMismatch):
        dimension_d(7, 2, psi(7))


@pytest.mark.parametrize("N,form", [(3, (1, 1, 1)), (7, (1, 1, 2)), (11, (1, 1, 3))])
def test_weight_one_is_theta_of_class_number_one_form(N, form):
    P = 60
    E = plus_eisenstein(N, 1, psi(N), P)
    assert [E[n] for n in range(P)] == theta(form, P)


def test_weight_one_level_23_is_genus_average():
    # h(-23) = 3: the principal form and the pair 2x^2 +- xy + 3y^2
    P = 60
    E = plus_eisenstein(23, 1, psi(23), P)
    t1, t2 = theta((1, 1, 6), P), theta((2, 1, 3), P)
    assert [E[n] for n in range(P)] == [Fraction(a + 2 * b, 3) for a, b in zip(t1, t2)]


@pytest.mark.parametrize("N", [2, 3, 5, 7, 11, 23])
@pytest.mark.parametrize("k", [4, 6])
def test_prime_level_closed_form(N, k):
    P = 40
    E = plus_eisenstein(N, k, trivial(N), P)
    c = N ** (k // 2)
    b = {4: 240, 6: -504}[k]
    ek = [1] + [b * sigma(k - 1, n) for n in range(1, P)]
    expect = [Fraction(ek[n] + c * (ek[n // N] if n % N == 0 else 0), 1 + c) for n in range(P)]
    assert [E[n] for n in range(P)] == expect
    assert closed_form_prime(N, k, P) == E


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_plus_projection_verifies(N):
    for chi in family(N):
        for k in range(0, 7):
            if not chi.admissible(k) or expected_empty(N, k, chi) or (k == 0 and not chi.is_trivial()):
                continue
            v = project_plus(N, k, chi, 30).verification
            assert v.get("residual_ok", True) and v.get("span_membership", True), (chi.name, k)


def test_expected_empty_spaces():
    with pytest.raises(EmptyPlusSpace):
        plus_eisenstein(2, 2, trivial(2), 10)
    with pytest.raises(EmptyPlusSpace):
        plus_eisenstein(3, 0, psi_power(3, 2), 10)
    assert plus_dimension(7, 2, trivial(7)) == 0
    assert plus_dimension(7, 4, trivial(7)) == 1


@pytest.mark.parametrize("N", [14, 15])
def test_aux_character_search(N):
    assert DEFAULT_AUX_W[N] in search_aux_w(N)
    assert xi(N).is_consistent()

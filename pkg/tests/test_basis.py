import pytest

from whmf.basis import (dual_character, ell_of, evaluate_faber, f_basis, f_family, holomorphic_basis,
                        k_min, k_min_closed_form)
from whmf.characters import family, psi_power, trivial
from whmf.errors import EmptyBelowMinimalWeight, IndexBelowRange, ParityMismatch
from whmf.hauptmodul import hauptmodul
from whmf.levels import ADMITTED_LEVELS, as_level
from whmf.series import QSeries


@pytest.mark.parametrize("chi_r,k,expect", [(0, 8, 0), (2, 8, 8), (0, 2, 10)])
def test_k_min_level_two(chi_r, k, expect):
    assert k_min(2, psi_power(2, chi_r), k) == expect


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
def test_k_min_closed_form_agrees(N):
    k1 = as_level(N).k1
    for chi in family(N):
        for k in range(-2 * k1, 3 * k1):
            if not chi.admissible(k):
                continue
            kp = k_min(N, chi, k)
            assert (kp - k) % k1 == 0 and 0 <= kp
            cf = k_min_closed_form(N, chi, k)
            if cf is not None:
                assert cf == kp, (chi.name, k)


def test_parity_is_checked():
    with pytest.raises(ParityMismatch):
        k_min(7, trivial(7), 3)


def test_holomorphic_basis_dimension():
    assert len(holomorphic_basis(2, trivial(2), 8, 20)) == 2
    with pytest.raises(EmptyBelowMinimalWeight):
        holomorphic_basis(2, trivial(2), 2, 20)


def test_weight_zero_trivial_character_is_polynomials_in_j():
    P = 30
    fam = f_family(2, trivial(2), 0, 3, P)
    assert fam[0].series == QSeries.one(P)
    assert fam[1].series == hauptmodul(2, P).series.truncate(P)
    assert fam[1].faber == (1, 0)


@pytest.mark.parametrize("N", ADMITTED_LEVELS)
@pytest.mark.parametrize("k", [-2, 0, 1, 2, 4])
def test_gap_property_and_faber_rebuild(N, k):
    P = 25
    for chi in family(N):
        if not chi.admissible(k):
            continue
        kp, ell = ell_of(N, chi, k)
        for elem in f_family(N, chi, k, 6, P):
            s = elem.series
            assert s.valuation == -elem.m and s[-elem.m] == 1
            assert all(s[n] == 0 for n in range(-elem.m + 1, ell + 1))
            assert s.is_integral()
            assert evaluate_faber(elem, N, P) == s


@pytest.mark.parametrize("N", [2, 3, 7, 23])
def test_duality_of_coefficients(N):
    for chi in family(N):
        for k in (-2, 0, 1, 4):
            if not chi.admissible(k):
                continue
            dual = dual_character(chi, k)
            kp, ell = ell_of(N, chi, k)
            assert ell_of(N, dual, 2 - k)[1] == -1 - ell
            fam = f_family(N, chi, k, 8, 10)
            dfam = f_family(N, dual, 2 - k, 8, 10)
            for e in fam:
                for d in dfam:
                    if e.m >= 0 and d.m >= 0 and max(e.m, d.m) <= 8:
                        assert e.series[d.m] == -d.series[e.m]


def test_index_below_range():
    ell = ell_of(2, trivial(2), 8)[1]
    with pytest.raises(IndexBelowRange):
        f_basis(2, trivial(2), 8, -ell - 1, 10)

import math
from fractions import Fraction

import numpy as np
import pytest

from whmf import _accel
from whmf.characters import trivial
from whmf.errors import RealityFailure
from whmf.series import QSeries
from whmf.zeros import (ZERO_LEVELS, Form, certify_no_offarc_zeros, eisenstein_form,
                        low_weight_forms, product_sign_consistency, reality_on_arc)


def test_backends_agree():
    rng = np.random.default_rng(7)
    coeffs = rng.normal(size=80)
    z = rng.uniform(-0.5, 0.5, 300) + 1j * rng.uniform(0.3, 2.0, 300)
    ref = _accel.eval_series_numpy(coeffs, -1, z)
    assert np.allclose(_accel.eval_series(coeffs, -1, z), ref, rtol=1e-10, atol=1e-12)
    vals = np.exp(1j * np.linspace(0, 2 * np.pi, 33)[:-1])[None, :] * np.array([[1.0], [2.0]])
    tot, worst = _accel.phase_sums(vals)
    tot_ref, worst_ref = _accel.phase_sums_numpy(vals)
    assert np.allclose(tot, tot_ref) and np.allclose(worst, worst_ref)
    assert np.allclose(tot, 2 * np.pi)


def test_synthetic_zero_is_located():
    # 1 - q / q0 with q0 = e^{2 pi i (1.1 i)} vanishes at z = 1.1 i
    c = Fraction(math.exp(2 * math.pi * 1.1)).limit_denominator(10 ** 6)
    form = Form(2, 0, trivial(2), QSeries([1, -c], 0, 2))
    rep = certify_no_offarc_zeros(form)
    assert not rep.passed
    assert len(rep.nonzero) == 1
    corner, w = rep.nonzero[0]
    assert w == 1
    assert corner.real <= 0 <= corner.real + 0.02 and corner.imag <= 1.1 <= corner.imag + 0.02


def test_constant_has_no_zeros():
    form = Form(3, 0, trivial(3), QSeries.one(5))
    rep = certify_no_offarc_zeros(form)
    assert rep.passed and not rep.ambiguous
    assert reality_on_arc(form, grid_points=40).sign_changes == 0


@pytest.mark.parametrize("N", ZERO_LEVELS)
def test_low_weight_forms_are_real_on_arcs(N):
    for form in low_weight_forms(N, P=120):
        rep = reality_on_arc(form, grid_points=60)
        assert rep.passed and rep.worst_imag < 1e-40


def test_wrong_branch_is_rejected():
    form = eisenstein_form(2, 4, trivial(2), 120)
    with pytest.raises(RealityFailure):
        reality_on_arc(form, grid_points=40, branch_shift=1)


def test_no_zeros_off_the_arcs_level_two():
    for form in low_weight_forms(2, P=120):
        rep = certify_no_offarc_zeros(form)
        assert rep.passed, (form.label, rep.nonzero, rep.ambiguous)


def test_arc_zero_counts_add_under_products():
    assert product_sign_consistency(P=120, grid_points=120)["additive"]

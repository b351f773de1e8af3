import math
import warnings

import numpy as np
import pytest

from gaussnm.channels import GaussianChannel, identity_channel
from gaussnm.divisibility import (
    ChannelFamily,
    IllConditionedWarning,
    intermediate_map,
    is_markovian,
    negativity_rate,
    nm_matrix,
    total_nm,
)
from gaussnm.linalg import hermitian_eigenvalues
from gaussnm.models import (
    DampingModel,
    QBMModel,
    damping_channel,
    damping_family,
    qbm_F_closed_form,
    qbm_family,
    rotation,
)


def identity_family(n_modes=1, t_max=10.0):
    return ChannelFamily(n_modes, t_max, lambda t: identity_channel(n_modes), name="identity")


def rotation_family(omega=1.3, t_max=10.0):
    return ChannelFamily(1, t_max, lambda t: GaussianChannel(rotation(omega * t), np.zeros((2, 2))))


def depolarizing_family(t_max=40.0):
    """X = exp(-t) I, Y = (1 - exp(-2t)) I / 2."""
    return ChannelFamily(1, t_max, lambda t: damping_channel(2.0 * t))


def cos_damping(alpha=0.1, t_max=2 * math.pi):
    return damping_family(DampingModel(alpha, math.cos), t_max)


def test_family_must_start_at_identity():
    with pytest.raises(ValueError):
        ChannelFamily(1, 1.0, lambda t: damping_channel(1.0 + t))


def test_family_domain_enforced():
    fam = identity_family(t_max=1.0)
    with pytest.raises(ValueError):
        fam.eval(1.5)
    with pytest.raises(ValueError):
        intermediate_map(fam, 0.95, 0.1)
    with pytest.raises(ValueError):
        intermediate_map(fam, 0.5, 0.0)
    with pytest.raises(ValueError):
        negativity_rate(fam, -0.1)


@pytest.mark.parametrize("t, eps", [(0.0, 0.1), (2.0, 1e-3), (7.5, 2.5)])
def test_identity_family_intermediate_map(t, eps):
    im = intermediate_map(identity_family(2), t, eps)
    np.testing.assert_array_equal(im.channel.x, np.eye(4))
    np.testing.assert_array_equal(im.channel.y, np.zeros((4, 4)))
    np.testing.assert_array_equal(nm_matrix(identity_family(2), t, eps).re, 0.0)


@pytest.mark.parametrize("t, eps", [(0.0, 0.5), (1.0, 0.01), (3.0, 2.0)])
def test_constant_damping_intermediate_map_is_damping(t, eps):
    # Gamma(t) = 2 alpha gamma0 t, so the map over [t, t+eps] has Gamma = 2 alpha gamma0 eps
    fam = damping_family(DampingModel(0.1, lambda s: 1.0), 10.0)
    im = intermediate_map(fam, t, eps)
    ref = damping_channel(0.2 * eps)
    np.testing.assert_allclose(im.channel.x, ref.x, rtol=1e-12)
    np.testing.assert_allclose(im.channel.y, ref.y, rtol=1e-10, atol=1e-15)


def test_near_singular_x_uses_pseudo_inverse():
    fam = depolarizing_family()
    with pytest.warns(IllConditionedWarning):
        im = intermediate_map(fam, 30.0, 0.1)
    assert im.x_condition_number > 1e12
    np.testing.assert_allclose(im.channel.x, math.exp(-0.1) * np.eye(2), rtol=1e-6)
    np.testing.assert_allclose(im.channel.y, 0.5 * (1 - math.exp(-0.2)) * np.eye(2), rtol=1e-6)


def test_no_warning_for_well_conditioned_x():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        intermediate_map(depolarizing_family(), 1.0, 0.1)


def test_damping_nm_matrix_eigenvalues():
    fam = cos_damping()
    for t, eps in [(0.5, 0.1), (2.0, 0.3), (4.0, 0.05)]:
        dgamma = 0.2 * (math.sin(t + eps) - math.sin(t))
        np.testing.assert_allclose(
            hermitian_eigenvalues(nm_matrix(fam, t, eps)), sorted([0.0, 1 - math.exp(-dgamma)]), atol=1e-13
        )


def eq19(big_gamma, dtilde, t, eps):
    """Eigenvalues of the intermediate CP matrix for secular QBM, from closed-form integrals."""
    dg = big_gamma(t + eps) - big_gamma(t)
    dd = dtilde(t + eps) - dtilde(t)
    e = math.exp(-big_gamma(t + eps))
    return sorted([0.5 * (math.exp(-dg) + 2 * dd * e - 1), 0.5 * (1 - math.exp(-dg) + 2 * dd * e)])


def test_qbm_nm_matrix_matches_closed_form_eigenvalues():
    # constant gamma = 0.5, Delta = 0.3: Gamma = t, Dtilde = 0.3 (e^t - 1)
    fam = qbm_family(QBMModel(1.0, lambda t: (0.5, 0.3)), 6.0)
    for t, eps in [(1.0, 0.1), (0.0, 0.5), (3.3, 1.2), (5.0, 1e-3)]:
        got = hermitian_eigenvalues(nm_matrix(fam, t, eps))
        ref = eq19(lambda s: s, lambda s: 0.3 * math.expm1(s), t, eps)
        np.testing.assert_allclose(got, ref, rtol=1e-9, atol=1e-12)
    # worked instance at t = 1, eps = 0.1: nu = (-0.2, 0.8) * (1 - e^-0.1)
    got = hermitian_eigenvalues(nm_matrix(fam, 1.0, 0.1))
    np.testing.assert_allclose(got, np.array([-0.2, 0.8]) * -math.expm1(-0.1), rtol=1e-9)


@pytest.mark.parametrize("t", [0.0, 1.0, 9.0])
def test_identity_family_rates_vanish(t):
    s = negativity_rate(identity_family(2), t)
    np.testing.assert_array_equal(s.f, 0.0)
    assert s.big_f == 0.0
    assert s.f.shape == (4,)


def test_damping_rate_at_pi():
    s = negativity_rate(cos_damping(), math.pi)
    assert s.big_f == pytest.approx(0.2, rel=1e-4)
    assert np.all(s.f >= 0)
    assert s.big_f == pytest.approx(s.f.sum())


def test_qbm_constant_rate():
    fam = qbm_family(QBMModel(1.0, lambda t: (0.5, 0.3)), 5.0)
    for t in (0.0, 1.0, 4.0):
        assert negativity_rate(fam, t).big_f == pytest.approx(0.2, rel=1e-4)


def test_rate_finite_at_time_zero():
    for fam in (cos_damping(), qbm_family(QBMModel(2.0, lambda t: (0.5 * math.cos(t), 0.1)), 3.0)):
        s = negativity_rate(fam, 0.0)
        assert math.isfinite(s.big_f)
        assert s.x_condition_number == pytest.approx(1.0)


def test_total_identity_is_zero():
    r = total_nm(identity_family(), 0.0, 5.0, 51)
    assert r.total == 0.0
    assert r.is_markovian()
    assert r.warnings == []


def test_total_damping_cos():
    r = total_nm(cos_damping(), 0.0, 2 * math.pi, 201)
    assert r.total == pytest.approx(0.4, rel=1e-3)
    assert not r.is_markovian()
    length, first, last = r.window()
    assert first == pytest.approx(math.pi / 2, abs=0.05)
    assert last == pytest.approx(3 * math.pi / 2, abs=0.05)


def test_constant_damping_total_zero():
    fam = damping_family(DampingModel(0.3, lambda s: 0.7), 8.0)
    r = total_nm(fam, 0.0, 8.0, 81)
    assert r.total <= 1e-9
    assert is_markovian(fam, 0.0, 8.0, 81)


def test_rotation_family_is_markovian():
    r = total_nm(rotation_family(), 0.0, 10.0, 101)
    assert r.total <= 1e-9
    assert r.is_markovian()


def test_is_markovian_examples():
    assert is_markovian(identity_family(), 0.0, 5.0, 11)
    assert not is_markovian(cos_damping(), 0.0, 2 * math.pi, 201)


def test_grid_validation():
    fam = identity_family()
    with pytest.raises(ValueError):
        total_nm(fam, 0.0, 1.0, 10)
    with pytest.raises(ValueError):
        total_nm(fam, 0.0, 1.0, 1)
    with pytest.raises(ValueError):
        total_nm(fam, 2.0, 1.0, 11)
    with pytest.raises(ValueError):
        total_nm(fam, 0.0, 11.0, 11)


def test_right_edge_uses_backward_step():
    # F(t) = 2 alpha max(0, -gamma(t)) also at t = t_max
    fam = cos_damping(t_max=3.0)
    r = total_nm(fam, 0.0, 3.0, 31)
    assert r.samples[-1].big_f == pytest.approx(0.2 * -math.cos(3.0), rel=1e-4)


def test_damping_sign_criterion_random_rates(rng):
    for _ in range(5):
        a, b, c, phi = rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5), rng.uniform(0.5, 3), rng.uniform(0, 6)
        alpha = rng.uniform(0.05, 0.5)

        def gamma(t):
            return a + b * math.sin(c * t + phi)

        fam = damping_family(DampingModel(alpha, gamma), 6.0)
        for t in rng.uniform(0.0, 5.9, 40):
            g = gamma(t)
            if abs(g) <= 1e-6:
                continue
            s = negativity_rate(fam, t, eps0=1e-6)
            assert (s.big_f > 0) == (g < 0), (t, g, s.big_f)
            assert s.big_f == pytest.approx(2 * alpha * max(0.0, -g), rel=1e-3, abs=1e-6)


def _smooth_coeffs(rng):
    g0, g1, w1, p1 = rng.uniform(-0.5, 0.5), rng.uniform(0.1, 1.0), rng.uniform(0.3, 2.0), rng.uniform(0, 6)
    d0, d1, w2, p2 = rng.uniform(-0.3, 0.8), rng.uniform(0.1, 1.0), rng.uniform(0.3, 2.0), rng.uniform(0, 6)

    def coeffs(t):
        return g0 + g1 * math.sin(w1 * t + p1), d0 + d1 * math.cos(w2 * t + p2)

    return coeffs


def test_qbm_sign_criterion_and_closed_form(rng):
    for _ in range(4):
        coeffs = _smooth_coeffs(rng)
        fam = qbm_family(QBMModel(rng.uniform(0.5, 3.0), coeffs), 6.0)
        for t in rng.uniform(0.0, 5.9, 30):
            g, d = coeffs(t)
            s = negativity_rate(fam, t, eps0=1e-6)
            if abs(d - abs(g)) > 1e-6:
                assert (s.big_f > 0) == (d < abs(g))
            assert s.big_f == pytest.approx(qbm_F_closed_form(g, d), rel=1e-4, abs=1e-6)


def test_extrapolation_residual_scales_with_eps():
    # |r(eps/4) - r(eps/2)| <= C eps on the smooth built-in families; C recorded here
    fam = cos_damping()
    r = total_nm(fam, 0.0, 2 * math.pi, 201)
    assert r.max_residual_ratio < 1.0
    fam = qbm_family(QBMModel(1.0, lambda t: (0.5 * math.sin(t), 0.2 * math.cos(t))), 6.0)
    r = total_nm(fam, 0.0, 6.0, 121)
    assert r.max_residual_ratio < 10.0
    assert r.warnings == []

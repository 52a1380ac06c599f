import numpy as np
import pytest

from oracles import distortion_double_sum, sample_joint_source

from corrsense import (
    ChannelParams,
    CorrelationModel,
    CorrelationStructure,
    ModelValidityError,
    distortion_fullrank_epa,
    distortion_rankone_epa,
    distortion_unity_epa,
    epa_gain,
    lmmse_estimate,
    lmmse_weight,
    normalized_distortion,
)
from conftest import make_instance


def test_epa_gain_reference_value(params):
    a = epa_gain(params, 10)
    assert a.shape == (10,)
    assert np.all(a == a[0])
    assert a[0] == pytest.approx(0.9950371902099892, rel=1e-15)


def test_epa_gain_identity_case():
    p = ChannelParams(1.0, 0.01, 0.0101, 1.0, 5 * 1.01)
    assert epa_gain(p, 5)[0] == pytest.approx(1.0, rel=1e-15)


def test_epa_gain_scaling(params):
    a1 = epa_gain(params, 10)[0]
    a2 = epa_gain(params, 20)[0]
    assert a2 == pytest.approx(a1 / np.sqrt(2.0), rel=1e-14)


def test_lmmse_estimate_linearity(params, fullrank_instance):
    _, corr = fullrank_instance
    a = epa_gain(params, 10)
    g = np.random.default_rng(1).standard_normal(10) + 1j * np.random.default_rng(
        2
    ).standard_normal(10)
    assert lmmse_estimate(0.0, g, a, corr, params) == 0.0
    assert lmmse_estimate(1.0, np.zeros(10), a, corr, params) == 0.0
    w = lmmse_weight(g, a, corr, params)
    assert lmmse_estimate(2.0 + 1j, g, a, corr, params) == w * (2.0 + 1j)


def test_lmmse_weight_noiseless_limit():
    # single perfect sensor, vanishing noises: the weight approaches 1
    corr = CorrelationStructure(np.ones(1), np.ones((1, 1)), CorrelationModel.UNITY)
    p = ChannelParams(1.0, 1e-12, 1e-12, 1.0, 1.0)
    w = lmmse_weight(np.ones(1), np.ones(1), corr, p)
    assert w.real == pytest.approx(1.0, abs=1e-10)
    assert w.imag == 0.0


def test_distortion_at_zero_fading_is_one(params, fullrank_instance):
    _, corr = fullrank_instance
    a = epa_gain(params, 10)
    assert normalized_distortion(np.zeros(10), a, corr, params) == 1.0


def test_distortion_matches_double_sum_oracle(params):
    rng = np.random.default_rng(33)
    for n in (1, 2, 5, 10, 20):
        _, corr = make_instance(100 + n, n_nodes=n)
        a = epa_gain(params, n)
        for _ in range(5):
            g = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
            got = normalized_distortion(g, a, corr, params)
            want = distortion_double_sum(
                g, a, corr.r, corr.C, params.sigma_s2, params.sigma_n2,
                params.sigma_nu2,
            )
            assert got == pytest.approx(want, rel=1e-12)
            assert 0.0 < got <= 1.0


def test_distortion_with_general_gains_matches_oracle(params):
    rng = np.random.default_rng(44)
    _, corr = make_instance(7, n_nodes=6)
    a = rng.uniform(0.1, 2.0, 6)
    g = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    got = normalized_distortion(g, a, corr, params)
    want = distortion_double_sum(
        g, a, corr.r, corr.C, params.sigma_s2, params.sigma_n2, params.sigma_nu2
    )
    assert got == pytest.approx(want, rel=1e-12)


def test_distortion_range_over_models(params):
    rng = np.random.default_rng(5)
    for k in range(200):
        n = int(rng.integers(1, 12))
        model = list(CorrelationModel)[k % 3]
        _, corr = make_instance(1000 + k, n_nodes=n, model=model)
        a = epa_gain(params, n)
        g = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        d = normalized_distortion(g, a, corr, params)
        assert 0.0 < d <= 1.0


def test_distortion_rejects_indefinite_model(params):
    corr = CorrelationStructure(
        np.array([0.95, 0.95]),
        np.array([[1.0, 0.05], [0.05, 1.0]]),
        CorrelationModel.FULL_RANK,
    )
    with pytest.raises(ModelValidityError):
        normalized_distortion(np.ones(2), np.ones(2), corr, params)


def test_unity_closed_form_reference(params):
    assert distortion_unity_epa(10, params) == pytest.approx(
        0.0011007969107963336, rel=1e-13
    )
    # independent substitution
    direct = (10 * 0.01 / 1.01 + 0.0101) / (10 * 10.01 / 1.01 + 0.0101)
    assert distortion_unity_epa(10, params) == pytest.approx(direct, rel=1e-13)


def test_unity_closed_form_limits(params):
    assert distortion_unity_epa(10**6, params) < 1e-7
    small = ChannelParams(1.0, 1e-15, 1e-15, 1.0, 10.0)
    assert distortion_unity_epa(10, small) < 1e-13


def test_rankone_closed_form_reference(params):
    rho = np.exp(-1.0)
    corr = CorrelationStructure(
        np.full(10, rho), np.full((10, 10), rho * rho), CorrelationModel.RANK_ONE
    )
    assert distortion_rankone_epa(corr, params) == pytest.approx(
        0.0080770438481865, rel=1e-12
    )


def test_rankone_monotone_in_correlation(params):
    lo = CorrelationStructure(
        np.full(4, 0.2), np.full((4, 4), 0.04), CorrelationModel.RANK_ONE
    )
    hi = CorrelationStructure(
        np.full(4, 0.8), np.full((4, 4), 0.64), CorrelationModel.RANK_ONE
    )
    assert distortion_rankone_epa(hi, params) < distortion_rankone_epa(lo, params)


def test_rankone_weak_correlation_limit(params):
    eps = 1e-8
    corr = CorrelationStructure(
        np.full(6, eps), np.full((6, 6), eps * eps), CorrelationModel.RANK_ONE
    )
    assert distortion_rankone_epa(corr, params) == pytest.approx(1.0, abs=1e-8)


def test_reduction_identity_unity(params):
    # all-ones correlation collapses the full-rank sums to the unity form
    for n in range(1, 51):
        ones = CorrelationStructure(
            np.ones(n), np.ones((n, n)), CorrelationModel.FULL_RANK
        )
        assert distortion_fullrank_epa(ones, params) == pytest.approx(
            distortion_unity_epa(n, params), rel=1e-12
        )


def test_reduction_identity_rankone(params):
    rng = np.random.default_rng(11)
    for n in range(1, 51):
        for _ in range(2):
            r = rng.uniform(0.05, 1.0, n)
            as_fr = CorrelationStructure(
                r, np.outer(r, r), CorrelationModel.FULL_RANK
            )
            as_ro = CorrelationStructure(
                r, np.outer(r, r), CorrelationModel.RANK_ONE
            )
            assert distortion_fullrank_epa(as_fr, params) == pytest.approx(
                distortion_rankone_epa(as_ro, params), rel=1e-12
            )


def test_unity_special_case_of_exact_distortion(params):
    # unit fading with EPA reduces the exact form to the unity closed form
    n = 10
    corr = CorrelationStructure(
        np.ones(n), np.ones((n, n)), CorrelationModel.UNITY
    )
    a = epa_gain(params, n)
    d = normalized_distortion(np.ones(n), a, corr, params)
    assert d == pytest.approx(distortion_unity_epa(n, params), rel=1e-12)


def test_fullrank_no_fading_matches_exact_form(params, fullrank_instance):
    _, corr = fullrank_instance
    a = epa_gain(params, 10)
    d = normalized_distortion(np.ones(10), a, corr, params)
    assert d == pytest.approx(distortion_fullrank_epa(corr, params), rel=1e-12)


def test_estimator_mse_matches_distortion_physically(params, fullrank_instance):
    # end-to-end oracle: simulate the whole signal chain at a fixed fading
    # draw and compare the empirical MSE against the closed-form distortion
    _, corr = fullrank_instance
    n = 10
    a = epa_gain(params, n)
    rng = np.random.default_rng(77)
    g = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    n_samples = 400_000
    s, s_obs = sample_joint_source(rng, corr.r, corr.C, params.sigma_s2, n_samples)
    noise = (
        rng.standard_normal((n_samples, n)) + 1j * rng.standard_normal((n_samples, n))
    ) * np.sqrt(params.sigma_n2 / 2)
    x = s_obs + noise
    nu = (
        rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples)
    ) * np.sqrt(params.sigma_nu2 / 2)
    z = x @ (a * g) + nu
    w = lmmse_weight(g, a, corr, params)
    mse = float(np.mean(np.abs(s - w * z) ** 2))
    want = normalized_distortion(g, a, corr, params) * params.sigma_s2
    se = mse * np.sqrt(2.0 / n_samples)
    assert abs(mse - want) < 5 * se


def test_fullrank_floor_smoke(params, corr_params):
    # small version of the large-N floor; the acceptance suite runs the full one
    rng = np.random.default_rng(2)
    vals = []
    for _ in range(100):
        _, corr = make_instance(int(rng.integers(0, 2**31)), n_nodes=200)
        vals.append(distortion_fullrank_epa(corr, params))
    assert np.mean(vals) == pytest.approx(0.182, abs=0.02)

"""Scalar LMMSE estimation and its normalized distortion.

All distortions are normalized by the source variance and lie in (0, 1]
whenever the joint correlation model is valid. The closed forms for equal
power allocation without fading (full-rank, rank-one and unity correlation)
are implemented as independent literal expressions so they can cross-check
each other through their algebraic reduction identities.
"""

from __future__ import annotations

import numpy as np

from .channel import ChannelParams, epa_gain, validate_gains
from .correlation import CorrelationStructure
from .quadforms import build_quadratic_forms


def _received_energy(g: np.ndarray, a: np.ndarray, corr: CorrelationStructure,
                     params: ChannelParams) -> float:
    """Denominator of the LMMSE weight: E|z_rx|^2 for the combined sample."""
    qf = build_quadratic_forms(a, corr, params)
    quad = g.conj() @ qf.denominator_mat @ g
    return float(quad.real) + params.sigma_nu2


def lmmse_weight(g: np.ndarray, a: np.ndarray, corr: CorrelationStructure,
                 params: ChannelParams) -> complex:
    """Scalar weight applied to the received sample by the LMMSE estimator.

    The cross-correlation between source and combined sample conjugates the
    channel: the weight is sigma_s2 * sum(a_i rho_i conj(g_i)) over the
    received energy, so the estimate attains the normalized distortion of
    `normalized_distortion` for every complex fading draw.
    """
    g = np.asarray(g, dtype=complex).reshape(-1)
    a = validate_gains(a)
    if g.shape[0] != a.shape[0] or g.shape[0] != corr.n_nodes:
        raise ValueError("dimension mismatch between fading, gains and correlations")
    numer = params.sigma_s2 * np.sum(a * corr.r * np.conj(g))
    return complex(numer / _received_energy(g, a, corr, params))


def lmmse_estimate(z_received: complex, g: np.ndarray, a: np.ndarray,
                   corr: CorrelationStructure, params: ChannelParams) -> complex:
    """LMMSE estimate of the source from the coherently combined sample."""
    return lmmse_weight(g, a, corr, params) * z_received


def normalized_distortion(g: np.ndarray, a: np.ndarray,
                          corr: CorrelationStructure,
                          params: ChannelParams) -> float:
    """Exact normalized distortion of the LMMSE estimate for one fading draw.

    Evaluates the ratio of quadratic forms
    (g^H N1 g + sigma_nu2) / (g^H N2 g + sigma_nu2); the result is real and
    lies in (0, 1] for a valid (PSD) joint correlation model, which is
    enforced here.
    """
    g = np.asarray(g, dtype=complex).reshape(-1)
    a = validate_gains(a)
    if g.shape[0] != a.shape[0] or g.shape[0] != corr.n_nodes:
        raise ValueError("dimension mismatch between fading, gains and correlations")
    corr.require_valid()
    qf = build_quadratic_forms(a, corr, params)
    num = float((g.conj() @ qf.numerator_mat @ g).real) + params.sigma_nu2
    den = float((g.conj() @ qf.denominator_mat @ g).real) + params.sigma_nu2
    return num / den


def distortion_fullrank_epa(corr: CorrelationStructure,
                            params: ChannelParams) -> float:
    """No-fading EPA distortion from the full correlation sums.

    Uses the total of all C entries and the sum of the source correlations;
    with an all-ones C this reduces to the unity closed form and with
    C = r r^T to the rank-one closed form.
    """
    n = corr.n_nodes
    a2 = params.p_tot / (n * (params.sigma_s2 + params.sigma_n2))
    sum_c = float(corr.C.sum())
    sum_r = float(corr.r.sum())
    noise = n * params.sigma_n2 * a2 + params.sigma_nu2
    num = params.sigma_s2 * a2 * (sum_c - sum_r**2) + noise
    den = params.sigma_s2 * a2 * sum_c + noise
    return num / den


def distortion_rankone_epa(corr: CorrelationStructure,
                           params: ChannelParams) -> float:
    """No-fading EPA distortion under the separable (rank-one) correlation model."""
    n = corr.n_nodes
    sx2 = params.sigma_s2 + params.sigma_n2
    sum_r = float(corr.r.sum())
    num = params.p_tot * params.sigma_n2 / sx2 + params.sigma_nu2
    den = (
        params.p_tot * params.sigma_s2 * sum_r**2 / (n * sx2)
        + params.p_tot * params.sigma_n2 / sx2
        + params.sigma_nu2
    )
    return num / den


def distortion_unity_epa(n_nodes: int, params: ChannelParams) -> float:
    """No-fading EPA distortion when every sensor observes the source itself."""
    if n_nodes < 1:
        raise ValueError("n_nodes must be >= 1")
    sx2 = params.sigma_s2 + params.sigma_n2
    num = params.p_tot * params.sigma_n2 / sx2 + params.sigma_nu2
    den = (
        params.p_tot * (n_nodes * params.sigma_s2 + params.sigma_n2) / sx2
        + params.sigma_nu2
    )
    return num / den


def distortion_epa(corr: CorrelationStructure, params: ChannelParams) -> float:
    """Dispatch the no-fading EPA distortion by the structure's model tag."""
    from .correlation import CorrelationModel

    if corr.model is CorrelationModel.UNITY:
        return distortion_unity_epa(corr.n_nodes, params)
    if corr.model is CorrelationModel.RANK_ONE:
        return distortion_rankone_epa(corr, params)
    return distortion_fullrank_epa(corr, params)


def no_fading_distortion(corr: CorrelationStructure, params: ChannelParams) -> float:
    """Distortion with fading neglected (unit channel on every sensor), EPA gains."""
    a = epa_gain(params, corr.n_nodes)
    return normalized_distortion(np.ones(corr.n_nodes), a, corr, params)

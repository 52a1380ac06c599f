"""Quadratic-form matrices underlying the distortion ratio and outage event.

For gains a, correlations (r, C) and channel parameters, the normalized
distortion of the coherent-combining LMMSE estimate is

    d = (g^H N1 g + sigma_nu2) / (g^H N2 g + sigma_nu2)

with N1 = sigma_s2*(B - F) + sigma_n2*W^2 and N2 = sigma_s2*B + sigma_n2*W^2,
where W = diag(a), z = W r, F = z z^H and B = W C W^T. The outage event
{d >= delta} is {g^H E g <= (1-delta)*sigma_nu2} with E = delta*N2 - N1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, validate_gains
from .correlation import CorrelationStructure


@dataclass(frozen=True, eq=False)
class QuadraticForms:
    """Matrices of the distortion quadratic forms for one network instance.

    gains              amplification vector a, shape (N,)
    gain_matrix        W = diag(a)
    weighted_corr_vec  z = W r, gain-weighted source correlations
    signal_outer       F = z z^H, rank-one coherent-signal form
    corr_quad          B = W C W^T, gain-weighted inter-node correlation form
    numerator_mat      distortion-numerator matrix (residual energy)
    denominator_mat    distortion-denominator matrix (received signal energy)
    sigma_s2           source variance the forms were built with
    """

    gains: np.ndarray
    gain_matrix: np.ndarray
    weighted_corr_vec: np.ndarray
    signal_outer: np.ndarray
    corr_quad: np.ndarray
    numerator_mat: np.ndarray
    denominator_mat: np.ndarray
    sigma_s2: float

    @property
    def n_nodes(self) -> int:
        return self.gains.shape[0]


def build_quadratic_forms(
    a: np.ndarray,
    corr: CorrelationStructure,
    params: ChannelParams,
) -> QuadraticForms:
    """Construct all quadratic-form matrices for one (gain, correlation) instance."""
    a = validate_gains(a)
    if a.shape[0] != corr.n_nodes:
        raise ValueError("gain vector length must match the correlation structure")
    W = np.diag(a)
    z = a * corr.r
    F = np.outer(z, z)
    B = np.outer(a, a) * corr.C
    W2 = np.diag(a**2)
    N1 = params.sigma_s2 * (B - F) + params.sigma_n2 * W2
    N2 = params.sigma_s2 * B + params.sigma_n2 * W2
    # Construction self-check: the two forms must differ by the signal term.
    scale = max(float(np.abs(N2).max()), 1e-300)
    if not np.allclose(N2 - N1, params.sigma_s2 * F, rtol=1e-12, atol=1e-12 * scale):
        raise AssertionError("quadratic-form construction inconsistent")
    return QuadraticForms(
        gains=a,
        gain_matrix=W,
        weighted_corr_vec=z,
        signal_outer=F,
        corr_quad=B,
        numerator_mat=N1,
        denominator_mat=N2,
        sigma_s2=params.sigma_s2,
    )


def outage_matrix(qf: QuadraticForms, delta: float) -> np.ndarray:
    """The outage-event matrix E(delta) = delta*N2 - N1 for a target distortion."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError("target distortion must lie in [0, 1]")
    return delta * qf.denominator_mat - qf.numerator_mat

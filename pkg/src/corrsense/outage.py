"""Closed-form outage probability from indefinite-quadratic-form eigenvalues.

For circularly-symmetric Gaussian fading the event {distortion >= delta} is
{g^H E g <= x} with E = delta*N2 - N1 and x = (1-delta)*sigma_nu2. The
quadratic form is a weighted sum of independent unit exponentials, one per
eigenvalue of E, so its CDF has a partial-fraction closed form over the
distinct eigenvalues. For delta in [0, 1] the matrix E has at most one
positive eigenvalue (rank-one PSD signal part minus a PSD part), which
collapses the general expression to a single stable term.

Two independent transcriptions are kept on purpose: `outage_general`
evaluates the full sign-tracked partial-fraction sum, `outage_simplified`
the single-positive-eigenvalue form; tests cross-check them to 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams
from .correlation import CorrelationStructure
from .errors import SpectrumDegeneracyError
from .quadforms import QuadraticForms, outage_matrix


@dataclass(frozen=True)
class SpectrumPolicy:
    """Numerical policy for eigen-spectrum cleanup.

    zero_tol      prune eigenvalues with |lam| <= zero_tol * max|lam|
                  (zero modes contribute a point mass handled by dimension
                  reduction)
    collapse_tol  near-duplicates within this relative gap are canonicalized
                  to their group mean, making ties exact and deterministic
    jitter        relative multiplicative spread applied when the partial
                  fraction requires distinct positive eigenvalues
    """

    zero_tol: float = 1e-9
    collapse_tol: float = 1e-7
    jitter: float = 1e-6


DEFAULT_POLICY = SpectrumPolicy()


@dataclass(frozen=True, eq=False)
class EigenSpectrum:
    """Eigenvalues of an outage matrix, full and after the cleanup policy."""

    lambdas: np.ndarray
    effective: np.ndarray
    lambda_plus: float


def _collapse_duplicates(lam_desc: np.ndarray, tol: float) -> np.ndarray:
    """Replace runs of near-equal sorted eigenvalues by their mean."""
    out = lam_desc.copy()
    n = out.size
    i = 0
    while i < n:
        j = i + 1
        while j < n and abs(out[j - 1] - out[j]) <= tol * max(
            abs(out[j - 1]), abs(out[j])
        ):
            j += 1
        if j - i > 1:
            out[i:j] = out[i:j].mean()
        i = j
    return out


def effective_eigenvalues(
    lam_desc: np.ndarray, policy: SpectrumPolicy = DEFAULT_POLICY
) -> np.ndarray:
    """Apply the pruning and collapse policy to a descending spectrum."""
    scale = float(np.abs(lam_desc).max(initial=0.0))
    if scale == 0.0:
        return lam_desc[:0]
    keep = lam_desc[np.abs(lam_desc) > policy.zero_tol * scale]
    return _collapse_duplicates(keep, policy.collapse_tol)


def eigen_spectrum(
    E: np.ndarray, policy: SpectrumPolicy = DEFAULT_POLICY
) -> EigenSpectrum:
    """Full descending spectrum of a Hermitian matrix plus its effective part."""
    E = np.asarray(E)
    if not np.isfinite(E).all():
        raise ValueError("outage matrix entries must be finite")
    lam = np.linalg.eigvalsh(E)[::-1]
    return EigenSpectrum(
        lambdas=lam,
        effective=effective_eigenvalues(lam, policy),
        lambda_plus=float(lam[0]),
    )


def _separate_positive_ties(lam: np.ndarray, policy: SpectrumPolicy) -> np.ndarray:
    """Deterministically jitter tied positive eigenvalues apart.

    Ties among negative eigenvalues are harmless (the partial-fraction sum
    only indexes positive eigenvalues), so only positive collisions are
    spread. Raises when the spread cannot produce distinct values.
    """
    pos_idx = np.flatnonzero(lam > 0)
    if pos_idx.size < 2 or np.unique(lam[pos_idx]).size == pos_idx.size:
        return lam
    out = lam.copy()
    m = pos_idx.size
    for k, idx in enumerate(pos_idx):
        direction = 1.0 if k % 2 == 0 else -1.0
        out[idx] = lam[idx] * (1.0 + policy.jitter * direction * (1.0 + k / m))
    if np.unique(out[pos_idx]).size != pos_idx.size:
        raise SpectrumDegeneracyError(
            "positive eigenvalues remain tied after jitter; "
            "evaluate this point with the Monte Carlo path instead"
        )
    return out


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not 0.0 <= delta <= 1.0:
        raise ValueError("target distortion must lie in [0, 1]")
    return delta


def outage_from_eigenvalues(
    lam_desc: np.ndarray,
    delta: float,
    sigma_nu2: float,
    policy: SpectrumPolicy = DEFAULT_POLICY,
) -> float:
    """General partial-fraction outage evaluation over a raw spectrum.

    Implements the sign-tracked sum
        u(x) + sum_l (-lam_l)^n / (lam_l * prod_{i != l} (lam_i - lam_l))
               * exp(-x / lam_l) * u(x / lam_l)
    with x = (1 - delta)*sigma_nu2 and n the effective spectrum size, in the
    log domain. For delta < 1 the step function gates the sum to positive
    eigenvalues only.
    """
    delta = _check_delta(delta)
    if delta == 0.0:
        return 1.0
    if delta == 1.0:
        return 0.0
    lam = effective_eigenvalues(np.sort(np.asarray(lam_desc, float))[::-1], policy)
    if lam.size == 0:
        return 1.0
    lam = _separate_positive_ties(lam, policy)
    x = (1.0 - delta) * sigma_nu2
    n = lam.size
    total = 1.0
    for l in np.flatnonzero(lam > 0):
        lam_l = lam[l]
        diffs = np.delete(lam, l) - lam_l
        sign = (-1.0) ** n * np.prod(np.sign(diffs))
        log_mag = (n - 1) * np.log(lam_l) - np.log(np.abs(diffs)).sum()
        total += sign * np.exp(log_mag - x / lam_l)
    return float(min(1.0, max(0.0, total)))


def outage_general(
    qf: QuadraticForms,
    delta: float,
    sigma_nu2: float,
    sigma_g2: float = 1.0,
    policy: SpectrumPolicy = DEFAULT_POLICY,
) -> float:
    """Closed-form outage probability from the exact outage matrix.

    The fading variance folds into the spectrum: g ~ CN(0, sigma_g2 I)
    applied to E is h ~ CN(0, I) applied to sigma_g2*E.
    """
    delta = _check_delta(delta)
    if delta == 0.0:
        return 1.0
    if delta == 1.0:
        return 0.0
    E = sigma_g2 * outage_matrix(qf, delta)
    spectrum = eigen_spectrum(E, policy)
    return outage_from_eigenvalues(spectrum.lambdas, delta, sigma_nu2, policy)


def _single_positive_tail(lam: np.ndarray, x: float) -> float:
    """1 - lam_plus^(n-1) exp(-x/lam_plus) / prod(lam_plus - lam_i).

    Requires exactly one positive entry; exact for repeated negative
    eigenvalues. Product accumulated in the log domain (all factors
    positive).
    """
    pos = lam[lam > 0]
    lam_plus = float(pos[0])
    rest = lam[lam <= 0]
    n = lam.size
    log_tail = (
        (n - 1) * np.log(lam_plus)
        - np.log(lam_plus - rest).sum()
        - x / lam_plus
    )
    p = 1.0 - np.exp(log_tail)
    return float(min(1.0, max(0.0, p)))


def outage_simplified(
    spectrum: EigenSpectrum, delta: float, sigma_nu2: float
) -> float:
    """Single-positive-eigenvalue outage closed form.

    Raises when the effective spectrum has more than one positive
    eigenvalue (use the general form); with none, the outage event is
    certain and 1 is returned.
    """
    delta = _check_delta(delta)
    if delta == 0.0:
        return 1.0
    if delta == 1.0:
        return 0.0
    lam = spectrum.effective
    if lam.size == 0:
        return 1.0
    n_pos = int((lam > 0).sum())
    if n_pos > 1:
        raise ValueError(
            "spectrum has more than one positive eigenvalue; "
            "use the general closed form"
        )
    if n_pos == 0:
        return 1.0
    return _single_positive_tail(lam, (1.0 - delta) * sigma_nu2)


def outage_spectrum(
    qf: QuadraticForms,
    delta: float,
    sigma_g2: float = 1.0,
    policy: SpectrumPolicy = DEFAULT_POLICY,
) -> EigenSpectrum:
    """Spectrum of the fading-folded outage matrix sigma_g2 * E(delta)."""
    return eigen_spectrum(sigma_g2 * outage_matrix(qf, delta), policy)


def outage_epa(
    corr: CorrelationStructure,
    params: ChannelParams,
    n_nodes: int,
    delta: float,
    policy: SpectrumPolicy = DEFAULT_POLICY,
) -> float:
    """Equal-power-allocation outage from the normalized spectrum.

    Works on eig(r r^T - (1-delta) C)/N, the geometry-only factor of the
    approximate spectrum, with the power constant moved into the exponent;
    this is the same evaluation as `outage_simplified` on the approximate
    outage matrix.
    """
    delta = _check_delta(delta)
    if n_nodes != corr.n_nodes:
        raise ValueError("n_nodes must match the correlation structure")
    if delta == 0.0:
        return 1.0
    if delta == 1.0:
        return 0.0
    M = (np.outer(corr.r, corr.r) - (1.0 - delta) * corr.C) / n_nodes
    lam = effective_eigenvalues(np.linalg.eigvalsh(M)[::-1], policy)
    if lam.size == 0:
        return 1.0
    n_pos = int((lam > 0).sum())
    if n_pos > 1:
        raise ValueError(
            "normalized spectrum has more than one positive eigenvalue; "
            "use the general closed form"
        )
    if n_pos == 0:
        return 1.0
    sx2 = params.sigma_s2 + params.sigma_n2
    x_eff = sx2 * (1.0 - delta) * params.sigma_nu2 / (params.p_tot * params.sigma_s2)
    return _single_positive_tail(lam, x_eff)


def outage_curve(
    qf: QuadraticForms,
    deltas: np.ndarray,
    sigma_nu2: float,
    sigma_g2: float = 1.0,
    approx: bool = False,
    policy: SpectrumPolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Closed-form outage over a grid of targets, one eigendecomposition batch.

    approx=True evaluates the signal-only spectrum (observation-noise term
    dropped), the variant used to reproduce the analytic figures.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size and not (deltas.min() >= 0.0 and deltas.max() <= 1.0):
        raise ValueError("target distortions must lie in [0, 1]")
    if approx:
        base = qf.sigma_s2 * qf.signal_outer
        slope = qf.sigma_s2 * qf.corr_quad
        stack = base[None] - (1.0 - deltas)[:, None, None] * slope
    else:
        stack = (
            deltas[:, None, None] * qf.denominator_mat[None]
            - qf.numerator_mat[None]
        )
    lams = np.linalg.eigvalsh(sigma_g2 * stack)[:, ::-1]
    return np.array(
        [
            outage_from_eigenvalues(lams[k], deltas[k], sigma_nu2, policy)
            for k in range(deltas.size)
        ]
    )


def top_eigenvalue(qf: QuadraticForms, delta: float, mode: str = "exact") -> float:
    """Largest eigenvalue of the outage matrix, exact or signal-only approximate.

    The approximate mode drops the observation-noise term, valid when
    sigma_n2 is small against sigma_s2; it never exceeds the exact value
    by more than sigma_n2 * max(a_i^2).
    """
    delta = _check_delta(delta)
    if mode == "exact":
        return float(np.linalg.eigvalsh(outage_matrix(qf, delta))[-1])
    if mode == "approx":
        M = qf.signal_outer - (1.0 - delta) * qf.corr_quad
        return float(qf.sigma_s2 * np.linalg.eigvalsh(M)[-1])
    raise ValueError("mode must be 'exact' or 'approx'")


def weyl_lower_bound(qf: QuadraticForms, delta: float, sigma_s2: float) -> float:
    """Weyl lower bound on the top outage eigenvalue, clamped at zero."""
    delta = _check_delta(delta)
    lam_f = float(np.linalg.eigvalsh(qf.signal_outer)[-1])
    lam_b = float(np.linalg.eigvalsh(qf.corr_quad)[-1])
    return max(0.0, sigma_s2 * (lam_f - (1.0 - delta) * lam_b))


def normalized_top_eigenvalue(corr: CorrelationStructure, delta: float) -> float:
    """Geometry-only top eigenvalue factor, eig(r r^T - (1-delta) C)_max / N."""
    delta = _check_delta(delta)
    M = np.outer(corr.r, corr.r) - (1.0 - delta) * corr.C
    return float(np.linalg.eigvalsh(M)[-1]) / corr.n_nodes


def epa_eigenvalue_cap(params: ChannelParams) -> float:
    """Upper bound on the EPA top eigenvalue: p_tot*sigma_s2/(sigma_s2+sigma_n2)."""
    return params.p_tot * params.sigma_s2 / (params.sigma_s2 + params.sigma_n2)

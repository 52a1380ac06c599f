"""Built-in cross-validation of the closed forms against the Monte Carlo oracle."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .channel import epa_gain
from .correlation import CorrelationModel, CorrelationStructure, build_correlation
from .estimator import (
    distortion_fullrank_epa,
    distortion_rankone_epa,
    distortion_unity_epa,
    normalized_distortion,
)
from .outage import outage_curve, outage_general, top_eigenvalue, weyl_lower_bound
from .quadforms import build_quadratic_forms
from .simulation import SimConfig, geometry_for_index, mc_outage


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _check_reduction_identities(config: SimConfig) -> CheckResult:
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    for n in (1, 2, 3, 5, 10, 20, 50):
        for _ in range(3):
            r = rng.uniform(0.05, 1.0, n)
            ones = CorrelationStructure(
                np.ones(n), np.ones((n, n)), CorrelationModel.FULL_RANK
            )
            ro_as_fr = CorrelationStructure(
                r, np.outer(r, r), CorrelationModel.FULL_RANK
            )
            ro = CorrelationStructure(r, np.outer(r, r), CorrelationModel.RANK_ONE)
            u = distortion_unity_epa(n, config.channel)
            da = distortion_fullrank_epa(ones, config.channel)
            db = distortion_fullrank_epa(ro_as_fr, config.channel)
            dc = distortion_rankone_epa(ro, config.channel)
            worst = max(worst, abs(da - u) / u, abs(db - dc) / dc)
    return CheckResult(
        "reduction_identities",
        worst < 1e-12,
        f"max relative mismatch {worst:.2e} (tolerance 1e-12)",
    )


def _check_closed_vs_mc(config: SimConfig, threads: int) -> CheckResult:
    deltas = np.round(np.arange(0.1, 0.91, 0.1), 10)
    inside = 0
    total = 0
    a = epa_gain(config.channel, config.n_nodes)
    for g in range(5):
        cfg = replace(config, n_geometries=1, n_fading_draws=20000, seed=config.seed + g)
        geom = geometry_for_index(cfg, 0)
        corr = build_correlation(geom, cfg.corr_params, cfg.model)
        qf = build_quadratic_forms(a, corr, cfg.channel)
        points = mc_outage(cfg, deltas, threads=threads)
        for pt in points:
            p = outage_general(
                qf, pt.delta, cfg.channel.sigma_nu2, cfg.channel.sigma_g2
            )
            total += 1
            if pt.ci_low <= p <= pt.ci_high:
                inside += 1
    frac = inside / total
    return CheckResult(
        "closed_vs_mc",
        frac >= 0.9,
        f"{inside}/{total} closed-form points inside the 99% Wilson interval",
    )


def _check_edge_exactness(config: SimConfig, threads: int) -> CheckResult:
    a = epa_gain(config.channel, config.n_nodes)
    geom = geometry_for_index(config, 0)
    corr = build_correlation(geom, config.corr_params, config.model)
    qf = build_quadratic_forms(a, corr, config.channel)
    p0 = outage_general(qf, 0.0, config.channel.sigma_nu2, config.channel.sigma_g2)
    p1 = outage_general(qf, 1.0, config.channel.sigma_nu2, config.channel.sigma_g2)
    d_zero = normalized_distortion(
        np.zeros(config.n_nodes), a, corr, config.channel
    )
    cfg = replace(config, n_geometries=1, n_fading_draws=2000)
    points = mc_outage(cfg, np.array([0.0, 1.0]), threads=threads)
    ok = (
        p0 == 1.0
        and p1 == 0.0
        and d_zero == 1.0
        and points[0].p_hat == 1.0
        and points[1].p_hat == 0.0
    )
    return CheckResult(
        "edge_exactness",
        ok,
        f"P(0)={p0}, P(1)={p1}, d(g=0)={d_zero}, "
        f"mc P(0)={points[0].p_hat}, mc P(1)={points[1].p_hat}",
    )


def _check_bound_sandwich(config: SimConfig) -> CheckResult:
    deltas = np.linspace(0.0, 1.0, 21)
    cap = config.channel.p_tot * config.channel.sigma_s2 / (
        config.channel.sigma_s2 + config.channel.sigma_n2
    )
    a = epa_gain(config.channel, config.n_nodes)
    violations = 0
    for g in range(20):
        geom = geometry_for_index(config, g)
        corr = build_correlation(geom, config.corr_params, CorrelationModel.FULL_RANK)
        qf = build_quadratic_forms(a, corr, config.channel)
        for delta in deltas:
            lo = weyl_lower_bound(qf, delta, config.channel.sigma_s2)
            mid = max(0.0, top_eigenvalue(qf, delta, "approx"))
            if lo > mid + 1e-10 * cap or mid > cap * (1 + 1e-10):
                violations += 1
    return CheckResult(
        "bound_sandwich",
        violations == 0,
        f"{violations} violations over 20 geometries x 21 targets",
    )


def _check_monotonicity(config: SimConfig) -> CheckResult:
    deltas = np.linspace(0.0, 1.0, 41)
    a = epa_gain(config.channel, config.n_nodes)
    bad = 0
    for g in range(10):
        geom = geometry_for_index(config, g)
        corr = build_correlation(geom, config.corr_params, config.model)
        qf = build_quadratic_forms(a, corr, config.channel)
        curve = outage_curve(
            qf, deltas, config.channel.sigma_nu2, config.channel.sigma_g2
        )
        if np.any(np.diff(curve) > 1e-12):
            bad += 1
        tops = np.array([top_eigenvalue(qf, d, "exact") for d in deltas])
        if np.any(np.diff(tops) < -1e-12):
            bad += 1
    return CheckResult(
        "monotonicity",
        bad == 0,
        f"{bad} non-monotone curves over 10 geometries",
    )


def run_validation(config: SimConfig, threads: int = 1) -> list[CheckResult]:
    """Run every consistency check; returns one result per check."""
    return [
        _check_reduction_identities(config),
        _check_closed_vs_mc(config, threads),
        _check_edge_exactness(config, threads),
        _check_bound_sandwich(config),
        _check_monotonicity(config),
    ]

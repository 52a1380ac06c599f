"""Seeded Monte Carlo engine: the empirical oracle for every closed form.

Randomness is organized in counter-addressed substreams: the node layout
for geometry index g comes from the stream keyed (seed, GEOM, N, g) and the
fading draws for that geometry from streams keyed (seed, FADE, N, g, block)
over fixed-size trial blocks. Every trial is therefore a pure function of
(seed, geometry index, trial index) and results do not depend on how work
units are scheduled across threads; reductions walk units in index order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import ChannelParams, epa_gain
from .correlation import (
    CorrelationModel,
    CorrelationParams,
    CorrelationStructure,
    build_correlation,
)
from .estimator import (
    distortion_epa,
    distortion_fullrank_epa,
    distortion_rankone_epa,
    distortion_unity_epa,
)
from .geometry import NetworkGeometry, sample_geometry
from .kernels import distortion_samples
from .outage import DEFAULT_POLICY, SpectrumPolicy, epa_eigenvalue_cap, outage_curve
from .quadforms import QuadraticForms, build_quadratic_forms

# Two-sided 99% normal quantile, used for Wilson binomial intervals.
Z99 = 2.5758293035489004

# Fading trials are drawn in fixed blocks; the block is the unit of work.
FADING_BLOCK = 8192

_GEOM_DOMAIN = 0x47
_FADE_DOMAIN = 0x46


@dataclass(frozen=True)
class SimConfig:
    """Complete description of one simulation experiment."""

    n_nodes: int = 10
    side: float = 20.0
    source_distance: float = 30.0
    corr_params: CorrelationParams = field(
        default_factory=lambda: CorrelationParams(250.0, 1.0)
    )
    model: CorrelationModel = CorrelationModel.FULL_RANK
    channel: ChannelParams = field(default_factory=ChannelParams.from_db)
    n_geometries: int = 1000
    n_fading_draws: int = 1
    seed: int = 1
    fading_enabled: bool = True

    def __post_init__(self):
        if self.n_nodes < 1 or self.n_geometries < 1 or self.n_fading_draws < 1:
            raise ValueError("counts must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        object.__setattr__(self, "model", CorrelationModel(self.model))


@dataclass(frozen=True)
class OutagePoint:
    """Empirical outage estimate at one distortion target."""

    delta: float
    p_hat: float
    ci_low: float
    ci_high: float
    n_trials: int

    def __post_init__(self):
        if not 0.0 <= self.ci_low <= self.p_hat <= self.ci_high <= 1.0:
            raise ValueError("interval must satisfy 0 <= low <= p <= high <= 1")


@dataclass(frozen=True)
class DistortionSample:
    """One simulated distortion realization, tagged for CSV emission."""

    geometry_index: int
    trial_index: int
    d_tilde: float


@dataclass(frozen=True)
class NodeSweepRow:
    n_nodes: int
    model: str
    mean_d: float
    std_err: float


@dataclass(frozen=True)
class EigenSweepRow:
    source_distance: float
    delta: float
    lambda_exact_norm: float
    lambda_bound_norm: float
    stderr_exact: float
    stderr_bound: float


@dataclass(frozen=True)
class OutageCurvePoint:
    delta: float
    model: str
    p_closed: float
    p_mc: float
    ci_low: float
    ci_high: float


def _rng(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def geometry_for_index(config: SimConfig, g_idx: int) -> NetworkGeometry:
    """The exact geometry used for a given geometry index of a config.

    Node positions depend only on (seed, n_nodes, g_idx); the source
    placement consumes no randomness, so layouts are shared across
    source-distance sweeps.
    """
    rng = _rng(config.seed, _GEOM_DOMAIN, config.n_nodes, g_idx)
    return sample_geometry(rng, config.n_nodes, config.side, config.source_distance)


def draw_fading(
    rng: np.random.Generator, n: int, sigma_g2: float
) -> np.ndarray:
    """One circularly-symmetric complex Gaussian fading vector.

    Real and imaginary parts are each N(0, sigma_g2/2) so E|g_i|^2 equals
    sigma_g2.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    scale = np.sqrt(sigma_g2 / 2.0)
    re = rng.standard_normal(n)
    im = rng.standard_normal(n)
    return (re + 1j * im) * scale


def _fading_block(config: SimConfig, g_idx: int, block_idx: int, m: int) -> np.ndarray:
    """Block of m fading rows for one geometry; trial t sits at row t % FADING_BLOCK.

    Real/imaginary parts are drawn interleaved per trial so a row's value
    never depends on the block length.
    """
    rng = _rng(config.seed, _FADE_DOMAIN, config.n_nodes, g_idx, block_idx)
    arr = rng.standard_normal((m, 2, config.n_nodes))
    scale = np.sqrt(config.channel.sigma_g2 / 2.0)
    return (arr[:, 0, :] + 1j * arr[:, 1, :]) * scale


def _blocks(n_draws: int) -> list[tuple[int, int]]:
    out = []
    start = 0
    b = 0
    while start < n_draws:
        size = min(FADING_BLOCK, n_draws - start)
        out.append((b, size))
        start += size
        b += 1
    return out


def _map_ordered(worker, units, threads: int) -> list:
    """Apply worker to units, returning results in unit order."""
    if threads <= 1:
        return [worker(u) for u in units]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, units))


def wilson_interval(k: int, n: int, z: float = Z99) -> tuple[float, float]:
    """Wilson score interval for k successes in n Bernoulli trials.

    The interval always contains the point estimate k/n; at the extremes
    the exact endpoints (0 and 1) are returned without round-off.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = k / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    lo = 0.0 if k == 0 else max(0.0, min(p, center - half))
    hi = 1.0 if k == n else min(1.0, max(p, center + half))
    return lo, hi


def _instances(
    config: SimConfig, model: CorrelationModel | None = None
) -> list[tuple[CorrelationStructure, QuadraticForms]]:
    """Correlation structure and EPA quadratic forms per geometry index."""
    model = config.model if model is None else model
    a = epa_gain(config.channel, config.n_nodes)
    out = []
    for g in range(config.n_geometries):
        geom = geometry_for_index(config, g)
        corr = build_correlation(geom, config.corr_params, model)
        out.append((corr, build_quadratic_forms(a, corr, config.channel)))
    return out


def mc_outage(
    config: SimConfig,
    deltas: np.ndarray,
    threads: int = 1,
) -> list[OutagePoint]:
    """Empirical outage probability over the fading (and geometry) draws.

    A trial counts as outage when its distortion is >= the target. Trials
    pool across geometries: n_geometries * n_fading_draws Bernoulli samples
    per grid point, with 99% Wilson intervals.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size and not (deltas.min() >= 0.0 and deltas.max() <= 1.0):
        raise ValueError("grid values must lie in [0, 1]")
    instances = _instances(config)
    sigma_nu2 = config.channel.sigma_nu2
    blocks = _blocks(config.n_fading_draws)
    units = [
        (g, b, m) for g in range(config.n_geometries) for (b, m) in blocks
    ]

    def worker(unit):
        g, b, m = unit
        _, qf = instances[g]
        fades = _fading_block(config, g, b, m)
        d = distortion_samples(fades, qf.numerator_mat, qf.denominator_mat, sigma_nu2)
        return (d[:, None] >= deltas[None, :]).sum(axis=0)

    counts = np.zeros(deltas.size, dtype=np.int64)
    for c in _map_ordered(worker, units, threads):
        counts += c
    n = config.n_geometries * config.n_fading_draws
    points = []
    for k, delta in enumerate(deltas):
        lo, hi = wilson_interval(int(counts[k]), n)
        points.append(
            OutagePoint(float(delta), counts[k] / n, lo, hi, n)
        )
    return points


def _geometry_distortion_stats(config: SimConfig, g: int, qf: QuadraticForms):
    """(sum, sum of squares, count) of the fading-draw distortions for one geometry."""
    sigma_nu2 = config.channel.sigma_nu2
    total = 0.0
    total_sq = 0.0
    for b, m in _blocks(config.n_fading_draws):
        d = distortion_samples(
            _fading_block(config, g, b, m),
            qf.numerator_mat,
            qf.denominator_mat,
            sigma_nu2,
        )
        total += d.sum()
        total_sq += (d * d).sum()
    return total, total_sq, config.n_fading_draws


def mc_distortion_mean(
    config: SimConfig, threads: int = 1
) -> tuple[float, float]:
    """Mean normalized distortion and its standard error.

    With fading disabled each geometry contributes its exact no-fading EPA
    closed-form value; otherwise the average over the geometry's fading
    draws. The standard error is taken across geometry means, or across
    trials when there is a single geometry.
    """
    instances = _instances(config)

    def worker(g: int):
        corr, qf = instances[g]
        if not config.fading_enabled:
            v = distortion_epa(corr, config.channel)
            return v, v * v, 1
        return _geometry_distortion_stats(config, g, qf)

    stats = _map_ordered(worker, range(config.n_geometries), threads)
    means = np.array([s[0] / s[2] for s in stats])
    grand = float(means.mean())
    if config.n_geometries > 1:
        se = float(means.std(ddof=1) / np.sqrt(config.n_geometries))
    else:
        total, total_sq, n = stats[0]
        if n > 1:
            var = max(0.0, (total_sq - total * total / n) / (n - 1))
            se = float(np.sqrt(var / n))
        else:
            se = 0.0
    return grand, se


def mc_distortion_records(
    config: SimConfig, threads: int = 1
) -> list[DistortionSample]:
    """Per-trial distortion realizations, geometry-major then trial order."""
    instances = _instances(config)
    sigma_nu2 = config.channel.sigma_nu2
    blocks = _blocks(config.n_fading_draws)
    units = [(g, b, m) for g in range(config.n_geometries) for (b, m) in blocks]

    def worker(unit):
        g, b, m = unit
        _, qf = instances[g]
        fades = _fading_block(config, g, b, m)
        return distortion_samples(
            fades, qf.numerator_mat, qf.denominator_mat, sigma_nu2
        )

    records = []
    for (g, b, _), d in zip(units, _map_ordered(worker, units, threads)):
        base = b * FADING_BLOCK
        records.extend(
            DistortionSample(g, base + t, float(v)) for t, v in enumerate(d)
        )
    return records


_ALL_MODELS = (
    CorrelationModel.FULL_RANK,
    CorrelationModel.RANK_ONE,
    CorrelationModel.UNITY,
)


def sweep_nodes(
    config: SimConfig, node_counts: list[int], threads: int = 1
) -> list[NodeSweepRow]:
    """Mean no-fading EPA distortion per (node count, correlation model).

    Node layouts are shared across the three models at each count, so the
    rows differ only through the correlation structure. Equivalent to
    mc_distortion_mean with fading disabled for each (n, model) pair.
    """
    if not node_counts:
        raise ValueError("node_counts must be nonempty")
    rows = []
    for n in node_counts:
        cfg = replace(config, n_nodes=int(n), fading_enabled=False)

        def worker(g: int):
            geom = geometry_for_index(cfg, g)
            corr = build_correlation(geom, cfg.corr_params, CorrelationModel.FULL_RANK)
            ro = CorrelationStructure(
                corr.r, np.outer(corr.r, corr.r), CorrelationModel.RANK_ONE
            )
            return (
                distortion_fullrank_epa(corr, cfg.channel),
                distortion_rankone_epa(ro, cfg.channel),
            )

        vals = np.array(_map_ordered(worker, range(cfg.n_geometries), threads))
        unity = distortion_unity_epa(int(n), cfg.channel)
        for j, model in enumerate(_ALL_MODELS):
            if model is CorrelationModel.UNITY:
                mean, se = unity, 0.0
            else:
                col = vals[:, j]
                mean = float(col.mean())
                se = (
                    float(col.std(ddof=1) / np.sqrt(cfg.n_geometries))
                    if cfg.n_geometries > 1
                    else 0.0
                )
            rows.append(NodeSweepRow(int(n), model.value, mean, se))
    return rows


def sweep_eigenvalue(
    config: SimConfig,
    source_distances: list[float],
    deltas: np.ndarray,
    threads: int = 1,
    mode: str = "exact",
) -> list[EigenSweepRow]:
    """Geometry-averaged top outage eigenvalue and its Weyl bound.

    Both columns are normalized by the EPA eigenvalue cap
    p_tot*sigma_s2/(sigma_s2+sigma_n2) and clamped at zero, matching the
    zero-clamp convention of the bound.
    """
    if not source_distances or not len(deltas):
        raise ValueError("grids must be nonempty")
    if mode not in ("exact", "approx"):
        raise ValueError("mode must be 'exact' or 'approx'")
    deltas = np.asarray(deltas, dtype=float)
    if not (deltas.min() >= 0.0 and deltas.max() <= 1.0):
        raise ValueError("grid values must lie in [0, 1]")
    params = config.channel
    cap = epa_eigenvalue_cap(params)
    rows = []
    for dist in source_distances:
        cfg = replace(config, source_distance=float(dist))
        instances = _instances(cfg, CorrelationModel.FULL_RANK)

        def worker(g: int):
            _, qf = instances[g]
            if mode == "exact":
                stack = (
                    deltas[:, None, None] * qf.denominator_mat[None]
                    - qf.numerator_mat[None]
                )
                top = np.linalg.eigvalsh(stack)[:, -1]
            else:
                stack = qf.sigma_s2 * (
                    qf.signal_outer[None]
                    - (1.0 - deltas)[:, None, None] * qf.corr_quad[None]
                )
                top = np.linalg.eigvalsh(stack)[:, -1]
            lam_f = np.linalg.eigvalsh(qf.signal_outer)[-1]
            lam_b = np.linalg.eigvalsh(qf.corr_quad)[-1]
            bound = np.maximum(
                0.0, params.sigma_s2 * (lam_f - (1.0 - deltas) * lam_b)
            )
            return np.maximum(0.0, top) / cap, bound / cap

        tops = np.empty((cfg.n_geometries, deltas.size))
        bounds = np.empty((cfg.n_geometries, deltas.size))
        for g, (t, bnd) in enumerate(
            _map_ordered(worker, range(cfg.n_geometries), threads)
        ):
            tops[g] = t
            bounds[g] = bnd
        se_scale = (
            1.0 / np.sqrt(cfg.n_geometries) if cfg.n_geometries > 1 else 0.0
        )
        for k, delta in enumerate(deltas):
            rows.append(
                EigenSweepRow(
                    float(dist),
                    float(delta),
                    float(tops[:, k].mean()),
                    float(bounds[:, k].mean()),
                    float(tops[:, k].std(ddof=1) * se_scale)
                    if cfg.n_geometries > 1
                    else 0.0,
                    float(bounds[:, k].std(ddof=1) * se_scale)
                    if cfg.n_geometries > 1
                    else 0.0,
                )
            )
    return rows


def outage_curves(
    config: SimConfig,
    deltas: np.ndarray,
    models: tuple[CorrelationModel, ...] = _ALL_MODELS,
    threads: int = 1,
    approx: bool = False,
    policy: SpectrumPolicy = DEFAULT_POLICY,
) -> list[OutageCurvePoint]:
    """Closed-form and empirical outage curves per correlation model.

    Each geometry contributes one closed-form curve (averaged across
    geometries) and n_fading_draws Monte Carlo trials; geometry and fading
    streams are shared across models so the comparison is paired.
    """
    deltas = np.asarray(deltas, dtype=float)
    if deltas.size and not (deltas.min() >= 0.0 and deltas.max() <= 1.0):
        raise ValueError("grid values must lie in [0, 1]")
    sigma_nu2 = config.channel.sigma_nu2
    sigma_g2 = config.channel.sigma_g2
    blocks = _blocks(config.n_fading_draws)
    points = []
    for model in models:
        instances = _instances(config, CorrelationModel(model))

        def worker(g: int):
            _, qf = instances[g]
            closed = outage_curve(
                qf, deltas, sigma_nu2, sigma_g2, approx=approx, policy=policy
            )
            counts = np.zeros(deltas.size, dtype=np.int64)
            for b, m in blocks:
                d = distortion_samples(
                    _fading_block(config, g, b, m),
                    qf.numerator_mat,
                    qf.denominator_mat,
                    sigma_nu2,
                )
                counts += (d[:, None] >= deltas[None, :]).sum(axis=0)
            return closed, counts

        closed_sum = np.zeros(deltas.size)
        counts = np.zeros(deltas.size, dtype=np.int64)
        for closed, c in _map_ordered(worker, range(config.n_geometries), threads):
            closed_sum += closed
            counts += c
        p_closed = closed_sum / config.n_geometries
        n = config.n_geometries * config.n_fading_draws
        for k, delta in enumerate(deltas):
            lo, hi = wilson_interval(int(counts[k]), n)
            points.append(
                OutageCurvePoint(
                    float(delta),
                    CorrelationModel(model).value,
                    float(p_closed[k]),
                    counts[k] / n,
                    lo,
                    hi,
                )
            )
    return points

"""Benchmark the compiled distortion kernel against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--draws N] [--repeats K]
"""

import argparse
import time

import numpy as np

from corrsense import ChannelParams, build_quadratic_forms, epa_gain
from corrsense import _core_py
from corrsense.correlation import CorrelationModel, CorrelationParams, build_correlation
from corrsense.geometry import sample_geometry
from corrsense.kernels import distortion_samples

try:
    from corrsense import _core
except ImportError:
    _core = None


def bench(impl, g, num_mat, den_mat, sigma_nu2, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        distortion_samples(g, num_mat, den_mat, sigma_nu2, impl=impl)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    params = ChannelParams.from_db()
    rng = np.random.default_rng(0)
    print(f"{'N':>4} {'draws':>8} {'python':>12} {'compiled':>12} {'speedup':>8}")
    for n in (5, 10, 20, 50):
        geom = sample_geometry(rng, n, 20.0, 30.0)
        corr = build_correlation(
            geom, CorrelationParams(250.0, 1.0), CorrelationModel.FULL_RANK
        )
        qf = build_quadratic_forms(epa_gain(params, n), corr, params)
        g = (
            rng.standard_normal((args.draws, n))
            + 1j * rng.standard_normal((args.draws, n))
        ) / np.sqrt(2)
        t_py = bench(
            _core_py, g, qf.numerator_mat, qf.denominator_mat,
            params.sigma_nu2, args.repeats,
        )
        if _core is None:
            print(f"{n:>4} {args.draws:>8} {t_py * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>8}")
            continue
        t_c = bench(
            _core, g, qf.numerator_mat, qf.denominator_mat,
            params.sigma_nu2, args.repeats,
        )
        d_py = distortion_samples(
            g, qf.numerator_mat, qf.denominator_mat, params.sigma_nu2, impl=_core_py
        )
        d_c = distortion_samples(
            g, qf.numerator_mat, qf.denominator_mat, params.sigma_nu2, impl=_core
        )
        assert np.allclose(d_py, d_c, rtol=1e-12)
        print(
            f"{n:>4} {args.draws:>8} {t_py * 1e3:>10.2f}ms {t_c * 1e3:>10.2f}ms "
            f"{t_py / t_c:>7.2f}x"
        )


if __name__ == "__main__":
    main()

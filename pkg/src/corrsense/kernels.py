"""Backend selection for the batched distortion kernel.

The compiled extension is preferred when importable; setting the
environment variable CORRSENSE_KERNEL=python before import forces the
numpy fallback. Both backends implement the same contract and agree to
floating-point round-off.
"""

from __future__ import annotations

import os

import numpy as np

from . import _core_py

if os.environ.get("CORRSENSE_KERNEL", "").lower() == "python":
    _impl = _core_py
    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _core_py
        BACKEND = "python"


def kernel_backend() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return BACKEND


def distortion_samples(
    g: np.ndarray,
    num_mat: np.ndarray,
    den_mat: np.ndarray,
    sigma_nu2: float,
    impl=None,
) -> np.ndarray:
    """Normalized distortion for each row of a complex fading batch.

    g is (n_draws, N) complex; num_mat/den_mat are the symmetric
    quadratic-form matrices. `impl` overrides the backend module (used by
    tests and the benchmark).
    """
    backend = _impl if impl is None else impl
    g = np.asarray(g, dtype=complex)
    if g.ndim == 1:
        g = g[None, :]
    g_re = np.ascontiguousarray(g.real)
    g_im = np.ascontiguousarray(g.imag)
    num_mat = np.ascontiguousarray(num_mat, dtype=float)
    den_mat = np.ascontiguousarray(den_mat, dtype=float)
    out = np.empty(g.shape[0])
    backend.distortion_batch(g_re, g_im, num_mat, den_mat, float(sigma_nu2), out)
    return out

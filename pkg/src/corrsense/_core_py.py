"""Pure-numpy implementation of the batched distortion kernel.

Fallback backend used when the compiled extension is unavailable or
explicitly requested; same contract as corrsense._core.
"""

import numpy as np


def distortion_batch(g_re, g_im, num_mat, den_mat, sigma_nu2, out):
    """Normalized distortion for a batch of fading draws.

    g_re, g_im : (n_draws, N) real and imaginary fading parts
    num_mat, den_mat : (N, N) symmetric quadratic-form matrices
    sigma_nu2 : receiver noise variance
    out : (n_draws,) preallocated result buffer

    For a real symmetric matrix M the Hermitian form g^H M g equals
    re(g)^T M re(g) + im(g)^T M im(g).
    """
    qn = np.einsum("ij,ij->i", g_re @ num_mat, g_re)
    qn += np.einsum("ij,ij->i", g_im @ num_mat, g_im)
    qd = np.einsum("ij,ij->i", g_re @ den_mat, g_re)
    qd += np.einsum("ij,ij->i", g_im @ den_mat, g_im)
    np.divide(qn + sigma_nu2, qd + sigma_nu2, out=out)
    return out

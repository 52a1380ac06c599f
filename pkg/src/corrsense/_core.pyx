# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched distortion kernel.

Same contract as corrsense._core_py.distortion_batch; the inner loop runs
without the GIL so worker threads scale.
"""

import numpy as np

cimport cython


def distortion_batch(
    double[:, ::1] g_re,
    double[:, ::1] g_im,
    double[:, ::1] num_mat,
    double[:, ::1] den_mat,
    double sigma_nu2,
    double[::1] out,
):
    """Normalized distortion for a batch of fading draws (see _core_py)."""
    cdef Py_ssize_t n_draws = g_re.shape[0]
    cdef Py_ssize_t n = g_re.shape[1]
    cdef Py_ssize_t t, i, j
    cdef double qn, qd, ri, ii, acc_n, acc_d, cn, cd
    with nogil:
        for t in range(n_draws):
            qn = 0.0
            qd = 0.0
            for i in range(n):
                ri = g_re[t, i]
                ii = g_im[t, i]
                acc_n = 0.0
                acc_d = 0.0
                for j in range(n):
                    cn = g_re[t, j] * ri + g_im[t, j] * ii
                    acc_n += num_mat[i, j] * cn
                    acc_d += den_mat[i, j] * cn
                qn += acc_n
                qd += acc_d
            out[t] = (qn + sigma_nu2) / (qd + sigma_nu2)
    return np.asarray(out)

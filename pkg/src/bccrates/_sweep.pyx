# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel for the binary-input frontier sweep.

Semantics mirror ``bccrates._sweep_py.sweep_binary`` exactly: same cell grid,
same binning, same tie handling (strictly-greater updates in lexicographic
cell order).
"""

from libc.math cimport ceil, log

import numpy as np

cdef Py_ssize_t MAX_OUT = 16
cdef double BIN_FUZZ = 1e-9  # in units of rd_step; matches _sweep_py.BIN_FUZZ


cdef inline Py_ssize_t _bin_index(double rd, double rd_step, Py_ssize_t n_rd) nogil:
    cdef double x = rd / rd_step - BIN_FUZZ
    cdef Py_ssize_t g = 0
    if x > 0.0:
        g = <Py_ssize_t> ceil(x)
    if g >= n_rd:
        return -1
    return g


def sweep_binary(tables, double[::1] a_grid, double[::1] b_grid,
                 double[::1] p_grid, double rd_step, Py_ssize_t n_rd):
    """Raw per-budget maxima of the secrecy rate for both randomness costs."""
    cdef double[:, ::1] row0_y = tables.row0_y
    cdef double[:, ::1] row1_y = tables.row1_y
    cdef double[:, ::1] row0_z = tables.row0_z
    cdef double[:, ::1] row1_z = tables.row1_z
    cdef double[::1] h0y = tables.h0y
    cdef double[::1] h1y = tables.h1y
    cdef double[::1] h0z = tables.h0z
    cdef double[::1] h1z = tables.h1z
    cdef double[::1] ha = tables.ha
    cdef double[::1] hb = tables.hb
    cdef double hz_row0 = tables.hz_row0
    cdef double hz_row1 = tables.hz_row1

    cdef Py_ssize_t my = row0_y.shape[1]
    cdef Py_ssize_t mz = row0_z.shape[1]
    if my > MAX_OUT or mz > MAX_OUT:
        raise ValueError("output alphabet too large for the compiled sweep")

    ds_arr = np.full(n_rd, -np.inf)
    sim_arr = np.full(n_rd, -np.inf)
    cdef double[::1] ds = ds_arr
    cdef double[::1] sim = sim_arr

    cdef Py_ssize_t n_p = p_grid.shape[0], n_a = a_grid.shape[0], n_b = b_grid.shape[0]
    cdef Py_ssize_t ip, ia, ib, j, g
    cdef double p, q, hy, hz, t, ivy, ivz, px0, rs, rd_val

    with nogil:
        for ip in range(n_p):
            p = p_grid[ip]
            q = 1.0 - p
            for ia in range(n_a):
                for ib in range(n_b):
                    hy = 0.0
                    for j in range(my):
                        t = p * row0_y[ia, j] + q * row1_y[ib, j]
                        if t > 0.0:
                            hy -= t * log(t)
                    hz = 0.0
                    for j in range(mz):
                        t = p * row0_z[ia, j] + q * row1_z[ib, j]
                        if t > 0.0:
                            hz -= t * log(t)
                    ivy = hy - (p * h0y[ia] + q * h1y[ib])
                    ivz = hz - (p * h0z[ia] + q * h1z[ib])
                    px0 = p * a_grid[ia] + q * (1.0 - b_grid[ib])
                    rs = ivy - ivz
                    rd_val = hz - (px0 * hz_row0 + (1.0 - px0) * hz_row1)
                    g = _bin_index(rd_val, rd_step, n_rd)
                    if g >= 0 and rs > ds[g]:
                        ds[g] = rs
                    rd_val = ivz + p * ha[ia] + q * hb[ib]
                    g = _bin_index(rd_val, rd_step, n_rd)
                    if g >= 0 and rs > sim[g]:
                        sim[g] = rs
    return ds_arr, sim_arr

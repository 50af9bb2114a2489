# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled backend for the sequential kernel loops.

Contract-identical to clozesum.kernels.reference; see that module for
shape documentation. Small matrix-vector products are hand loops: the
hidden sizes used here are tiny and call overhead would dominate BLAS.
"""

import numpy as np

from libc.math cimport exp, tanh

MODE_SAMPLE = 0
MODE_GREEDY = 1
MODE_FORCED = 2


cdef inline double _sig(double x) noexcept nogil:
    cdef double e
    if x >= 0.0:
        return 1.0 / (1.0 + exp(-x))
    e = exp(x)
    return e / (1.0 + e)


cdef inline void _matvec_acc(const double[:, ::1] a, const double* x,
                             double* out, Py_ssize_t rows, Py_ssize_t cols) noexcept nogil:
    # out += a @ x, a row-major (rows, cols)
    cdef Py_ssize_t r, c
    cdef double acc
    for r in range(rows):
        acc = 0.0
        for c in range(cols):
            acc += a[r, c] * x[c]
        out[r] += acc


cdef inline void _matvec_t(const double[:, ::1] a, const double* x,
                           double* out, Py_ssize_t rows, Py_ssize_t cols) noexcept nogil:
    # out = a.T @ x, a row-major (rows, cols), x (rows,), out (cols,)
    cdef Py_ssize_t r, c
    for c in range(cols):
        out[c] = 0.0
    for r in range(rows):
        for c in range(cols):
            out[c] += a[r, c] * x[r]


def lstm_loop_forward(double[:, ::1] xproj, double[:, ::1] w_rec,
                      double[::1] h0, double[::1] c0):
    cdef Py_ssize_t T = xproj.shape[0]
    cdef Py_ssize_t H = w_rec.shape[1]
    hs_arr = np.empty((T, H))
    cs_arr = np.empty((T, H))
    gates_arr = np.empty((T, 4 * H))
    z_arr = np.empty(4 * H)
    cdef double[:, ::1] hs = hs_arr
    cdef double[:, ::1] cs = cs_arr
    cdef double[:, ::1] gates = gates_arr
    cdef double[::1] z = z_arr
    cdef Py_ssize_t t, j
    cdef double i_g, f_g, g_g, o_g, c_new
    cdef const double* h_prev
    cdef const double* c_prev
    with nogil:
        for t in range(T):
            h_prev = &h0[0] if t == 0 else &hs[t - 1, 0]
            c_prev = &c0[0] if t == 0 else &cs[t - 1, 0]
            for j in range(4 * H):
                z[j] = xproj[t, j]
            _matvec_acc(w_rec, h_prev, &z[0], 4 * H, H)
            for j in range(H):
                i_g = _sig(z[j])
                f_g = _sig(z[H + j])
                g_g = tanh(z[2 * H + j])
                o_g = _sig(z[3 * H + j])
                c_new = f_g * c_prev[j] + i_g * g_g
                cs[t, j] = c_new
                hs[t, j] = o_g * tanh(c_new)
                gates[t, j] = i_g
                gates[t, H + j] = f_g
                gates[t, 2 * H + j] = g_g
                gates[t, 3 * H + j] = o_g
    return hs_arr, cs_arr, gates_arr


def lstm_loop_backward(double[:, ::1] dhs, double[:, ::1] cs,
                       double[:, ::1] gates, double[:, ::1] w_rec,
                       double[::1] c0):
    cdef Py_ssize_t T = dhs.shape[0]
    cdef Py_ssize_t H = dhs.shape[1]
    dzs_arr = np.empty((T, 4 * H))
    cdef double[:, ::1] dzs = dzs_arr
    dh_arr = np.zeros(H)
    dc_arr = np.zeros(H)
    cdef double[::1] dh = dh_arr
    cdef double[::1] dc = dc_arr
    cdef Py_ssize_t t, j
    cdef double i_g, f_g, g_g, o_g, tc, dh_total, dc_total, c_prev
    with nogil:
        for t in range(T - 1, -1, -1):
            for j in range(H):
                i_g = gates[t, j]
                f_g = gates[t, H + j]
                g_g = gates[t, 2 * H + j]
                o_g = gates[t, 3 * H + j]
                tc = tanh(cs[t, j])
                dh_total = dhs[t, j] + dh[j]
                dc_total = dc[j] + dh_total * o_g * (1.0 - tc * tc)
                c_prev = c0[j] if t == 0 else cs[t - 1, j]
                dzs[t, j] = dc_total * g_g * i_g * (1.0 - i_g)
                dzs[t, H + j] = dc_total * c_prev * f_g * (1.0 - f_g)
                dzs[t, 2 * H + j] = dc_total * i_g * (1.0 - g_g * g_g)
                dzs[t, 3 * H + j] = (dh_total * tc) * o_g * (1.0 - o_g)
                dc[j] = dc_total * f_g
            _matvec_t(w_rec, &dzs[t, 0], &dh[0], 4 * H, H)
    return dzs_arr


def select_loop_forward(double[::1] zh, double[:, ::1] base, double[:, ::1] ycol,
                        double[::1] sel_w_s, double[:, ::1] dec_w_rec,
                        double[::1] dec_b, int mode, double[::1] uniforms,
                        double[::1] forced):
    cdef Py_ssize_t T = zh.shape[0]
    cdef Py_ssize_t S = dec_w_rec.shape[1]
    probs_arr = np.empty(T)
    mask_arr = np.empty(T)
    s_arr = np.empty((T, S))
    c_arr = np.empty((T, S))
    gates_arr = np.empty((T, 4 * S))
    z_arr = np.empty(4 * S)
    zero_arr = np.zeros(S)
    cdef double[::1] probs = probs_arr
    cdef double[::1] mask = mask_arr
    cdef double[:, ::1] s_seq = s_arr
    cdef double[:, ::1] c_seq = c_arr
    cdef double[:, ::1] gates = gates_arr
    cdef double[::1] z = z_arr
    cdef double[::1] zero = zero_arr
    cdef Py_ssize_t t, j
    cdef double logit, p, y, i_g, f_g, g_g, o_g, c_new
    cdef const double* s_prev
    cdef const double* c_prev
    with nogil:
        for t in range(T):
            s_prev = &zero[0] if t == 0 else &s_seq[t - 1, 0]
            c_prev = &zero[0] if t == 0 else &c_seq[t - 1, 0]
            logit = zh[t]
            for j in range(S):
                logit += sel_w_s[j] * s_prev[j]
            p = _sig(logit)
            if mode == 0:
                y = 1.0 if uniforms[t] < p else 0.0
            elif mode == 1:
                y = 1.0 if p > 0.5 else 0.0
            else:
                y = forced[t]
            for j in range(4 * S):
                z[j] = base[t, j] + dec_b[j]
                if y == 1.0:
                    z[j] += ycol[t, j]
            _matvec_acc(dec_w_rec, s_prev, &z[0], 4 * S, S)
            for j in range(S):
                i_g = _sig(z[j])
                f_g = _sig(z[S + j])
                g_g = tanh(z[2 * S + j])
                o_g = _sig(z[3 * S + j])
                c_new = f_g * c_prev[j] + i_g * g_g
                c_seq[t, j] = c_new
                s_seq[t, j] = o_g * tanh(c_new)
                gates[t, j] = i_g
                gates[t, S + j] = f_g
                gates[t, 2 * S + j] = g_g
                gates[t, 3 * S + j] = o_g
            probs[t] = p
            mask[t] = y
    return probs_arr, mask_arr, s_arr, c_arr, gates_arr


def select_loop_backward(double[::1] dz_out, double[:, ::1] s_seq,
                         double[:, ::1] c_seq, double[:, ::1] gates,
                         double[::1] sel_w_s, double[:, ::1] dec_w_rec):
    cdef Py_ssize_t T = s_seq.shape[0]
    cdef Py_ssize_t S = s_seq.shape[1]
    dzs_arr = np.empty((T, 4 * S))
    ds_arr = np.zeros(S)
    dc_arr = np.zeros(S)
    cdef double[:, ::1] dzs = dzs_arr
    cdef double[::1] ds = ds_arr
    cdef double[::1] dc = dc_arr
    cdef Py_ssize_t t, j
    cdef double i_g, f_g, g_g, o_g, tc, dc_total, c_prev
    with nogil:
        for t in range(T - 1, -1, -1):
            for j in range(S):
                i_g = gates[t, j]
                f_g = gates[t, S + j]
                g_g = gates[t, 2 * S + j]
                o_g = gates[t, 3 * S + j]
                tc = tanh(c_seq[t, j])
                dc_total = dc[j] + ds[j] * o_g * (1.0 - tc * tc)
                c_prev = 0.0 if t == 0 else c_seq[t - 1, j]
                dzs[t, j] = dc_total * g_g * i_g * (1.0 - i_g)
                dzs[t, S + j] = dc_total * c_prev * f_g * (1.0 - f_g)
                dzs[t, 2 * S + j] = dc_total * i_g * (1.0 - g_g * g_g)
                dzs[t, 3 * S + j] = (ds[j] * tc) * o_g * (1.0 - o_g)
                dc[j] = dc_total * f_g
            _matvec_t(dec_w_rec, &dzs[t, 0], &ds[0], 4 * S, S)
            for j in range(S):
                ds[j] += dz_out[t] * sel_w_s[j]
    return dzs_arr

# Compiled stacked-LSTM kernels; contract documented in _lstm_py.
#
# The timestep loops run without the GIL over C-contiguous float64
# memoryviews. Reductions over the packed gate axis use four independent
# accumulator lanes (fixed summation order, so results stay deterministic)
# and read transposed weight copies for unit-stride access; the per-layer
# Python loop and the head projection are negligible and stay in Python.

import numpy as np

from libc.math cimport exp, tanh

NAME = "cython"


cdef inline double _sigmoid(double x) noexcept nogil:
    cdef double e
    if x >= 0.0:
        return 1.0 / (1.0 + exp(-x))
    e = exp(x)
    return e / (1.0 + e)


cdef void _layer_forward(const double[:, ::1] wx, const double[:, ::1] wh,
                         const double[::1] b, const double[:, :, ::1] x,
                         double[:, :, ::1] f, double[:, :, ::1] i_,
                         double[:, :, ::1] g, double[:, :, ::1] o,
                         double[:, :, ::1] c, double[:, :, ::1] tanh_c,
                         double[:, :, ::1] h,
                         bint sigmoid_candidate) noexcept nogil:
    cdef Py_ssize_t n_steps = x.shape[0]
    cdef Py_ssize_t n_batch = x.shape[1]
    cdef Py_ssize_t n_in = x.shape[2]
    cdef Py_ssize_t hidden = wh.shape[1]
    cdef Py_ssize_t t, bi, j, jj, k, gate, lim
    cdef double a0, a1, a2, a3, fv, iv, gv, ov, cv, c_prev

    lim = hidden - (hidden & 3)
    for t in range(n_steps):
        for bi in range(n_batch):
            for jj in range(4 * hidden):
                a0 = b[jj]
                a1 = 0.0
                a2 = 0.0
                a3 = 0.0
                for k in range(n_in):
                    a0 += wx[jj, k] * x[t, bi, k]
                if t > 0:
                    for k in range(0, lim, 4):
                        a0 += wh[jj, k] * h[t - 1, bi, k]
                        a1 += wh[jj, k + 1] * h[t - 1, bi, k + 1]
                        a2 += wh[jj, k + 2] * h[t - 1, bi, k + 2]
                        a3 += wh[jj, k + 3] * h[t - 1, bi, k + 3]
                    for k in range(lim, hidden):
                        a0 += wh[jj, k] * h[t - 1, bi, k]
                gate = jj // hidden
                j = jj - gate * hidden
                a0 = (a0 + a1) + (a2 + a3)
                if gate == 0:
                    f[t, bi, j] = a0
                elif gate == 1:
                    i_[t, bi, j] = a0
                elif gate == 2:
                    g[t, bi, j] = a0
                else:
                    o[t, bi, j] = a0
            for j in range(hidden):
                fv = _sigmoid(f[t, bi, j])
                iv = _sigmoid(i_[t, bi, j])
                if sigmoid_candidate:
                    gv = _sigmoid(g[t, bi, j])
                else:
                    gv = tanh(g[t, bi, j])
                ov = _sigmoid(o[t, bi, j])
                c_prev = c[t - 1, bi, j] if t > 0 else 0.0
                cv = fv * c_prev + iv * gv
                f[t, bi, j] = fv
                i_[t, bi, j] = iv
                g[t, bi, j] = gv
                o[t, bi, j] = ov
                c[t, bi, j] = cv
                tanh_c[t, bi, j] = tanh(cv)
                h[t, bi, j] = ov * tanh_c[t, bi, j]


cdef void _layer_backward(const double[:, ::1] wxT, const double[:, ::1] whT,
                          const double[:, :, ::1] x, const double[:, :, ::1] f,
                          const double[:, :, ::1] i_, const double[:, :, ::1] g,
                          const double[:, :, ::1] o, const double[:, :, ::1] c,
                          const double[:, :, ::1] tanh_c,
                          const double[:, :, ::1] h,
                          const double[:, :, ::1] dh_above,
                          double[:, ::1] dwx, double[:, ::1] dwh,
                          double[::1] db, double[:, :, ::1] dx,
                          double[:, ::1] dh_carry, double[:, ::1] dc_carry,
                          double[:, ::1] da,
                          bint sigmoid_candidate, bint want_dx) noexcept nogil:
    cdef Py_ssize_t n_steps = x.shape[0]
    cdef Py_ssize_t n_batch = x.shape[1]
    cdef Py_ssize_t n_in = x.shape[2]
    cdef Py_ssize_t hidden = whT.shape[0]
    cdef Py_ssize_t rows = 4 * hidden
    cdef Py_ssize_t t, bi, j, jj, k, lim
    cdef double dh, dc, do_, df, di, dg, fv, iv, gv, ov, tcv, c_prev
    cdef double a0, a1, a2, a3, v

    lim = rows - (rows & 3)
    for t in range(n_steps - 1, -1, -1):
        for bi in range(n_batch):
            for j in range(hidden):
                dh = dh_above[t, bi, j] + dh_carry[bi, j]
                fv = f[t, bi, j]
                iv = i_[t, bi, j]
                gv = g[t, bi, j]
                ov = o[t, bi, j]
                tcv = tanh_c[t, bi, j]
                do_ = dh * tcv
                dc = dh * ov * (1.0 - tcv * tcv) + dc_carry[bi, j]
                c_prev = c[t - 1, bi, j] if t > 0 else 0.0
                df = dc * c_prev
                di = dc * gv
                dg = dc * iv
                dc_carry[bi, j] = dc * fv
                da[bi, j] = df * fv * (1.0 - fv)
                da[bi, hidden + j] = di * iv * (1.0 - iv)
                if sigmoid_candidate:
                    da[bi, 2 * hidden + j] = dg * gv * (1.0 - gv)
                else:
                    da[bi, 2 * hidden + j] = dg * (1.0 - gv * gv)
                da[bi, 3 * hidden + j] = do_ * ov * (1.0 - ov)
            for k in range(hidden):
                a0 = 0.0
                a1 = 0.0
                a2 = 0.0
                a3 = 0.0
                for jj in range(0, lim, 4):
                    a0 += da[bi, jj] * whT[k, jj]
                    a1 += da[bi, jj + 1] * whT[k, jj + 1]
                    a2 += da[bi, jj + 2] * whT[k, jj + 2]
                    a3 += da[bi, jj + 3] * whT[k, jj + 3]
                for jj in range(lim, rows):
                    a0 += da[bi, jj] * whT[k, jj]
                dh_carry[bi, k] = (a0 + a1) + (a2 + a3)
            if want_dx:
                for k in range(n_in):
                    a0 = 0.0
                    a1 = 0.0
                    a2 = 0.0
                    a3 = 0.0
                    for jj in range(0, lim, 4):
                        a0 += da[bi, jj] * wxT[k, jj]
                        a1 += da[bi, jj + 1] * wxT[k, jj + 1]
                        a2 += da[bi, jj + 2] * wxT[k, jj + 2]
                        a3 += da[bi, jj + 3] * wxT[k, jj + 3]
                    for jj in range(lim, rows):
                        a0 += da[bi, jj] * wxT[k, jj]
                    dx[t, bi, k] = (a0 + a1) + (a2 + a3)
            for jj in range(rows):
                v = da[bi, jj]
                db[jj] += v
                for k in range(n_in):
                    dwx[jj, k] += v * x[t, bi, k]
                if t > 0:
                    for k in range(hidden):
                        dwh[jj, k] += v * h[t - 1, bi, k]


def sequence_forward_batch(wx, wh, b, head_w, head_b, windows, sigmoid_candidate):
    windows = np.ascontiguousarray(windows, dtype=np.float64)
    n_batch, n_steps = windows.shape
    x = np.ascontiguousarray(windows.T).reshape(n_steps, n_batch, 1)

    caches = []
    for l in range(len(wx)):
        hidden = wh[l].shape[1]
        f = np.empty((n_steps, n_batch, hidden))
        i = np.empty_like(f)
        g = np.empty_like(f)
        o = np.empty_like(f)
        c = np.empty_like(f)
        tanh_c = np.empty_like(f)
        h = np.empty_like(f)
        _layer_forward(
            np.ascontiguousarray(wx[l]), np.ascontiguousarray(wh[l]),
            np.ascontiguousarray(b[l]), x, f, i, g, o, c, tanh_c, h,
            sigmoid_candidate,
        )
        caches.append((x, f, i, g, o, c, tanh_c, h))
        x = h

    h_last = caches[len(caches) - 1][7]
    preds = h_last[n_steps - 1] @ np.asarray(head_w, dtype=np.float64) + head_b
    return preds, caches


def sequence_backward_batch(wx, wh, head_w, caches, dpreds, sigmoid_candidate):
    dpreds = np.asarray(dpreds, dtype=np.float64)
    n_steps = caches[0][0].shape[0]
    n_batch = dpreds.shape[0]
    head_w = np.asarray(head_w, dtype=np.float64)

    dhead_b = float(dpreds.sum())
    h_top = caches[len(caches) - 1][7]
    dhead_w = dpreds @ h_top[n_steps - 1]

    dh_above = np.zeros_like(h_top)
    dh_above[n_steps - 1] = dpreds[:, None] * head_w[None, :]

    dwx_out, dwh_out, db_out = [], [], []
    for l in range(len(wx) - 1, -1, -1):
        x, f, i, g, o, c, tanh_c, h = caches[l]
        hidden = h.shape[2]
        wx_l = np.ascontiguousarray(wx[l])
        wh_l = np.ascontiguousarray(wh[l])
        dwx = np.zeros_like(wx_l)
        dwh = np.zeros_like(wh_l)
        db = np.zeros(4 * hidden)
        dx = np.zeros_like(x)
        dh_carry = np.zeros((n_batch, hidden))
        dc_carry = np.zeros((n_batch, hidden))
        da = np.empty((n_batch, 4 * hidden))
        _layer_backward(
            np.ascontiguousarray(wx_l.T), np.ascontiguousarray(wh_l.T),
            x, f, i, g, o, c, tanh_c, h,
            dh_above, dwx, dwh, db, dx, dh_carry, dc_carry, da,
            sigmoid_candidate, l > 0,
        )
        dwx_out.append(dwx)
        dwh_out.append(dwh)
        db_out.append(db)
        dh_above = dx

    dwx_out.reverse()
    dwh_out.reverse()
    db_out.reverse()
    return dwx_out, dwh_out, db_out, dhead_w, dhead_b

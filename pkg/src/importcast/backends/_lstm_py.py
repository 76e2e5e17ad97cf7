"""NumPy implementation of the stacked-LSTM forward/backward kernels.

Both backends share one contract. Per layer, the four gates are packed
row-wise into single matrices in the order forget, input, candidate,
output:

    wx[l] : (4H, D)  input-to-gate weights (D = 1 for layer 0)
    wh[l] : (4H, H)  recurrent weights
    b[l]  : (4H,)    biases

``sequence_forward_batch`` consumes a batch of windows shaped (B, T) and
returns per-window scalar predictions plus a cache: one tuple per layer
``(x, f, i, g, o, c, tanh_c, h)`` of arrays shaped (T, B, dim), where x is
the layer's input sequence and g the candidate activation.
``sequence_backward_batch`` consumes that cache and the loss gradient with
respect to the predictions, and returns gradients for every weight block.
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def sigmoid(x):
    """Numerically stable logistic function."""
    x = np.asarray(x, dtype=float)
    e = np.exp(-np.abs(x))  # in (0, 1], never overflows
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def sequence_forward_batch(wx, wh, b, head_w, head_b, windows, sigmoid_candidate):
    windows = np.ascontiguousarray(windows, dtype=float)
    n_batch, n_steps = windows.shape
    x = np.ascontiguousarray(windows.T)[:, :, None]  # (T, B, 1)

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

        h_prev = np.zeros((n_batch, hidden))
        c_prev = np.zeros((n_batch, hidden))
        for t in range(n_steps):
            pre = x[t] @ wx[l].T + h_prev @ wh[l].T + b[l]
            f[t] = sigmoid(pre[:, :hidden])
            i[t] = sigmoid(pre[:, hidden : 2 * hidden])
            raw_g = pre[:, 2 * hidden : 3 * hidden]
            g[t] = sigmoid(raw_g) if sigmoid_candidate else np.tanh(raw_g)
            o[t] = sigmoid(pre[:, 3 * hidden :])
            c[t] = f[t] * c_prev + i[t] * g[t]
            tanh_c[t] = np.tanh(c[t])
            h[t] = o[t] * tanh_c[t]
            h_prev, c_prev = h[t], c[t]

        caches.append((x, f, i, g, o, c, tanh_c, h))
        x = h  # next layer consumes this layer's hidden sequence

    preds = caches[-1][7][-1] @ head_w + head_b
    return preds, caches


def sequence_backward_batch(wx, wh, head_w, caches, dpreds, sigmoid_candidate):
    dpreds = np.asarray(dpreds, dtype=float)
    n_steps = caches[0][0].shape[0]
    n_batch = dpreds.shape[0]

    dhead_b = float(dpreds.sum())
    h_last = caches[-1][7][-1]
    dhead_w = dpreds @ h_last

    # Gradient flowing into each layer's hidden sequence from above.
    dh_above = np.zeros_like(caches[-1][7])
    dh_above[-1] = dpreds[:, None] * head_w[None, :]

    dwx, dwh, db = [], [], []
    for l in range(len(wx) - 1, -1, -1):
        x, f, i, g, o, c, tanh_c, h = caches[l]
        hidden = h.shape[2]
        dwx_l = np.zeros_like(wx[l])
        dwh_l = np.zeros_like(wh[l])
        db_l = np.zeros(4 * hidden)
        dx = np.zeros_like(x)

        dh_carry = np.zeros((n_batch, hidden))
        dc_carry = np.zeros((n_batch, hidden))
        da = np.empty((n_batch, 4 * hidden))
        for t in range(n_steps - 1, -1, -1):
            dh = dh_above[t] + dh_carry
            do = dh * tanh_c[t]
            dc = dh * o[t] * (1.0 - tanh_c[t] ** 2) + dc_carry
            c_prev = c[t - 1] if t > 0 else np.zeros((n_batch, hidden))
            h_prev = h[t - 1] if t > 0 else np.zeros((n_batch, hidden))
            df = dc * c_prev
            di = dc * g[t]
            dg = dc * i[t]
            dc_carry = dc * f[t]

            da[:, :hidden] = df * f[t] * (1.0 - f[t])
            da[:, hidden : 2 * hidden] = di * i[t] * (1.0 - i[t])
            if sigmoid_candidate:
                da[:, 2 * hidden : 3 * hidden] = dg * g[t] * (1.0 - g[t])
            else:
                da[:, 2 * hidden : 3 * hidden] = dg * (1.0 - g[t] ** 2)
            da[:, 3 * hidden :] = do * o[t] * (1.0 - o[t])

            dwx_l += da.T @ x[t]
            dwh_l += da.T @ h_prev
            db_l += da.sum(axis=0)
            dx[t] = da @ wx[l]
            dh_carry = da @ wh[l]

        dwx.append(dwx_l)
        dwh.append(dwh_l)
        db.append(db_l)
        dh_above = dx  # (T, B, H_{l-1}) once below layer 0 it is unused

    dwx.reverse()
    dwh.reverse()
    db.reverse()
    return dwx, dwh, db, dhead_w, dhead_b

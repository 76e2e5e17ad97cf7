"""Full-batch Adam training with exact BPTT gradients.

Gradients come from reverse accumulation through the gate equations (see
importcast.lstm) and are verified against central finite differences by
``finite_diff_check``, which doubles as the ``importcast gradcheck``
oracle. Training is fully deterministic given (seed, config, data): one
full-batch update per epoch, global gradient-norm clipping, and snapshot
selection by lexicographic (train MSE, train MAE, earliest epoch).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from importcast import backends
from importcast.errors import NumericError, TrainingDivergedError, ValidationError
from importcast.lstm import (
    CANDIDATE_MODES,
    LstmParams,
    _check_mode,
    init_params,
    predict_batch,
    zeros_like_params,
)
from importcast.windowing import WindowedDataset

DIVERGENCE_MSE = 1e6

DEFAULT_HIDDEN_SIZES = (16, 16, 16)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    learning_rate: float = 1e-2
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    grad_clip_norm: float = 5.0
    candidate_mode: str = "sigmoid"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValidationError(f"epochs must be >= 1, got {self.epochs}")
        if not self.learning_rate > 0:
            raise ValidationError(
                f"learning_rate must be > 0, got {self.learning_rate}"
            )
        for name in ("adam_beta1", "adam_beta2"):
            beta = getattr(self, name)
            if not 0.0 < beta < 1.0:
                raise ValidationError(f"{name} must be in (0, 1), got {beta}")
        if not self.grad_clip_norm > 0:
            raise ValidationError(
                f"grad_clip_norm must be > 0, got {self.grad_clip_norm}"
            )
        if self.candidate_mode not in CANDIDATE_MODES:
            raise ValidationError(
                f"unknown candidate mode {self.candidate_mode!r}, "
                f"expected one of {CANDIDATE_MODES}"
            )


@dataclass
class TrainTrace:
    """Per-epoch error curves plus the selected snapshot."""

    train_mse: list[float] = field(default_factory=list)
    train_mae: list[float] = field(default_factory=list)
    test_mse: list[float] = field(default_factory=list)
    test_mae: list[float] = field(default_factory=list)
    best_epoch: int = -1
    best_params: LstmParams | None = None


def mse(preds, targets) -> float:
    preds = np.asarray(preds, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if preds.shape != targets.shape or preds.size == 0:
        raise ValidationError(
            f"mse needs equal non-empty shapes, got {preds.shape} vs {targets.shape}"
        )
    return float(np.mean((preds - targets) ** 2))


def mae(preds, targets) -> float:
    preds = np.asarray(preds, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if preds.shape != targets.shape or preds.size == 0:
        raise ValidationError(
            f"mae needs equal non-empty shapes, got {preds.shape} vs {targets.shape}"
        )
    return float(np.mean(np.abs(preds - targets)))


def bptt_gradients(
    params: LstmParams,
    inputs: np.ndarray,
    targets: np.ndarray,
    candidate_mode: str = "sigmoid",
    backend=None,
) -> LstmParams:
    """Exact gradients of batch MSE w.r.t. every weight and bias.

    Returns a parameter-shaped container: grads.layers[k].W_f is the
    gradient for params.layers[k].W_f, and so on.
    """
    sigmoid_candidate = _check_mode(candidate_mode)
    kernel = backend if backend is not None else backends.get_active()
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.asarray(targets, dtype=float)
    n = len(targets)
    if inputs.shape[0] != n or n == 0:
        raise ValidationError(
            f"batch mismatch: {inputs.shape[0]} windows vs {n} targets"
        )

    wx, wh, b = params._packed()
    preds, caches = kernel.sequence_forward_batch(
        wx, wh, b, params.head_w, float(params.head_b[0]), inputs, sigmoid_candidate
    )
    dpreds = (2.0 / n) * (preds - targets)
    dwx, dwh, db, dhead_w, dhead_b = kernel.sequence_backward_batch(
        wx, wh, params.head_w, caches, dpreds, sigmoid_candidate
    )

    grads = zeros_like_params(params)
    for k, layer in enumerate(grads.layers):
        layer.wx[...] = dwx[k]
        layer.wh[...] = dwh[k]
        layer.b[...] = db[k]
    grads.head_w[...] = dhead_w
    grads.head_b[0] = dhead_b

    for name, arr in grads.blocks():
        if np.isnan(arr).any():
            raise NumericError(f"NaN gradient in block {name}")
    return grads


def finite_diff_check(
    params: LstmParams,
    inputs: np.ndarray,
    targets: np.ndarray,
    candidate_mode: str = "sigmoid",
    epsilon: float = 1e-5,
    backend=None,
) -> float:
    """Max relative discrepancy between BPTT and central differences.

    For every parameter compares the analytic gradient against
    (L(p+eps) - L(p-eps)) / 2 eps with L the batch MSE; the discrepancy is
    |analytic - numeric| / max(1e-8, |analytic| + |numeric|). Meant for
    small nets (hundreds of parameters): cost is two forward passes per
    parameter.
    """
    inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
    targets = np.asarray(targets, dtype=float)
    analytic = bptt_gradients(params, inputs, targets, candidate_mode, backend)

    def loss() -> float:
        preds = predict_batch(params, inputs, candidate_mode, backend=backend)
        return mse(preds, targets)

    worst = 0.0
    grad_blocks = dict(analytic.blocks())
    for name, arr in params.blocks():
        grad = grad_blocks[name]
        flat = arr.ravel()
        for idx in range(flat.size):
            saved = flat[idx]
            flat[idx] = saved + epsilon
            up = loss()
            flat[idx] = saved - epsilon
            down = loss()
            flat[idx] = saved
            numeric = (up - down) / (2.0 * epsilon)
            a = grad.ravel()[idx]
            rel = abs(a - numeric) / max(1e-8, abs(a) + abs(numeric))
            worst = max(worst, rel)
    return worst


@dataclass
class AdamState:
    m: LstmParams
    v: LstmParams
    t: int = 0


def init_adam(params: LstmParams) -> AdamState:
    return AdamState(m=zeros_like_params(params), v=zeros_like_params(params))


def clip_gradients(grads: LstmParams, max_norm: float) -> float:
    """Scale all blocks so the global L2 norm is at most max_norm."""
    total = 0.0
    for _, arr in grads.blocks():
        total += float(np.sum(arr * arr))
    norm = float(np.sqrt(total))
    if norm > max_norm:
        scale = max_norm / norm
        for _, arr in grads.blocks():
            arr *= scale
    return norm


def adam_step(
    params: LstmParams, grads: LstmParams, state: AdamState, config: TrainConfig
) -> None:
    """One bias-corrected Adam update, in place. Clip before calling."""
    state.t += 1
    b1, b2 = config.adam_beta1, config.adam_beta2
    correction1 = 1.0 - b1**state.t
    correction2 = 1.0 - b2**state.t
    grad_blocks = dict(grads.blocks())
    m_blocks = dict(state.m.blocks())
    v_blocks = dict(state.v.blocks())
    for name, arr in params.blocks():
        g = grad_blocks[name]
        m = m_blocks[name]
        v = v_blocks[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        arr -= config.learning_rate * m_hat / (np.sqrt(v_hat) + config.adam_eps)


def train(
    dataset: WindowedDataset,
    config: TrainConfig,
    hidden_sizes=DEFAULT_HIDDEN_SIZES,
    backend=None,
) -> TrainTrace:
    """Run full-batch training and return the per-epoch trace.

    After each epoch's update the model is evaluated on both splits; the
    returned best_params is the snapshot minimizing train MSE, ties broken
    by train MAE, then by earliest epoch.
    """
    if dataset.n_train < 8:
        raise ValidationError(
            f"need at least 8 training samples, got {dataset.n_train}"
        )
    kernel = backend if backend is not None else backends.get_active()

    params = init_params(hidden_sizes, config.seed)
    state = init_adam(params)
    trace = TrainTrace()
    best_key = (np.inf, np.inf)

    for epoch in range(config.epochs):
        grads = bptt_gradients(
            params,
            dataset.train_inputs,
            dataset.train_targets,
            config.candidate_mode,
            backend=kernel,
        )
        clip_gradients(grads, config.grad_clip_norm)
        adam_step(params, grads, state, config)

        preds = predict_batch(
            params, dataset.inputs, config.candidate_mode, backend=kernel
        )
        split = dataset.split_index
        epoch_train_mse = mse(preds[:split], dataset.train_targets)
        epoch_train_mae = mae(preds[:split], dataset.train_targets)
        epoch_test_mse = mse(preds[split:], dataset.test_targets)
        epoch_test_mae = mae(preds[split:], dataset.test_targets)

        trace.train_mse.append(epoch_train_mse)
        trace.train_mae.append(epoch_train_mae)
        trace.test_mse.append(epoch_test_mse)
        trace.test_mae.append(epoch_test_mae)

        if not np.isfinite(epoch_train_mse) or epoch_train_mse > DIVERGENCE_MSE:
            raise TrainingDivergedError(
                f"train MSE {epoch_train_mse} at epoch {epoch}", epoch=epoch
            )

        key = (epoch_train_mse, epoch_train_mae)
        if key < best_key:
            best_key = key
            trace.best_epoch = epoch
            trace.best_params = params.copy()

    return trace

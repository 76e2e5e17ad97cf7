"""Stacked LSTM with a linear output head.

Gate equations per timestep (x input, h/c previous hidden and cell state,
all products elementwise except the matrix-vector terms):

    f = sigmoid(W_f x + U_f h + b_f)          forget gate
    i = sigmoid(W_i x + U_i h + b_i)          input gate
    g = act(W_c x + U_c h + b_c)              candidate cell state
    c' = f * c + i * g
    o = sigmoid(W_o x + U_o h + b_o)          output gate
    h' = o * tanh(c')

The candidate activation ``act`` is selectable: ``sigmoid`` (the default)
or the conventional ``tanh``. Layer k consumes layer k-1's hidden
sequence; the head maps the last layer's final hidden state to one scalar.

Storage is packed: each layer holds one (4H, D) input matrix, one (4H, H)
recurrent matrix and one (4H,) bias with gate rows stacked in the order
f, i, c, o. The per-gate names (W_f, U_f, b_f, ...) are zero-copy views.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from importcast import backends
from importcast.backends._lstm_py import sigmoid
from importcast.errors import NumericError, ValidationError
from importcast.rng import Xoshiro256StarStar

CANDIDATE_MODES = ("sigmoid", "tanh")

GATES = ("f", "i", "c", "o")

CHECKPOINT_MAGIC = "importcast-lstm-params"
CHECKPOINT_VERSION = 1


def _check_mode(candidate_mode: str) -> bool:
    """Returns True when the candidate activation is the sigmoid."""
    if candidate_mode not in CANDIDATE_MODES:
        raise ValidationError(
            f"unknown candidate mode {candidate_mode!r}, "
            f"expected one of {CANDIDATE_MODES}"
        )
    return candidate_mode == "sigmoid"


@dataclass
class LstmLayerParams:
    """One layer's weights, packed; per-gate accessors are views."""

    wx: np.ndarray  # (4H, D)
    wh: np.ndarray  # (4H, H)
    b: np.ndarray  # (4H,)

    def __post_init__(self):
        hidden = self.wh.shape[1]
        if self.wx.shape[0] != 4 * hidden or self.wh.shape[0] != 4 * hidden:
            raise ValidationError(
                f"packed gate matrices must have 4*hidden rows, got "
                f"wx {self.wx.shape}, wh {self.wh.shape}"
            )
        if self.b.shape != (4 * hidden,):
            raise ValidationError(f"bias must have shape (4*hidden,), got {self.b.shape}")
        for name, arr in (("wx", self.wx), ("wh", self.wh), ("b", self.b)):
            if not np.isfinite(arr).all():
                raise ValidationError(f"non-finite entries in {name}")

    @property
    def input_size(self) -> int:
        return self.wx.shape[1]

    @property
    def hidden_size(self) -> int:
        return self.wh.shape[1]

    def _gate(self, arr: np.ndarray, gate: str) -> np.ndarray:
        k = GATES.index(gate)
        h = self.hidden_size
        return arr[k * h : (k + 1) * h]

    # Per-gate views: W_* (hidden x input), U_* (hidden x hidden), b_* (hidden,)
    @property
    def W_f(self):
        return self._gate(self.wx, "f")

    @property
    def W_i(self):
        return self._gate(self.wx, "i")

    @property
    def W_c(self):
        return self._gate(self.wx, "c")

    @property
    def W_o(self):
        return self._gate(self.wx, "o")

    @property
    def U_f(self):
        return self._gate(self.wh, "f")

    @property
    def U_i(self):
        return self._gate(self.wh, "i")

    @property
    def U_c(self):
        return self._gate(self.wh, "c")

    @property
    def U_o(self):
        return self._gate(self.wh, "o")

    @property
    def b_f(self):
        return self._gate(self.b, "f")

    @property
    def b_i(self):
        return self._gate(self.b, "i")

    @property
    def b_c(self):
        return self._gate(self.b, "c")

    @property
    def b_o(self):
        return self._gate(self.b, "o")

    def copy(self) -> "LstmLayerParams":
        return LstmLayerParams(self.wx.copy(), self.wh.copy(), self.b.copy())


@dataclass
class LstmParams:
    """Full parameter set: layer stack plus linear head.

    head_b is stored as a length-1 array so optimizer updates can mutate
    it in place like every other block.
    """

    layers: list[LstmLayerParams]
    head_w: np.ndarray  # (hidden of last layer,)
    head_b: np.ndarray  # (1,)

    def __post_init__(self):
        if not self.layers:
            raise ValidationError("at least one LSTM layer required")
        if self.layers[0].input_size != 1:
            raise ValidationError(
                f"layer 0 must take univariate input, got input size "
                f"{self.layers[0].input_size}"
            )
        for k in range(1, len(self.layers)):
            need = self.layers[k - 1].hidden_size
            got = self.layers[k].input_size
            if got != need:
                raise ValidationError(
                    f"layer {k} input size {got} != layer {k - 1} hidden size {need}"
                )
        if self.head_w.shape != (self.layers[-1].hidden_size,):
            raise ValidationError(
                f"head_w shape {self.head_w.shape} does not match last "
                f"hidden size {self.layers[-1].hidden_size}"
            )

    @property
    def hidden_sizes(self) -> tuple[int, ...]:
        return tuple(layer.hidden_size for layer in self.layers)

    @property
    def n_params(self) -> int:
        return sum(arr.size for _, arr in self.blocks())

    def blocks(self):
        """(name, array) pairs over every parameter block, fixed order."""
        for k, layer in enumerate(self.layers):
            yield f"layer{k}.wx", layer.wx
            yield f"layer{k}.wh", layer.wh
            yield f"layer{k}.b", layer.b
        yield "head.w", self.head_w
        yield "head.b", self.head_b

    def named_arrays(self):
        """Per-gate (name, array) pairs, the checkpoint's granularity."""
        for k, layer in enumerate(self.layers):
            for gate in GATES:
                yield f"layer{k}.W_{gate}", layer._gate(layer.wx, gate)
            for gate in GATES:
                yield f"layer{k}.U_{gate}", layer._gate(layer.wh, gate)
            for gate in GATES:
                yield f"layer{k}.b_{gate}", layer._gate(layer.b, gate)
        yield "head.w", self.head_w
        yield "head.b", self.head_b

    def copy(self) -> "LstmParams":
        return LstmParams(
            [layer.copy() for layer in self.layers],
            self.head_w.copy(),
            self.head_b.copy(),
        )

    def _packed(self):
        wx = [layer.wx for layer in self.layers]
        wh = [layer.wh for layer in self.layers]
        b = [layer.b for layer in self.layers]
        return wx, wh, b


def zeros_like_params(params: LstmParams) -> LstmParams:
    """Same shapes, all zero; used as the gradient / moment container."""
    layers = [
        LstmLayerParams(
            np.zeros_like(layer.wx), np.zeros_like(layer.wh), np.zeros_like(layer.b)
        )
        for layer in params.layers
    ]
    return LstmParams(layers, np.zeros_like(params.head_w), np.zeros_like(params.head_b))


def init_params(layer_sizes: Sequence[int], seed: int) -> LstmParams:
    """Seeded initialization: identical seed, identical parameter bytes.

    Weights are uniform on [-1/sqrt(fanin), +1/sqrt(fanin)] where fanin is
    each matrix's input dimension, drawn row-major from a xoshiro256**
    stream in a fixed order (per layer: wx then wh; then head). Forget-gate
    biases start at 1.0, every other bias at 0.
    """
    if not layer_sizes or any(h <= 0 for h in layer_sizes):
        raise ValidationError(
            f"layer sizes must be positive integers, got {list(layer_sizes)}"
        )
    rng = Xoshiro256StarStar(seed)

    def draw(shape, fanin):
        bound = 1.0 / np.sqrt(fanin)
        flat = [rng.uniform(-bound, bound) for _ in range(int(np.prod(shape)))]
        return np.asarray(flat, dtype=float).reshape(shape)

    layers = []
    input_size = 1
    for hidden in layer_sizes:
        wx = draw((4 * hidden, input_size), input_size)
        wh = draw((4 * hidden, hidden), hidden)
        b = np.zeros(4 * hidden)
        b[:hidden] = 1.0  # forget-gate rows
        layers.append(LstmLayerParams(wx, wh, b))
        input_size = hidden
    head_w = draw((layer_sizes[-1],), layer_sizes[-1])
    return LstmParams(layers, head_w, np.zeros(1))


@dataclass(frozen=True)
class GateActivations:
    """One timestep's gate values; f/i/o in (0,1), candidate per mode."""

    f: np.ndarray
    i: np.ndarray
    candidate: np.ndarray
    o: np.ndarray


class ForwardCache:
    """Everything the backward pass needs, for every layer and timestep."""

    def __init__(self, raw_caches):
        self._raw = raw_caches

    @property
    def raw(self):
        return self._raw

    @property
    def n_steps(self) -> int:
        return self._raw[0][0].shape[0]

    @property
    def n_layers(self) -> int:
        return len(self._raw)

    def gates(self, layer: int, t: int, sample: int = 0) -> GateActivations:
        _, f, i, g, o, _, _, _ = self._raw[layer]
        return GateActivations(
            f=f[t, sample].copy(),
            i=i[t, sample].copy(),
            candidate=g[t, sample].copy(),
            o=o[t, sample].copy(),
        )

    def state(self, layer: int, t: int, sample: int = 0):
        """(h, c) of a layer after timestep t."""
        raw = self._raw[layer]
        return raw[7][t, sample].copy(), raw[5][t, sample].copy()


def cell_forward(
    layer: LstmLayerParams,
    x_t: np.ndarray,
    h_prev: np.ndarray,
    c_prev: np.ndarray,
    candidate_mode: str = "sigmoid",
):
    """One LSTM cell step; returns (h_t, c_t, GateActivations)."""
    sigmoid_candidate = _check_mode(candidate_mode)
    x_t = np.asarray(x_t, dtype=float)
    h_prev = np.asarray(h_prev, dtype=float)
    c_prev = np.asarray(c_prev, dtype=float)
    hidden = layer.hidden_size
    if x_t.shape != (layer.input_size,):
        raise ValidationError(
            f"x_t shape {x_t.shape} does not match input size {layer.input_size}"
        )
    if h_prev.shape != (hidden,) or c_prev.shape != (hidden,):
        raise ValidationError(
            f"state shapes {h_prev.shape}/{c_prev.shape} do not match hidden "
            f"size {hidden}"
        )

    pre = layer.wx @ x_t + layer.wh @ h_prev + layer.b
    f = sigmoid(pre[:hidden])
    i = sigmoid(pre[hidden : 2 * hidden])
    raw_g = pre[2 * hidden : 3 * hidden]
    g = sigmoid(raw_g) if sigmoid_candidate else np.tanh(raw_g)
    c = f * c_prev + i * g
    o = sigmoid(pre[3 * hidden :])
    h = o * np.tanh(c)

    for name, arr in (
        ("forget gate", f),
        ("input gate", i),
        ("candidate state", g),
        ("output gate", o),
        ("cell state", c),
        ("hidden output", h),
    ):
        if np.isnan(arr).any():
            raise NumericError(f"NaN in {name}")
    return h, c, GateActivations(f=f, i=i, candidate=g, o=o)


def predict_batch(
    params: LstmParams,
    windows: np.ndarray,
    candidate_mode: str = "sigmoid",
    backend=None,
    return_cache: bool = False,
):
    """Predictions for a (B, L) batch of windows, zero initial state."""
    sigmoid_candidate = _check_mode(candidate_mode)
    kernel = backend if backend is not None else backends.get_active()
    windows = np.atleast_2d(np.asarray(windows, dtype=float))
    wx, wh, b = params._packed()
    preds, raw_caches = kernel.sequence_forward_batch(
        wx, wh, b, params.head_w, float(params.head_b[0]), windows, sigmoid_candidate
    )
    if np.isnan(preds).any():
        raise NumericError(
            f"NaN prediction for window index {int(np.argmax(np.isnan(preds)))}"
        )
    if return_cache:
        return preds, ForwardCache(raw_caches)
    return preds


def sequence_forward(
    params: LstmParams,
    window: np.ndarray,
    candidate_mode: str = "sigmoid",
    backend=None,
):
    """One window through the stack; returns (prediction, ForwardCache)."""
    window = np.asarray(window, dtype=float)
    if window.ndim != 1:
        raise ValidationError(f"window must be 1-D, got shape {window.shape}")
    preds, cache = predict_batch(
        params, window[None, :], candidate_mode, backend=backend, return_cache=True
    )
    return float(preds[0]), cache


def save_params(params: LstmParams, path) -> None:
    """Write a version-1 checkpoint.

    Text format, byte-stable: a header line
    ``importcast-lstm-params v1 <n_arrays>``, then per named array one
    metadata line ``<name> <dim0> [dim1]`` followed by one line of
    space-separated C99 hex floats (exact round-trip).
    """
    named = list(params.named_arrays())
    lines = [f"{CHECKPOINT_MAGIC} v{CHECKPOINT_VERSION} {len(named)}"]
    for name, arr in named:
        dims = " ".join(str(d) for d in arr.shape)
        lines.append(f"{name} {dims}")
        lines.append(" ".join(float(v).hex() for v in arr.ravel()))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_params(path) -> LstmParams:
    """Read a checkpoint written by save_params."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValidationError(f"{path}: empty checkpoint")
    header = lines[0].split()
    if (
        len(header) != 3
        or header[0] != CHECKPOINT_MAGIC
        or header[1] != f"v{CHECKPOINT_VERSION}"
    ):
        raise ValidationError(f"{path}: unrecognized checkpoint header {lines[0]!r}")
    n_arrays = int(header[2])

    arrays: dict[str, np.ndarray] = {}
    pos = 1
    for _ in range(n_arrays):
        meta = lines[pos].split()
        name, shape = meta[0], tuple(int(d) for d in meta[1:])
        values = np.asarray(
            [float.fromhex(tok) for tok in lines[pos + 1].split()], dtype=float
        )
        arrays[name] = values.reshape(shape)
        pos += 2

    layers = []
    k = 0
    while f"layer{k}.W_f" in arrays:
        wx = np.concatenate([arrays[f"layer{k}.W_{gate}"] for gate in GATES])
        wh = np.concatenate([arrays[f"layer{k}.U_{gate}"] for gate in GATES])
        b = np.concatenate([arrays[f"layer{k}.b_{gate}"] for gate in GATES])
        layers.append(LstmLayerParams(np.ascontiguousarray(wx), np.ascontiguousarray(wh), b))
        k += 1
    if not layers or "head.w" not in arrays or "head.b" not in arrays:
        raise ValidationError(f"{path}: checkpoint is missing required arrays")
    return LstmParams(layers, arrays["head.w"], arrays["head.b"])

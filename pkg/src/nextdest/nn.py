"""From-scratch differentiable primitives: embeddings, LSTM, softmax head, Adam.

Everything is float64 and pure numpy. Each backward routine computes exact
gradients of its forward (no truncation through time) and is verified against
central finite differences by :func:`grad_check`.

LSTM gate blocks are laid out ``[i | f | g | o]`` along the last axis of the
``(in_dim, 4H)`` input weights, ``(H, 4H)`` recurrent weights and ``(4H,)``
bias. Gates i, f, o use the logistic sigmoid, the candidate g uses tanh:

    c_t = f * c_{t-1} + i * g        h_t = o * tanh(c_t)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

Params = dict[str, np.ndarray]
Grads = dict[str, np.ndarray]


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int, shape: tuple[int, ...]) -> np.ndarray:
    r = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-r, r, size=shape)


def init_lstm_params(rng: np.random.Generator, in_dim: int, hidden: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Glorot weights (per-gate fan-out = hidden), zero biases, forget-gate bias 1."""
    wx = glorot_uniform(rng, in_dim, hidden, (in_dim, 4 * hidden))
    wh = glorot_uniform(rng, hidden, hidden, (hidden, 4 * hidden))
    b = np.zeros(4 * hidden)
    b[hidden : 2 * hidden] = 1.0
    return wx, wh, b


# --- embeddings ---


def embedding_lookup(table: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Rows of ``table`` selected by ``indices`` (any shape); output gains the last axis."""
    indices = np.asarray(indices)
    if indices.size and (indices.min() < 0 or indices.max() >= table.shape[0]):
        raise ValueError(f"embedding index out of range for table with {table.shape[0]} rows")
    return table[indices]


def embedding_backward(grad_out: np.ndarray, indices: np.ndarray, n_rows: int) -> np.ndarray:
    """Accumulate upstream rows into a dense (n_rows, d) gradient; repeats sum."""
    grad = np.zeros((n_rows, grad_out.shape[-1]), dtype=np.float64)
    np.add.at(grad, np.asarray(indices).reshape(-1), grad_out.reshape(-1, grad_out.shape[-1]))
    return grad


# --- LSTM ---


@dataclass
class LSTMCache:
    inputs: np.ndarray  # (T, B, D)
    gates: np.ndarray  # (T, B, 4H), post-activation [i|f|g|o]
    cells: np.ndarray  # (T, B, H)
    tanh_cells: np.ndarray  # (T, B, H)
    hiddens: np.ndarray  # (T, B, H)
    h0: np.ndarray
    c0: np.ndarray
    wx: np.ndarray
    wh: np.ndarray


def lstm_forward(
    inputs: np.ndarray,
    wx: np.ndarray,
    wh: np.ndarray,
    b: np.ndarray,
    h0: np.ndarray | None = None,
    c0: np.ndarray | None = None,
) -> tuple[np.ndarray, LSTMCache]:
    """Run the recurrence over ``inputs`` of shape (T, B, D); returns all hidden states."""
    T, B, D = inputs.shape
    H = wh.shape[0]
    if wx.shape != (D, 4 * H) or wh.shape != (H, 4 * H) or b.shape != (4 * H,):
        raise ValueError(
            f"inconsistent LSTM shapes: inputs {inputs.shape}, wx {wx.shape}, wh {wh.shape}, b {b.shape}"
        )
    h = np.zeros((B, H)) if h0 is None else h0
    c = np.zeros((B, H)) if c0 is None else c0
    if h.shape != (B, H) or c.shape != (B, H):
        raise ValueError(f"initial state shapes {h.shape}/{c.shape} do not match (B={B}, H={H})")
    cache = LSTMCache(
        inputs=inputs,
        gates=np.empty((T, B, 4 * H)),
        cells=np.empty((T, B, H)),
        tanh_cells=np.empty((T, B, H)),
        hiddens=np.empty((T, B, H)),
        h0=h,
        c0=c,
        wx=wx,
        wh=wh,
    )
    for t in range(T):
        pre = inputs[t] @ wx + h @ wh + b
        i = sigmoid(pre[:, :H])
        f = sigmoid(pre[:, H : 2 * H])
        g = np.tanh(pre[:, 2 * H : 3 * H])
        o = sigmoid(pre[:, 3 * H :])
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        cache.gates[t] = np.concatenate([i, f, g, o], axis=1)
        cache.cells[t] = c
        cache.tanh_cells[t] = tc
        cache.hiddens[t] = h
    return cache.hiddens, cache


def lstm_backward(
    cache: LSTMCache,
    d_hiddens: np.ndarray,
    d_h_last: np.ndarray | None = None,
    d_c_last: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Exact BPTT through a cached forward pass.

    ``d_hiddens`` holds the upstream gradient on every hidden state (T, B, H);
    extra gradient on the final h/c can be passed separately. Returns
    (d_inputs, d_wx, d_wh, d_b, d_h0, d_c0).
    """
    T, B, H = cache.hiddens.shape
    if d_hiddens.shape != (T, B, H):
        raise ValueError(f"upstream shape {d_hiddens.shape} does not match hiddens {(T, B, H)}")
    wx, wh = cache.wx, cache.wh
    d_inputs = np.empty_like(cache.inputs)
    d_wx = np.zeros_like(wx)
    d_wh = np.zeros_like(wh)
    d_b = np.zeros(4 * H)
    dh = np.zeros((B, H)) if d_h_last is None else d_h_last.copy()
    dc = np.zeros((B, H)) if d_c_last is None else d_c_last.copy()
    for t in reversed(range(T)):
        dh = dh + d_hiddens[t]
        i = cache.gates[t][:, :H]
        f = cache.gates[t][:, H : 2 * H]
        g = cache.gates[t][:, 2 * H : 3 * H]
        o = cache.gates[t][:, 3 * H :]
        tc = cache.tanh_cells[t]
        c_prev = cache.cells[t - 1] if t > 0 else cache.c0
        h_prev = cache.hiddens[t - 1] if t > 0 else cache.h0

        do = dh * tc
        dc = dc + dh * o * (1.0 - tc * tc)
        di = dc * g
        dg = dc * i
        df = dc * c_prev
        dc = dc * f  # becomes dc_{t-1}

        d_pre = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g * g),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        d_wx += cache.inputs[t].T @ d_pre
        d_wh += h_prev.T @ d_pre
        d_b += d_pre.sum(axis=0)
        d_inputs[t] = d_pre @ wx.T
        dh = d_pre @ wh.T  # becomes dh_{t-1}
    return d_inputs, d_wx, d_wh, d_b, dh, dc


# --- dense + softmax cross-entropy head ---


def dense_softmax_cross_entropy(
    weights: np.ndarray,
    bias: np.ndarray,
    inputs: np.ndarray,
    labels: np.ndarray,
) -> tuple[float, np.ndarray, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Mean cross-entropy of softmax(inputs @ weights + bias) against integer labels.

    Returns (loss, probs, (d_weights, d_bias, d_inputs)); gradients carry the
    1/batch factor of the mean.
    """
    labels = np.asarray(labels)
    p = weights.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= p):
        raise ValueError(f"label out of range for {p} classes")
    logits = inputs @ weights + bias
    logits = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(logits)
    probs = exp / exp.sum(axis=1, keepdims=True)
    n = inputs.shape[0]
    with np.errstate(divide="ignore"):
        # a zero probability at the label yields an infinite loss on purpose;
        # the training loop treats non-finite losses as divergence
        loss = float(-np.log(probs[np.arange(n), labels]).mean())
    d_logits = probs.copy()
    d_logits[np.arange(n), labels] -= 1.0
    d_logits /= n
    d_weights = inputs.T @ d_logits
    d_bias = d_logits.sum(axis=0)
    d_inputs = d_logits @ weights.T
    return loss, probs, (d_weights, d_bias, d_inputs)


# --- Adam ---


@dataclass
class AdamState:
    """First/second moment accumulators plus the step counter."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: Grads = field(default_factory=dict)
    v: Grads = field(default_factory=dict)


def adam_step(params: Params, grads: Grads, state: AdamState) -> tuple[Params, AdamState]:
    """One bias-corrected Adam update, applied in place to ``params``."""
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    for name in sorted(params):
        g = grads[name]
        p = params[name]
        if g.shape != p.shape:
            raise ValueError(f"gradient shape {g.shape} does not match parameter {name!r} {p.shape}")
        m = state.m.setdefault(name, np.zeros_like(p))
        v = state.v.setdefault(name, np.zeros_like(p))
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        m_hat = m / (1.0 - b1**state.t)
        v_hat = v / (1.0 - b2**state.t)
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return params, state


# --- finite-difference verification ---


@dataclass(frozen=True)
class GradCheckResult:
    max_rel_error: float
    worst_param: str
    n_checked: int


def grad_check(
    fn: Callable[[Params], tuple[float, Grads]],
    params: Params,
    n_samples: int = 8,
    h: float = 1e-5,
    rng: np.random.Generator | None = None,
    include: Mapping[str, Sequence[int]] | None = None,
) -> GradCheckResult:
    """Compare analytic gradients from ``fn`` against central differences.

    ``fn`` maps the parameter dict to (loss, gradient dict). Up to
    ``n_samples`` flat positions per tensor are probed (plus any listed in
    ``include``), with relative error |a - n| / max(|a|, |n|, 1e-8).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    loss, grads = fn(params)
    if not np.isfinite(loss):
        raise ValueError("loss is not finite")
    worst = 0.0
    worst_name = ""
    checked = 0
    for name in sorted(params):
        arr = params[name]
        grad = grads[name]
        if not np.all(np.isfinite(grad)):
            raise ValueError(f"gradient of {name!r} is not finite")
        size = arr.size
        picks = set(int(i) for i in rng.choice(size, size=min(n_samples, size), replace=False))
        if include and name in include:
            picks.update(int(i) for i in include[name])
        flat = arr.reshape(-1)
        for idx in sorted(picks):
            original = flat[idx]
            flat[idx] = original + h
            loss_plus, _ = fn(params)
            flat[idx] = original - h
            loss_minus, _ = fn(params)
            flat[idx] = original
            numeric = (loss_plus - loss_minus) / (2.0 * h)
            if not np.isfinite(numeric):
                raise ValueError(f"finite-difference probe of {name!r}[{idx}] is not finite")
            analytic = grad.reshape(-1)[idx]
            err = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
            checked += 1
            if err > worst:
                worst = err
                worst_name = f"{name}[{idx}]"
    return GradCheckResult(max_rel_error=worst, worst_param=worst_name, n_checked=checked)

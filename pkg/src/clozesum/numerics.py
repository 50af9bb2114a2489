"""Float64 numeric primitives and the named parameter store.

Everything here is plain numpy with explicit shapes. LSTM weights are
packed as (4H, in_dim) / (4H, H) with gate blocks ordered
[input, forget, candidate, output]; the forget block of a fresh bias
vector is initialized to 1 for training stability. Analytic gradients
throughout the package are validated against `grad_check`.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit


def sigmoid(x):
    """Elementwise logistic function, stable for large |x|."""
    return expit(x)


def softmax(v):
    """Softmax of a 1-d vector with max subtraction for stability.

    Output is strictly positive, sums to 1, and is invariant under adding
    a constant to every input. Raises on an empty vector.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("softmax of an empty vector")
    e = np.exp(v - v.max())
    return e / e.sum()


def log_softmax(v):
    """log(softmax(v)), computed without forming intermediate ratios."""
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        raise ValueError("log_softmax of an empty vector")
    shifted = v - v.max()
    return shifted - np.log(np.exp(shifted).sum())


def lstm_cell(x, h_prev, c_prev, w_in, w_rec, bias):
    """One LSTM step. Returns (h, c).

    x (I,), h_prev (H,), c_prev (H,), w_in (4H, I), w_rec (4H, H),
    bias (4H,). Gates use the sigmoid, the candidate uses tanh, so every
    component of h lies in (-1, 1).
    """
    x = np.asarray(x, dtype=np.float64)
    h_prev = np.asarray(h_prev, dtype=np.float64)
    c_prev = np.asarray(c_prev, dtype=np.float64)
    hidden = h_prev.shape[0]
    if w_rec.shape != (4 * hidden, hidden):
        raise ValueError(
            f"recurrent weights {w_rec.shape} do not match hidden size {hidden}"
        )
    if w_in.shape != (4 * hidden, x.shape[0]):
        raise ValueError(
            f"input weights {w_in.shape} do not match input of size {x.shape[0]}"
        )
    if bias.shape != (4 * hidden,) or c_prev.shape != (hidden,):
        raise ValueError("bias or cell state shape mismatch")
    z = w_in @ x + w_rec @ h_prev + bias
    i = expit(z[:hidden])
    f = expit(z[hidden : 2 * hidden])
    g = np.tanh(z[2 * hidden : 3 * hidden])
    o = expit(z[3 * hidden :])
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c


class ParamStore:
    """Named float64 parameter tensors plus matching gradient buffers.

    Gradient shapes always equal their parameter's shape; unknown names
    raise KeyError. One writer at a time is assumed.
    """

    def __init__(self):
        self.params: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}

    def add(self, name, value):
        if name in self.params:
            raise KeyError(f"parameter {name!r} already registered")
        arr = np.ascontiguousarray(value, dtype=np.float64)
        self.params[name] = arr
        self.grads[name] = np.zeros_like(arr)
        return arr

    def get(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def grad(self, name):
        try:
            return self.grads[name]
        except KeyError:
            raise KeyError(f"unknown parameter {name!r}") from None

    def add_grad(self, name, delta):
        g = self.grad(name)
        delta = np.asarray(delta, dtype=np.float64)
        if delta.shape != g.shape:
            raise ValueError(
                f"gradient for {name!r} has shape {delta.shape}, expected {g.shape}"
            )
        g += delta

    def zero_grads(self):
        for g in self.grads.values():
            g[...] = 0.0

    def names(self):
        return list(self.params)

    def __contains__(self, name):
        return name in self.params

    def snapshot(self):
        """Deep copy of all parameter values."""
        return {name: value.copy() for name, value in self.params.items()}

    def load_snapshot(self, values):
        for name, value in values.items():
            target = self.get(name)
            if target.shape != value.shape:
                raise ValueError(f"snapshot shape mismatch for {name!r}")
            target[...] = value

    def grad_snapshot(self):
        return {name: g.copy() for name, g in self.grads.items()}


def grad_check(f, store, eps=1e-5, names=None):
    """Max relative error between store.grads and central differences of f.

    `f()` must be a pure deterministic scalar function of store.params;
    the caller fills store.grads analytically before calling. The error
    metric is |analytic - numeric| / max(1, |numeric|), maximized over
    every entry of every checked parameter.
    """
    worst = 0.0
    for name in names if names is not None else store.names():
        theta = store.get(name).reshape(-1)
        analytic = store.grad(name).reshape(-1)
        for idx in range(theta.size):
            orig = theta[idx]
            theta[idx] = orig + eps
            f_plus = float(f())
            theta[idx] = orig - eps
            f_minus = float(f())
            theta[idx] = orig
            if not (np.isfinite(f_plus) and np.isfinite(f_minus)):
                raise ValueError(f"non-finite objective while perturbing {name!r}")
            numeric = (f_plus - f_minus) / (2.0 * eps)
            err = abs(analytic[idx] - numeric) / max(1.0, abs(numeric))
            if err > worst:
                worst = err
    return worst


def xavier_uniform(rng, rows, cols):
    """Seeded Xavier-uniform matrix of shape (rows, cols)."""
    limit = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-limit, limit, size=(rows, cols))


def add_lstm_params(store, prefix, input_dim, hidden, rng):
    """Register one LSTM's weights under `prefix`.

    Weight matrices are Xavier-uniform; biases are zero except the forget
    block, which starts at 1.0.
    """
    store.add(prefix + ".w_in", xavier_uniform(rng, 4 * hidden, input_dim))
    store.add(prefix + ".w_rec", xavier_uniform(rng, 4 * hidden, hidden))
    bias = np.zeros(4 * hidden)
    bias[hidden : 2 * hidden] = 1.0
    store.add(prefix + ".bias", bias)

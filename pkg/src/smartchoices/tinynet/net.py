"""Minimal dense networks with manual gradients and Adam.

Small enough to audit: fully-connected layers with identity/tanh/relu
activations, an optional key-embedding table whose rows receive sparse
gradients, soft target updates, and flat float64 parameter snapshots.
"""

import math

import numpy as np

from .backend import kernels

ACTIVATIONS = {"identity": 0, "tanh": 1, "relu": 2}


def _init_weight(rng, out_dim, in_dim):
    # uniform +-1/sqrt(fan_in), scale-stable for tiny nets
    lim = 1.0 / math.sqrt(in_dim)
    return rng.uniform(-lim, lim, size=(out_dim, in_dim))


class Dense:
    def __init__(self, in_dim, out_dim, activation, rng):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.activation = activation
        self.act_id = ACTIVATIONS[activation]
        self.w = _init_weight(rng, out_dim, in_dim)
        self.b = np.zeros(out_dim)


class Embedding:
    """Key-id -> dense vector table; gradients touch only looked-up rows."""

    def __init__(self, rows, width, rng):
        if rows < 1 or width < 1:
            raise ValueError("embedding needs rows >= 1 and width >= 1")
        self.rows = rows
        self.width = width
        self.table = _init_weight(rng, rows, width)

    def lookup(self, ids, table=None):
        """ids (n, k) int -> (n, k*width) float64."""
        t = self.table if table is None else table
        if np.any(ids < 0) or np.any(ids >= self.rows):
            raise IndexError("embedding key id out of range")
        n = ids.shape[0]
        return t[ids.reshape(-1)].reshape(n, -1)

    def grad_rows(self, ids, g):
        """Accumulate (n, k*width) output grads into per-row grads.

        Returns (rows, grad_rows) with unique touched row ids.
        """
        flat_ids = ids.reshape(-1)
        g2 = g.reshape(flat_ids.shape[0], self.width)
        rows, inv = np.unique(flat_ids, return_inverse=True)
        acc = np.zeros((rows.shape[0], self.width))
        np.add.at(acc, inv, g2)
        return rows, acc


class Network:
    """Dense stack over concatenated [embedded keys | float features]."""

    def __init__(self, n_floats, hidden, out_dim, hidden_activation,
                 out_activation, rng, embedding=None, n_keys=0):
        if n_keys and embedding is None:
            raise ValueError("key inputs declared but no embedding given")
        self.n_floats = n_floats
        self.n_keys = n_keys
        self.embedding = embedding
        in_dim = n_floats + (n_keys * embedding.width if n_keys else 0)
        if in_dim < 1:
            raise ValueError("network needs at least one input")
        dims = [in_dim, *hidden, out_dim]
        acts = [hidden_activation] * len(hidden) + [out_activation]
        self.layers = [
            Dense(dims[j], dims[j + 1], acts[j], rng) for j in range(len(acts))
        ]

    # -- parameters ------------------------------------------------------

    def param_list(self):
        """Layer parameters, embedding excluded (it may be shared)."""
        out = []
        for layer in self.layers:
            out.append(layer.w)
            out.append(layer.b)
        return out

    def copy_params(self):
        return [p.copy() for p in self.param_list()]

    def set_params(self, arrs):
        own = self.param_list()
        if len(own) != len(arrs):
            raise ValueError("parameter list length mismatch")
        for dst, src in zip(own, arrs):
            if dst.shape != src.shape:
                raise ValueError("parameter shape mismatch")
            np.copyto(dst, src)

    # -- forward / backward ----------------------------------------------

    def _input(self, floats, keys, emb_table):
        parts = []
        if self.n_keys:
            parts.append(self.embedding.lookup(keys, table=emb_table))
        if self.n_floats:
            parts.append(floats)
        x = parts[0] if len(parts) == 1 else np.concatenate(parts, axis=1)
        return np.ascontiguousarray(x, dtype=np.float64)

    def forward(self, floats, keys=None, params=None, emb_table=None):
        x = self._input(floats, keys, emb_table)
        ps = self.param_list() if params is None else params
        for j, layer in enumerate(self.layers):
            out = np.empty((x.shape[0], layer.out_dim))
            kernels.dense_forward(x, ps[2 * j], ps[2 * j + 1], layer.act_id, out)
            x = out
        return x

    def forward_cached(self, floats, keys=None):
        x = self._input(floats, keys, None)
        inputs = []
        outputs = []
        for layer in self.layers:
            inputs.append(x)
            out = np.empty((x.shape[0], layer.out_dim))
            kernels.dense_forward(x, layer.w, layer.b, layer.act_id, out)
            outputs.append(out)
            x = out
        return x, (inputs, outputs, keys)

    def backward(self, cache, gy, want_input_grad=False):
        """Returns (param_grads aligned with param_list, gfloats, emb_grad).

        emb_grad is (rows, grad_rows) from the shared embedding, or None.
        gfloats is the gradient w.r.t. the float inputs (None unless
        want_input_grad).
        """
        inputs, outputs, keys = cache
        grads = [None] * (2 * len(self.layers))
        g = np.ascontiguousarray(gy, dtype=np.float64)
        for j in range(len(self.layers) - 1, -1, -1):
            layer = self.layers[j]
            dw = np.empty_like(layer.w)
            db = np.empty_like(layer.b)
            need_dx = j > 0 or want_input_grad or self.n_keys
            dx = np.empty_like(inputs[j]) if need_dx else None
            kernels.dense_backward(inputs[j], layer.w, outputs[j], g,
                                   layer.act_id, dw, db, dx)
            grads[2 * j] = dw
            grads[2 * j + 1] = db
            g = dx
        emb_grad = None
        gfloats = None
        if self.n_keys:
            split = self.n_keys * self.embedding.width
            emb_grad = self.embedding.grad_rows(keys, g[:, :split])
            if want_input_grad:
                gfloats = g[:, split:]
        elif want_input_grad:
            gfloats = g
        return grads, gfloats, emb_grad


class Adam:
    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, grads):
        self.t += 1
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            kernels.adam_step(p.reshape(-1), np.ascontiguousarray(g).reshape(-1),
                              m.reshape(-1), v.reshape(-1), self.t,
                              self.lr, self.beta1, self.beta2, self.eps)


class SparseAdam:
    """Adam over an embedding table touching only the given rows."""

    def __init__(self, table, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.table = table
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = np.zeros_like(table)
        self.v = np.zeros_like(table)

    def step(self, rows, grad_rows):
        self.t += 1
        m = self.m[rows]
        v = self.v[rows]
        m *= self.beta1
        m += (1.0 - self.beta1) * grad_rows
        v *= self.beta2
        v += (1.0 - self.beta2) * grad_rows * grad_rows
        self.m[rows] = m
        self.v[rows] = v
        mhat = m / (1.0 - self.beta1**self.t)
        vhat = v / (1.0 - self.beta2**self.t)
        self.table[rows] -= self.lr * mhat / (np.sqrt(vhat) + self.eps)


def clip_grads(grads, max_norm):
    """Global-norm clipping in place; returns the pre-clip norm."""
    total = 0.0
    for g in grads:
        total += float(np.sum(g * g))
    norm = math.sqrt(total)
    if max_norm > 0 and norm > max_norm:
        scale = max_norm / norm
        for g in grads:
            g *= scale
    return norm


def soft_update_params(target_params, online_params, tau):
    if len(target_params) != len(online_params):
        raise ValueError("architecture mismatch")
    for t, o in zip(target_params, online_params):
        if t.shape != o.shape:
            raise ValueError("architecture mismatch")
        kernels.soft_update(t.reshape(-1), o.reshape(-1), tau)

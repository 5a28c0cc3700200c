"""Network/optimizer correctness: gradients vs finite differences, Adam
against the textbook update, kernel backend parity, snapshot round-trips."""

import io
import math

import numpy as np
import pytest

from smartchoices.tinynet import (Adam, Embedding, Network, SparseAdam,
                                  clip_grads, freeze, read_params,
                                  soft_update_params, write_params)
from smartchoices.tinynet import _kernels_py
from smartchoices.tinynet.backend import kernels


def _loss_and_grads(net, floats, keys, direction):
    y, cache = net.forward_cached(floats, keys)
    loss = float(np.sum(y * direction))
    grads, gfloats, emb_grad = net.backward(cache, direction,
                                            want_input_grad=True)
    return loss, grads, gfloats, emb_grad


def _numeric_grad(param, f, h=1e-5):
    g = np.zeros_like(param)
    flat = param.reshape(-1)
    gf = g.reshape(-1)
    for j in range(flat.shape[0]):
        orig = flat[j]
        flat[j] = orig + h
        up = f()
        flat[j] = orig - h
        down = f()
        flat[j] = orig
        gf[j] = (up - down) / (2.0 * h)
    return g


def _rel_err(a, b):
    denom = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-8)
    return np.max(np.abs(a - b)) / denom


@pytest.mark.parametrize("activation", ["identity", "tanh", "relu"])
def test_dense_gradients_match_finite_differences(activation):
    rng = np.random.default_rng(7)
    net = Network(4, (5, 3), 2, activation, "tanh", rng)
    floats = rng.normal(size=(6, 4))
    direction = rng.normal(size=(6, 2))

    def loss():
        return float(np.sum(net.forward(floats) * direction))

    _, grads, gfloats, _ = _loss_and_grads(net, floats, None, direction)
    params = net.param_list()
    for p, g in zip(params, grads):
        assert _rel_err(_numeric_grad(p, loss), g) < 1e-6
    gf_num = _numeric_grad(floats, loss)
    assert _rel_err(gf_num, gfloats) < 1e-6


def test_embedding_gradients_match_finite_differences():
    rng = np.random.default_rng(11)
    emb = Embedding(9, 3, rng)
    net = Network(2, (4,), 1, "tanh", "identity", rng, embedding=emb, n_keys=2)
    floats = rng.normal(size=(5, 2))
    keys = rng.integers(0, 9, size=(5, 2))
    direction = rng.normal(size=(5, 1))

    def loss():
        return float(np.sum(net.forward(floats, keys) * direction))

    _, grads, _, emb_grad = _loss_and_grads(net, floats, keys, direction)
    rows, grad_rows = emb_grad
    num = _numeric_grad(emb.table, loss)
    dense = np.zeros_like(emb.table)
    dense[rows] = grad_rows
    assert _rel_err(num, dense) < 1e-6
    # untouched rows get exactly zero gradient
    untouched = np.setdiff1d(np.arange(9), np.unique(keys))
    assert np.all(num[untouched] == 0.0)


def test_adam_matches_reference_update():
    rng = np.random.default_rng(3)
    p = rng.normal(size=7)
    ref = p.copy()
    opt = Adam([p], lr=0.01)
    m = np.zeros_like(p)
    v = np.zeros_like(p)
    for t in range(1, 6):
        g = rng.normal(size=7)
        opt.step([g.copy()])
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        mhat = m / (1 - 0.9 ** t)
        vhat = v / (1 - 0.999 ** t)
        ref -= 0.01 * mhat / (np.sqrt(vhat) + 1e-8)
        np.testing.assert_allclose(p, ref, rtol=1e-12, atol=1e-12)


def test_sparse_adam_touches_only_given_rows():
    rng = np.random.default_rng(4)
    table = rng.normal(size=(6, 2))
    before = table.copy()
    opt = SparseAdam(table, lr=0.1)
    opt.step(np.array([1, 4]), rng.normal(size=(2, 2)))
    changed = np.any(table != before, axis=1)
    assert list(np.nonzero(changed)[0]) == [1, 4]


def test_clip_grads_global_norm():
    g1 = np.array([3.0, 0.0])
    g2 = np.array([[0.0, 4.0]])
    norm = clip_grads([g1, g2], max_norm=2.5)
    assert norm == pytest.approx(5.0)
    total = math.sqrt(np.sum(g1 ** 2) + np.sum(g2 ** 2))
    assert total == pytest.approx(2.5)
    # under the cap nothing moves
    g = np.array([0.3, 0.4])
    clip_grads([g], max_norm=2.5)
    np.testing.assert_allclose(g, [0.3, 0.4])


def test_soft_update_blends_parameters():
    t = np.zeros(4)
    o = np.ones(4)
    soft_update_params([t], [o], tau=0.1)
    np.testing.assert_allclose(t, 0.1)
    soft_update_params([t], [o], tau=0.1)
    np.testing.assert_allclose(t, 0.19)


def test_snapshot_roundtrip_and_freeze():
    rng = np.random.default_rng(5)
    params = {"a/w": rng.normal(size=(3, 2)), "a/b": rng.normal(size=3),
              "scalar": np.float64(1.5)}
    frozen = freeze(params)
    assert not frozen["a/w"].flags.writeable
    buf = io.BytesIO()
    write_params(buf, frozen)
    buf.seek(0)
    loaded = read_params(buf)
    assert list(loaded) == list(params)
    for name in params:
        np.testing.assert_array_equal(loaded[name],
                                      np.asarray(params[name], dtype=np.float64))
    with pytest.raises(ValueError):
        write_params(io.BytesIO(), {"bad name": np.zeros(1)})


def test_snapshot_rejects_bad_magic():
    with pytest.raises(ValueError):
        read_params(io.BytesIO(b"not-a-snapshot\n\n"))


def test_kernel_backends_agree():
    rng = np.random.default_rng(6)
    for n, i, o, act in [(1, 3, 4, 0), (7, 5, 2, 1), (300, 8, 8, 1),
                         (16, 4, 6, 2)]:
        x = rng.normal(size=(n, i))
        w = rng.normal(size=(o, i))
        b = rng.normal(size=o)
        out_a = np.empty((n, o))
        out_b = np.empty((n, o))
        kernels.dense_forward(x, w, b, act, out_a)
        _kernels_py.dense_forward(x, w, b, act, out_b)
        np.testing.assert_allclose(out_a, out_b, rtol=1e-12, atol=1e-12)
        gy = rng.normal(size=(n, o))
        dwa, dwb = np.empty((o, i)), np.empty((o, i))
        dba, dbb = np.empty(o), np.empty(o)
        dxa, dxb = np.empty((n, i)), np.empty((n, i))
        kernels.dense_backward(x, w, out_a, gy, act, dwa, dba, dxa)
        _kernels_py.dense_backward(x, w, out_b, gy, act, dwb, dbb, dxb)
        np.testing.assert_allclose(dwa, dwb, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(dba, dbb, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(dxa, dxb, rtol=1e-12, atol=1e-12)


def test_kernel_backends_agree_adam_and_soft_update():
    rng = np.random.default_rng(8)
    p1 = rng.normal(size=20)
    p2 = p1.copy()
    m1, v1 = np.zeros(20), np.zeros(20)
    m2, v2 = np.zeros(20), np.zeros(20)
    for t in range(1, 4):
        g = rng.normal(size=20)
        kernels.adam_step(p1, g, m1, v1, t, 0.01, 0.9, 0.999, 1e-8)
        _kernels_py.adam_step(p2, g, m2, v2, t, 0.01, 0.9, 0.999, 1e-8)
    np.testing.assert_allclose(p1, p2, rtol=1e-12, atol=1e-12)
    t1, t2 = rng.normal(size=9), None
    t2 = t1.copy()
    o = rng.normal(size=9)
    kernels.soft_update(t1, o, 0.05)
    _kernels_py.soft_update(t2, o, 0.05)
    np.testing.assert_allclose(t1, t2, rtol=1e-12, atol=1e-12)


def test_forward_accepts_readonly_snapshot_params():
    rng = np.random.default_rng(9)
    net = Network(3, (4,), 2, "tanh", "tanh", rng)
    frozen = freeze({"w0": net.layers[0].w, "b0": net.layers[0].b,
                     "w1": net.layers[1].w, "b1": net.layers[1].b})
    params = [frozen["w0"], frozen["b0"], frozen["w1"], frozen["b1"]]
    x = rng.normal(size=(2, 3))
    np.testing.assert_array_equal(net.forward(x, params=params),
                                  net.forward(x))

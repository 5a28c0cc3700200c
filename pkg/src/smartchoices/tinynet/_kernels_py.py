"""Pure-NumPy kernels; same contracts as the compiled versions in _kernels.pyx.

Activation ids: 0 = identity, 1 = tanh, 2 = relu.
All arrays are C-contiguous float64; outputs are written in place.
"""

import numpy as np


def dense_forward(x, w, b, act, out):
    """out = act(x @ w.T + b); x (n,i), w (o,i), b (o,), out (n,o)."""
    np.dot(x, w.T, out=out)
    out += b
    if act == 1:
        np.tanh(out, out=out)
    elif act == 2:
        np.maximum(out, 0.0, out=out)


def dense_backward(x, w, y, gy, act, dw, db, dx):
    """Gradients for dense_forward given its cached output y.

    dw (o,i), db (o,) and, when dx is not None, dx (n,i) are written in place.
    """
    if act == 1:
        gpre = gy * (1.0 - y * y)
    elif act == 2:
        gpre = gy * (y > 0.0)
    else:
        gpre = gy
    np.dot(gpre.T, x, out=dw)
    np.sum(gpre, axis=0, out=db)
    if dx is not None:
        np.dot(gpre, w, out=dx)


def adam_step(p, g, m, v, t, lr, beta1, beta2, eps):
    """One Adam update with bias correction, in place on flat views."""
    m *= beta1
    m += (1.0 - beta1) * g
    v *= beta2
    v += (1.0 - beta2) * g * g
    mhat = m / (1.0 - beta1**t)
    vhat = v / (1.0 - beta2**t)
    p -= lr * mhat / (np.sqrt(vhat) + eps)


def soft_update(target, online, tau):
    """target <- tau * online + (1 - tau) * target, in place on flat views."""
    target *= 1.0 - tau
    target += tau * online

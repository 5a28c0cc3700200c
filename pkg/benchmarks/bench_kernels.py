"""Compare the compiled kernels against the NumPy fallback.

Times the three hot operations (dense forward, dense backward, Adam step)
at acting-time and training-time shapes, plus one end-to-end learner
train_step. Run:

    python benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from smartchoices.config import LearnerConfig
from smartchoices.learners import Td3Learner
from smartchoices.tinynet import _kernels_py
from smartchoices.tinynet.backend import BACKEND, kernels


def _time(fn, min_seconds=0.2):
    fn()  # warm up
    start = time.perf_counter()
    reps = 0
    while time.perf_counter() - start < min_seconds:
        fn()
        reps += 1
    return (time.perf_counter() - start) / reps


def bench_kernels(rng):
    shapes = [("act (1x3 -> 16)", 1, 3, 16), ("act (1x16 -> 1)", 1, 16, 1),
              ("train (256x4 -> 16)", 256, 4, 16),
              ("train (1024x10 -> 10)", 1024, 10, 10)]
    print(f"{'operation':36s} {'compiled':>12s} {'numpy':>12s} {'speedup':>8s}")
    for label, n, i, o in shapes:
        x = rng.normal(size=(n, i))
        w = rng.normal(size=(o, i))
        b = rng.normal(size=o)
        out = np.empty((n, o))
        gy = rng.normal(size=(n, o))
        dw, db, dx = np.empty((o, i)), np.empty(o), np.empty((n, i))
        for name, fwd, bwd in [
            (f"forward tanh {label}",
             lambda m=kernels: m.dense_forward(x, w, b, 1, out), None),
            (f"backward tanh {label}", None,
             lambda m=kernels: m.dense_backward(x, w, out, gy, 1, dw, db, dx)),
        ]:
            run_c = fwd or bwd
            if fwd:
                run_p = lambda: _kernels_py.dense_forward(x, w, b, 1, out)
            else:
                run_p = lambda: _kernels_py.dense_backward(x, w, out, gy, 1,
                                                           dw, db, dx)
            tc = _time(run_c)
            tp = _time(run_p)
            print(f"{name:36s} {tc * 1e6:10.2f}us {tp * 1e6:10.2f}us "
                  f"{tp / tc:7.2f}x")
    p = rng.normal(size=512)
    g = rng.normal(size=512)
    m = np.zeros(512)
    v = np.zeros(512)
    tc = _time(lambda: kernels.adam_step(p, g, m, v, 3, 1e-3, 0.9, 0.999, 1e-8))
    tp = _time(lambda: _kernels_py.adam_step(p, g, m, v, 3, 1e-3, 0.9, 0.999,
                                             1e-8))
    print(f"{'adam step (512 params)':36s} {tc * 1e6:10.2f}us "
          f"{tp * 1e6:10.2f}us {tp / tc:7.2f}x")


def bench_train_step(rng):
    cfg = LearnerConfig(algorithm="TD3", discount=0.8, batch_size=256,
                        actor_hidden=(16,), critic_hidden=(16,))
    learner = Td3Learner(3, 0, 0, 1, cfg, rng)
    for _ in range(512):
        learner.push_transition(rng.normal(size=3), np.zeros(0, dtype=np.int64),
                                rng.uniform(-1, 1, size=1), rng.normal(),
                                rng.normal(size=3), np.zeros(0, dtype=np.int64),
                                False)
    t = _time(learner.train_step, min_seconds=1.0)
    print(f"\nTD3 train_step (batch 256, {BACKEND} backend): {t * 1e6:.0f}us "
          f"({1 / t:.0f} steps/s)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"selected backend: {BACKEND}\n")
    bench_kernels(rng)
    bench_train_step(rng)


if __name__ == "__main__":
    main()

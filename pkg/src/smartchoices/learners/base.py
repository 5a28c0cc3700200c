"""Shared learner machinery: replay, snapshot publication, async training.

Acting always reads the latest published snapshot (an immutable set of
parameter arrays, swapped atomically), so a background training thread can
mutate its private parameter copies without readers ever seeing a partial
update. Synchronous mode drives train_step() inline instead.
"""

import csv
import threading

import numpy as np

from ..tinynet import freeze
from .replay import ReplayBuffer


class Snapshot:
    """Immutable published parameters: named dict + per-net fast lists."""

    def __init__(self, named, lists):
        self.named = named
        self.lists = lists

    def __getitem__(self, name):
        return self.named[name]


def merge_sparse_grads(parts):
    """Merge (rows, grad_rows) pairs; rows are summed where repeated."""
    parts = [p for p in parts if p is not None]
    if not parts:
        return None
    all_rows = np.concatenate([p[0] for p in parts])
    all_grads = np.concatenate([p[1] for p in parts])
    rows, inv = np.unique(all_rows, return_inverse=True)
    acc = np.zeros((rows.shape[0], all_grads.shape[1]))
    np.add.at(acc, inv, all_grads)
    return rows, acc


class LearnerBase:
    def __init__(self, n_floats, n_keys, key_space, action_dim, categorical,
                 config, rng):
        self.cfg = config.validate()
        self.n_floats = n_floats
        self.n_keys = n_keys
        self.key_space = key_space
        self.rng = rng
        self.buffer = ReplayBuffer(config.buffer_size, n_floats, n_keys,
                                   action_dim, categorical)
        self.updates = 0
        self.progress = []  # (update step, loss, mean Q)
        self._snapshot = None
        self._thread = None
        self._stop = threading.Event()

    # -- acting side -------------------------------------------------------

    def push_transition(self, sf, sk, a, r, nf, nk, terminal):
        self.buffer.push(sf, sk, a, r, nf, nk, terminal)

    def push_episode(self, sf, sk, a, r, nf, nk, terminal):
        self.buffer.push_many(sf, sk, a, r, nf, nk, terminal)

    def current_snapshot(self):
        return self._snapshot

    # -- training side -----------------------------------------------------

    def train_step(self):
        """One gradient step if the buffer is ready; returns True if taken."""
        batch = self.buffer.sample(self.cfg.batch_size, self.rng)
        if batch is None:
            return False
        loss, mean_q = self._update(batch)
        self.updates += 1
        if self.updates % self.cfg.update_period == 0:
            self._soft_updates()
        if self.updates % self.cfg.progress_every == 0:
            self.progress.append((self.updates, loss, mean_q))
        return True

    def publish(self):
        named = freeze(self._named_params())
        self._snapshot = Snapshot(named, self._param_lists(named))

    def write_progress_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["step", "loss", "mean_q"])
            w.writerows(self.progress)

    # -- async contract ------------------------------------------------------

    def start_async(self, publish_every=1, idle_sleep=1e-3):
        if self._thread is not None:
            raise RuntimeError("training thread already running")
        self._stop.clear()

        def loop():
            steps = 0
            while not self._stop.is_set():
                if self.train_step():
                    steps += 1
                    if steps % publish_every == 0:
                        self.publish()
                else:
                    self._stop.wait(idle_sleep)
            self.publish()

        self._thread = threading.Thread(target=loop, daemon=True)
        self._thread.start()

    def stop_async(self):
        if self._thread is not None:
            self._stop.set()
            self._thread.join()
            self._thread = None

    # -- to implement --------------------------------------------------------

    def _update(self, batch):
        raise NotImplementedError

    def _soft_updates(self):
        raise NotImplementedError

    def _named_params(self):
        raise NotImplementedError

    def _param_lists(self, named):
        raise NotImplementedError

"""FIFO replay buffer with uniform sampling.

Preallocated ring storage; safe for one writer (the acting side) and one
reader (the training side) via a lock.
"""

import threading

import numpy as np


class ReplayBuffer:
    def __init__(self, capacity, n_floats, n_keys, action_dim, categorical):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.n_floats = n_floats
        self.n_keys = n_keys
        self.categorical = categorical
        self._sf = np.zeros((capacity, n_floats))
        self._nf = np.zeros((capacity, n_floats))
        self._sk = np.zeros((capacity, n_keys), dtype=np.int64)
        self._nk = np.zeros((capacity, n_keys), dtype=np.int64)
        if categorical:
            self._a = np.zeros(capacity, dtype=np.int64)
        else:
            self._a = np.zeros((capacity, action_dim))
        self._r = np.zeros(capacity)
        self._term = np.zeros(capacity, dtype=bool)
        self._next = 0
        self._size = 0
        self._lock = threading.Lock()

    def __len__(self):
        return self._size

    def push(self, sf, sk, a, r, nf, nk, terminal):
        with self._lock:
            j = self._next
            self._sf[j] = sf
            self._sk[j] = sk
            self._a[j] = a
            self._r[j] = r
            if not terminal:
                self._nf[j] = nf
                self._nk[j] = nk
            self._term[j] = terminal
            self._next = (j + 1) % self.capacity
            self._size = min(self._size + 1, self.capacity)

    def push_many(self, sf, sk, a, r, nf, nk, terminal):
        """Bulk append; arrays are stacked along axis 0."""
        n = len(r)
        with self._lock:
            for off in range(0, n, self.capacity):
                hi = min(off + self.capacity, n)
                m = hi - off
                j = self._next
                first = min(m, self.capacity - j)
                for dst, src in ((self._sf, sf), (self._sk, sk), (self._a, a),
                                 (self._r, r), (self._nf, nf), (self._nk, nk),
                                 (self._term, terminal)):
                    dst[j:j + first] = src[off:off + first]
                    if m > first:
                        dst[:m - first] = src[off + first:hi]
                self._next = (j + m) % self.capacity
                self._size = min(self._size + m, self.capacity)

    def sample(self, n, rng):
        """Uniform sample with replacement, or None when size < n."""
        with self._lock:
            if self._size < n:
                return None
            idx = rng.integers(0, self._size, size=n)
            return {
                "sf": self._sf[idx],
                "sk": self._sk[idx],
                "a": self._a[idx],
                "r": self._r[idx],
                "nf": self._nf[idx],
                "nk": self._nk[idx],
                "term": self._term[idx],
            }

    def oldest(self):
        """First-in element's reward slot, for FIFO eviction tests."""
        with self._lock:
            if self._size < self.capacity:
                return self._r[0]
            return self._r[self._next]

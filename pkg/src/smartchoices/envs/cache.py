"""Cache replacement with learned eviction (discrete) or learned
priority offsets over an LRU base (continuous).

Traces are i.i.d. power-law key sequences. Episode cost is the miss ratio.
The continuous variant with a zero predicted offset is exactly LRU; the
discrete variant under its LRU initial function likewise reproduces LRU
hit counts.
"""

import numpy as np

from ..choice import ObservationDef, OutputDef, SmartChoice
from ..selection import INITIAL

KEY_SPACE = 100
CAPACITY = 10
TRACE_LEN = 1000
FREQ_WINDOW = 100


class AccessTrace:
    __slots__ = ("keys", "alpha")

    def __init__(self, keys, alpha):
        self.keys = keys
        self.alpha = alpha


def make_trace(rng, length=TRACE_LEN, n_keys=KEY_SPACE, alpha=0.5):
    k = np.arange(1, n_keys + 1, dtype=np.float64)
    p = k ** (-alpha)
    p /= p.sum()
    keys = rng.choice(np.arange(1, n_keys + 1), size=length, p=p)
    return AccessTrace(keys.astype(np.int64), alpha)


# -- reference simulators ----------------------------------------------------

def lru_simulate(trace, capacity=CAPACITY):
    """Hit ratio of a standard LRU cache."""
    last = {}
    hits = 0
    for t, key in enumerate(trace.keys):
        if key in last:
            hits += 1
        elif len(last) >= capacity:
            victim = min(last, key=lambda k: last[k])
            del last[victim]
        last[key] = t
    return hits / len(trace.keys)


def oracle_simulate(trace, capacity=CAPACITY):
    """Hit ratio of a clairvoyant (Belady) cache; ties on never-used-again
    residents break toward the smallest key."""
    keys = trace.keys
    n = len(keys)
    next_use = np.empty(n, dtype=np.int64)
    seen = {}
    for t in range(n - 1, -1, -1):
        next_use[t] = seen.get(keys[t], n)
        seen[keys[t]] = t
    resident = {}  # key -> next use index (n = never)
    hits = 0
    for t, key in enumerate(keys):
        if key in resident:
            hits += 1
        elif len(resident) >= capacity:
            victim = max(resident, key=lambda k: (resident[k], -k))
            del resident[victim]
        resident[key] = next_use[t]
    return hits / n


# -- frequency features -------------------------------------------------------

def frequency_features(history, key, window=FREQ_WINDOW):
    """Occurrences of key in the last `window` accesses, divided by window."""
    if window < 1:
        raise ValueError("window must be >= 1")
    recent = history[-window:]
    return sum(1 for k in recent if k == key) / window


def trace_features(trace, window=FREQ_WINDOW):
    """Per-access (frequency, recency) features, computed over the trace.

    frequency: occurrences of the key in the preceding `window` accesses
    divided by window. recency: accesses since the key was last seen,
    divided by window and clipped to 1 (1.0 when never seen).
    """
    keys = trace.keys
    n = len(keys)
    freq = np.empty(n)
    rec = np.empty(n)
    counts = np.zeros(KEY_SPACE + 1, dtype=np.int64)
    last = np.full(KEY_SPACE + 1, -1, dtype=np.int64)
    for t in range(n):
        k = keys[t]
        if t > window:
            counts[keys[t - window - 1]] -= 1
        freq[t] = counts[k] / window
        rec[t] = 1.0 if last[k] < 0 else min((t - last[k]) / window, 1.0)
        counts[k] += 1
        last[k] = t
    return freq, rec


# -- continuous (priority-queue) variant ---------------------------------------

class PriorityCache:
    """Min-priority cache of fixed capacity; ties evict the oldest insert."""

    def __init__(self, capacity):
        self.capacity = capacity
        self.prio = {}  # key -> (priority, insertion seq)
        self._seq = 0

    def __contains__(self, key):
        return key in self.prio

    def set(self, key, priority):
        if key not in self.prio:
            self._seq += 1
            self.prio[key] = (priority, self._seq)
        else:
            self.prio[key] = (priority, self.prio[key][1])

    def evict_min_if_over(self):
        if len(self.prio) <= self.capacity:
            return None
        victim = min(self.prio, key=lambda k: self.prio[k])
        del self.prio[victim]
        return victim


def continuous_cache_scores(trace, scores, capacity=CAPACITY, scale=1.0):
    """Simulate the priority-queue CRP for precomputed per-access scores.

    Returns (hit flags, rewards) where rewards follow the feedback rule:
    the outcome of access t+1 credits the prediction made at access t.
    """
    keys = trace.keys
    n = len(keys)
    cache = PriorityCache(capacity)
    hit_flags = np.zeros(n, dtype=bool)
    for t in range(n):
        key = keys[t]
        hit_flags[t] = key in cache
        cache.set(key, t + scores[t] * capacity * scale)
        if not hit_flags[t]:
            cache.evict_min_if_over()
    rewards = np.zeros(n)
    rewards[:-1] = np.where(hit_flags[1:], 1.0, -1.0)
    return hit_flags, rewards


def run_continuous_episode(choice, trace, variant, capacity=CAPACITY,
                           scale=1.0, window=FREQ_WINDOW, fast=True):
    """One trace through the continuous CRP; returns the miss ratio.

    fast=True computes all scores in one batched policy call (valid
    because the observations depend only on the trace, not on cache
    state); fast=False drives the per-access 3-call API.
    """
    keys = trace.keys
    n = len(keys)
    if variant == "continuous_freq":
        freq, rec = trace_features(trace, window)
    if fast:
        tag = choice.begin_episode()
        if variant == "continuous_freq":
            floats = np.column_stack([freq, rec])
            key_ids = None
        else:
            floats = np.zeros((n, 0))
            key_ids = keys[:, None]
        if tag == INITIAL:
            actions = np.zeros((n, 1))
        else:
            actions = choice.learner.act_batch(floats, key_ids,
                                               explore=choice.explore)
        # output range is (-1, 1): internal actions are the scores
        hit_flags, rewards = continuous_cache_scores(trace, actions[:, 0],
                                                     capacity, scale)
        choice.record_episode(floats, key_ids, actions, rewards)
        return 1.0 - float(np.mean(hit_flags))
    cache = PriorityCache(capacity)
    hits = 0
    for t in range(n):
        key = keys[t]
        hit = key in cache
        choice.feedback(1.0 if hit else -1.0)
        if variant == "continuous_freq":
            choice.observe_many({"freq": float(freq[t]), "recency": float(rec[t])})
        else:
            choice.observe("access", int(key))
        score = choice.predict()
        cache.set(key, t + score * capacity * scale)
        if hit:
            hits += 1
        else:
            cache.evict_min_if_over()
    choice.end_episode()
    return 1.0 - hits / n


# -- discrete (direct eviction) variant ----------------------------------------

class DiscreteCacheState:
    """Slot-ordered residents + recency, shared with the LRU initial fn."""

    def __init__(self, capacity=CAPACITY):
        self.capacity = capacity
        self.keys_list = []
        self.recency = {}

    def reset(self):
        self.keys_list.clear()
        self.recency.clear()

    def lru_slot(self, state=None):
        """Initial function: index of the LRU resident, or the invalid
        index when a free slot exists (store without evicting)."""
        if len(self.keys_list) < self.capacity:
            return self.capacity
        lru_key = min(self.keys_list, key=self.recency.__getitem__)
        return self.keys_list.index(lru_key)


def run_discrete_episode(choice, trace, cache_state):
    """One trace through the direct-eviction CRP; returns the miss ratio.

    Predict happens only on misses, over {0..capacity}: slot index to
    evict, or >= residents for "do not evict" (the key is then not stored
    when the cache is full).
    """
    cache_state.reset()
    keys_list = cache_state.keys_list
    recency = cache_state.recency
    capacity = cache_state.capacity
    hits = 0
    n = len(trace.keys)
    for t in range(n):
        key = int(trace.keys[t])
        if key in recency:
            hits += 1
            choice.feedback(1.0)
            choice.observe("access", key)
            recency[key] = t
            continue
        choice.feedback(-1.0)
        choice.observe("access", key)
        choice.observe_many(
            {f"mem{j}": (keys_list[j] if j < len(keys_list) else 0)
             for j in range(capacity)})
        i = choice.predict()
        if i >= len(keys_list):
            if len(keys_list) < capacity:
                keys_list.append(key)
                recency[key] = t
            # full cache + invalid index: chose not to store
        else:
            choice.feedback(-1.0)  # evict penalty
            choice.observe("evict", keys_list[i])
            del recency[keys_list[i]]
            keys_list[i] = key
            recency[key] = t
    choice.end_episode()
    return 1.0 - hits / n


def make_cache_choice(variant, config, seed, capacity=CAPACITY,
                      key_space=KEY_SPACE):
    """Returns (choice, cache_state); cache_state is None except for the
    discrete variant, whose LRU initial function reads it."""
    if variant == "discrete":
        obs = [ObservationDef("access", "key", key_space=key_space + 1)]
        obs += [ObservationDef(f"mem{j}", "key", key_space=key_space + 1)
                for j in range(capacity)]
        obs.append(ObservationDef("evict", "key", key_space=key_space + 1))
        out = OutputDef("categorical", cardinality=capacity + 1)
        cache_state = DiscreteCacheState(capacity)
        choice = SmartChoice(out, obs, initial_function=cache_state.lru_slot,
                             config=config, seed=seed)
        return choice, cache_state
    if variant == "continuous_keys":
        obs = [ObservationDef("access", "key", key_space=key_space + 1)]
    elif variant == "continuous_freq":
        obs = [
            ObservationDef("freq", "float", range=(0.0, 1.0)),
            ObservationDef("recency", "float", range=(0.0, 1.0)),
        ]
    else:
        raise ValueError(f"unknown cache variant {variant!r}")
    out = OutputDef("continuous", shape=1, range=(-1.0, 1.0))
    # zero offset reproduces LRU exactly
    choice = SmartChoice(out, obs, initial_function=lambda state: 0.0,
                         config=config, seed=seed)
    return choice, None


BASELINES = {
    "lru": lambda trace, rng: 1.0 - lru_simulate(trace),
    "oracle": lambda trace, rng: 1.0 - oracle_simulate(trace),
}

"""QuickSort with a learned pivot-sample count.

The choice outputs k in {0..7}; the partition step samples
s = min(1 + 2k, n) elements and pivots on their median. Feedback is the
inverse of the step's cost overhead versus an ideal median split.
Partitioning is mask-based (the array is distinct), with reads, writes and
comparisons charged per element touched.
"""

import math

import numpy as np

from ..choice import ObservationDef, OutputDef, SmartChoice

N_SAMPLE_ACTIONS = 8  # sample counts 1, 3, ..., 15
MAX_SIZE = 1024
MIN_SIZE = 16


class SortInstance:
    __slots__ = ("array",)

    def __init__(self, array):
        self.array = array


def make_sort_instance(rng, min_size=MIN_SIZE, max_size=MAX_SIZE):
    lo = math.log2(min_size)
    hi = math.log2(max_size)
    size = int(round(2.0 ** rng.uniform(lo, hi)))
    size = min(max(size, min_size), max_size)
    return SortInstance(rng.permutation(size).astype(np.float64))


class CostModel:
    """Weighted reads/writes/comparisons counter."""

    def __init__(self, w_read=1.0, w_write=1.0, w_cmp=1.0):
        self.w_read = w_read
        self.w_write = w_write
        self.w_cmp = w_cmp
        self.reads = 0
        self.writes = 0
        self.comparisons = 0

    def cost(self):
        return (self.w_read * self.reads + self.w_write * self.writes
                + self.w_cmp * self.comparisons)


def _xlog2x(x):
    return 0.0 if x <= 0 else x * math.log2(x)


def delta_cost(c_piv, n, a, b):
    """Cost overhead of a partition step relative to an ideal median split,
    normalized by n*log2(n). Zero only for a free perfect split."""
    half = n / 2.0
    rec = _xlog2x(a) + _xlog2x(b) - 2.0 * _xlog2x(half)
    return (c_piv + rec) / (n * math.log2(n))


def pivot_feedback(d, eps=1e-6):
    return 1.0 / max(d, eps)


def sample_count_for_action(k, n):
    return min(1 + 2 * k, n)


def adaptive_sample_count(n):
    return min(max(1, int(math.log2(n)) - 1), n)


def partition_step(arr, l, r, n_samples, cm, rng):
    """Median-of-samples partition of arr[l:r); returns the pivot index.

    Sampling charges one read per sample plus s*ceil(log2 s) comparisons
    for the median; partitioning charges one read, one comparison and one
    write per element.
    """
    n = r - l
    seg = arr[l:r]
    s = min(n_samples, n)
    if s >= n:
        samples = seg
    else:
        samples = seg[rng.choice(n, size=s, replace=False)]
    cm.reads += s
    if s > 1:
        cm.comparisons += s * math.ceil(math.log2(s))
        pivot = np.partition(samples, (s - 1) // 2)[(s - 1) // 2]
    else:
        pivot = samples[0]
    less = seg[seg < pivot]
    greater = seg[seg > pivot]
    cm.reads += n
    cm.comparisons += n
    cm.writes += n
    n_less = less.shape[0]
    arr[l:l + n_less] = less
    arr[l + n_less] = pivot
    arr[l + n_less + 1:r] = greater
    return l + n_less


def qsort_fixed(arr, sample_count_fn, cm, rng):
    """Sort in place with a per-range sample-count rule; returns cost."""
    start = cm.cost()
    stack = [(0, len(arr))]
    while stack:
        l, r = stack.pop()
        if r - l < 2:
            continue
        m = partition_step(arr, l, r, sample_count_fn(r - l), cm, rng)
        stack.append((l, m))
        stack.append((m + 1, r))
    return cm.cost() - start


def qsort_with_choice(arr, choice, cm, rng, max_size=MAX_SIZE):
    """Sort in place, one Predict per partition step; returns cost."""
    start = cm.cost()
    stack = [(0, len(arr))]
    while stack:
        l, r = stack.pop()
        if r - l < 2:
            continue
        choice.observe_many({"left": l, "right": r})
        k = choice.predict()
        s = sample_count_for_action(k, r - l)
        before = cm.cost()
        m = partition_step(arr, l, r, s, cm, rng)
        c_piv = cm.cost() - before
        d = delta_cost(c_piv, r - l, m - l, r - m)
        choice.feedback(pivot_feedback(d))
        stack.append((l, m))
        stack.append((m + 1, r))
    choice.end_episode()
    return cm.cost() - start


def episode_cost(raw_cost, n):
    return raw_cost / (n * math.log2(n))


def make_qsort_choice(config, seed, max_size=MAX_SIZE):
    obs = [
        ObservationDef("left", "float", range=(0.0, float(max_size))),
        ObservationDef("right", "float", range=(0.0, float(max_size))),
    ]
    out = OutputDef("categorical", cardinality=N_SAMPLE_ACTIONS)
    # k=0 -> 1 sample = classic random-pivot QuickSort
    return SmartChoice(out, obs, initial_function=lambda state: 0,
                       config=config, seed=seed)


BASELINE_SAMPLERS = {
    "vanilla": lambda n: 1,
    "random3": lambda n: min(3, n),
    "random9": lambda n: min(9, n),
    "adaptive": adaptive_sample_count,
}


def run_baseline(name, instance, rng):
    arr = instance.array.copy()
    cm = CostModel()
    raw = qsort_fixed(arr, BASELINE_SAMPLERS[name], cm, rng)
    assert np.all(arr[:-1] <= arr[1:])
    return episode_cost(raw, len(arr))


BASELINES = {name: (lambda inst, rng, _n=name: run_baseline(_n, inst, rng))
             for name in BASELINE_SAMPLERS}

"""Binary search over sorted arrays drawn from mixed distributions.

The choice outputs q in [0, 1]. The "simple"/"shaped" variants place the
probe directly at int(q*l + (1-q)*r); the "mix" variant blends the vanilla
midpoint with the interpolation-search probe. Cost is probes / N so regret
magnitudes are comparable across episode counts.
"""

import numpy as np

from ..choice import ObservationDef, OutputDef, SmartChoice

DISTRIBUTIONS = ("uniform", "triangular", "normal", "pareto", "power",
                 "gamma", "chisquare")
VALUE_LO = -1e4
VALUE_HI = 1e4


class SearchInstance:
    __slots__ = ("array", "target", "distribution")

    def __init__(self, array, target, distribution):
        self.array = array
        self.target = target
        self.distribution = distribution


def make_search_instance(rng, n=5000):
    name = DISTRIBUTIONS[rng.integers(len(DISTRIBUTIONS))]
    if name == "uniform":
        raw = rng.random(n)
    elif name == "triangular":
        raw = rng.triangular(0.0, rng.random(), 1.0, n)
    elif name == "normal":
        raw = rng.normal(0.0, 1.0, n)
    elif name == "pareto":
        raw = np.minimum(rng.pareto(2.0, n), 20.0)  # clip heavy tail
    elif name == "power":
        raw = rng.power(rng.uniform(1.0, 5.0), n)
    elif name == "gamma":
        raw = np.minimum(rng.gamma(rng.uniform(1.0, 5.0), 1.0, n), 50.0)
    else:
        raw = np.minimum(rng.chisquare(rng.integers(1, 10), n), 50.0)
    lo, hi = raw.min(), raw.max()
    span = hi - lo if hi > lo else 1.0
    array = np.sort(VALUE_LO + (raw - lo) / span * (VALUE_HI - VALUE_LO))
    target = array[rng.integers(n)]
    return SearchInstance(array, float(target), name)


def mix_probe(q, left, right, a_left, a_right, x):
    """Blend vanilla midpoint with the interpolation-search probe."""
    l_v = 0.5 * (left + right)
    if a_right > a_left:
        l_i = ((a_right - x) * left + (x - a_left) * right) / (a_right - a_left)
    else:
        l_i = l_v  # interpolation undefined on a flat range
    m = int(np.floor(q * l_v + (1.0 - q) * l_i + 0.5))
    return min(max(m, left), right)


def shaped_reward(old_width, new_width):
    return old_width / max(new_width, 1)


def vanilla_probe(q, left, right):
    return int(q * left + (1.0 - q) * right)


def run_search(instance, probe_fn, on_step=None):
    """Generic driven search; probe_fn(l, r) -> probe index in [l, r].

    on_step(l, r, new_l, new_r, found) is called after every probe.
    Returns the number of probes.
    """
    a = instance.array
    x = instance.target
    l, r = 0, len(a) - 1
    steps = 0
    while True:
        m = probe_fn(l, r)
        m = min(max(m, l), r)
        steps += 1
        found = a[m] == x
        if found:
            new_l, new_r = l, r
        elif a[m] < x:
            new_l, new_r = m + 1, r
        else:
            new_l, new_r = l, m - 1
        if on_step is not None:
            on_step(l, r, new_l, new_r, found)
        if found:
            return steps
        l, r = new_l, new_r
        if l > r or steps > len(a):
            raise RuntimeError("search range exhausted without finding target")


def vanilla_bsearch(instance):
    return run_search(instance, lambda l, r: vanilla_probe(0.5, l, r))


def interpolation_bsearch(instance):
    a = instance.array
    x = instance.target
    return run_search(instance, lambda l, r: mix_probe(0.0, l, r, a[l], a[r], x))


def run_bsearch_episode(choice, instance, variant):
    """One search episode through the SmartChoice; returns probe count."""
    a = instance.array
    x = instance.target
    shaped = variant in ("shaped", "mix")

    def probe(l, r):
        choice.observe_many({"target": x, "low": a[l], "high": a[r]})
        q = choice.predict()
        if variant == "mix":
            return mix_probe(q, l, r, a[l], a[r], x)
        return vanilla_probe(q, l, r)

    def on_step(l, r, new_l, new_r, found):
        if found:
            return
        if shaped:
            choice.feedback(shaped_reward(r - l, new_r - new_l))
        else:
            choice.feedback(-1.0)

    steps = run_search(instance, probe, on_step)
    choice.end_episode()
    return steps


def episode_cost(steps, n):
    return steps / n


def make_bsearch_choice(variant, config, seed):
    obs = [
        ObservationDef("target", "float", range=(VALUE_LO, VALUE_HI)),
        ObservationDef("low", "float", range=(VALUE_LO, VALUE_HI)),
        ObservationDef("high", "float", range=(VALUE_LO, VALUE_HI)),
    ]
    out = OutputDef("continuous", shape=1, range=(0.0, 1.0))
    # q=0.5 reproduces vanilla probes for the direct variants; for "mix",
    # q=1 selects the pure vanilla heuristic
    initial_q = 1.0 if variant == "mix" else 0.5
    initial = (lambda state: initial_q)
    return SmartChoice(out, obs, initial_function=initial, config=config,
                       seed=seed)


BASELINES = {
    "vanilla": lambda instance, rng: vanilla_bsearch(instance),
    "interpolation": lambda instance, rng: interpolation_bsearch(instance),
}

"""Experiment runner: paired choice/baseline episodes over shared instances.

Every episode draws its instance from a per-episode seed split off the
master seed, runs the SmartChoice variant and each baseline on that same
instance, and records costs plus selector state. Synchronous mode with a
fixed master seed is bit-reproducible.
"""

import csv
from dataclasses import dataclass, field, fields

import numpy as np

from ..config import LearnerConfig
from ..errors import ConfigError
from ..envs import bsearch, cache, presets, qsort

USAGE_WINDOW = 100


@dataclass
class RunConfig:
    problem: str = "bsearch"
    variant: str = "mix"
    episodes: int = 100
    seed: int = 0
    baselines: tuple = None  # None = problem default
    array_size: int = 5000
    qsort_min_size: int = 16
    qsort_max_size: int = 1024
    alpha: float = 0.5
    trace_len: int = 1000
    capacity: int = 10
    scale: float = 1.0
    freq_window: int = 100
    fast: bool = True


PROBLEM_BASELINES = {
    "bsearch": ("vanilla",),
    "quicksort": ("adaptive",),
    "cache": ("lru",),
}


@dataclass
class EpisodeRecord:
    episode: int
    seed: int
    variant: str
    choice_cost: float
    baseline_costs: dict
    policy_tag: str
    p_learned: float
    usage_rate: float


@dataclass
class ExperimentResult:
    config: RunConfig
    records: list
    choice: object
    baselines: tuple

    def cum_regret(self, baseline):
        costs = np.array([r.choice_cost for r in self.records])
        base = np.array([r.baseline_costs[baseline] for r in self.records])
        return np.cumsum(costs - base)


def _episode_rng(seed, episode, stream=0):
    return np.random.default_rng([seed, episode, stream])


def run_experiment(run_cfg, learner_cfg=None, on_record=None):
    cfg = run_cfg
    if cfg.problem not in PROBLEM_BASELINES:
        raise ConfigError(f"unknown problem {cfg.problem!r}")
    baselines = cfg.baselines or PROBLEM_BASELINES[cfg.problem]
    lcfg = learner_cfg or presets.preset(cfg.problem, cfg.variant)

    if cfg.problem == "bsearch":
        if cfg.variant not in ("simple", "shaped", "mix"):
            raise ConfigError(f"unknown bsearch variant {cfg.variant!r}")
        unknown = set(baselines) - set(bsearch.BASELINES)
        if unknown:
            raise ConfigError(f"unknown baselines {sorted(unknown)}")
        choice = bsearch.make_bsearch_choice(cfg.variant, lcfg, cfg.seed)

        def episode(ep):
            inst = bsearch.make_search_instance(_episode_rng(cfg.seed, ep),
                                                cfg.array_size)
            cost = bsearch.episode_cost(
                bsearch.run_bsearch_episode(choice, inst, cfg.variant),
                cfg.array_size)
            base = {
                name: bsearch.episode_cost(
                    bsearch.BASELINES[name](inst, _episode_rng(cfg.seed, ep, j + 1)),
                    cfg.array_size)
                for j, name in enumerate(baselines)
            }
            return cost, base

    elif cfg.problem == "quicksort":
        if cfg.variant != "choice":
            raise ConfigError(f"unknown quicksort variant {cfg.variant!r}")
        unknown = set(baselines) - set(qsort.BASELINES)
        if unknown:
            raise ConfigError(f"unknown baselines {sorted(unknown)}")
        choice = qsort.make_qsort_choice(lcfg, cfg.seed, cfg.qsort_max_size)

        def episode(ep):
            rng = _episode_rng(cfg.seed, ep)
            inst = qsort.make_sort_instance(rng, cfg.qsort_min_size,
                                            cfg.qsort_max_size)
            arr = inst.array.copy()
            cm = qsort.CostModel()
            raw = qsort.qsort_with_choice(arr, choice, cm,
                                          _episode_rng(cfg.seed, ep, 1000))
            assert np.all(arr[:-1] <= arr[1:])
            cost = qsort.episode_cost(raw, len(inst.array))
            base = {
                name: qsort.BASELINES[name](inst, _episode_rng(cfg.seed, ep, j + 1))
                for j, name in enumerate(baselines)
            }
            return cost, base

    else:  # cache
        if cfg.variant not in ("discrete", "continuous_keys", "continuous_freq"):
            raise ConfigError(f"unknown cache variant {cfg.variant!r}")
        unknown = set(baselines) - set(cache.BASELINES)
        if unknown:
            raise ConfigError(f"unknown baselines {sorted(unknown)}")
        choice, cache_state = cache.make_cache_choice(
            cfg.variant, lcfg, cfg.seed, cfg.capacity)

        def episode(ep):
            trace = cache.make_trace(_episode_rng(cfg.seed, ep),
                                     cfg.trace_len, alpha=cfg.alpha)
            if cfg.variant == "discrete":
                cost = cache.run_discrete_episode(choice, trace, cache_state)
            else:
                cost = cache.run_continuous_episode(
                    choice, trace, cfg.variant, cfg.capacity, cfg.scale,
                    cfg.freq_window, fast=cfg.fast)
            base = {name: cache.BASELINES[name](trace, None)
                    for name in baselines}
            return cost, base

    records = []
    selector = choice.selector
    for ep in range(1, cfg.episodes + 1):
        cost, base = episode(ep)
        rec = EpisodeRecord(
            episode=ep, seed=cfg.seed, variant=cfg.variant,
            choice_cost=cost, baseline_costs=base,
            policy_tag=selector.history[-1] if selector.history else "learned",
            p_learned=selector.p_learned,
            usage_rate=selector.usage_rate(USAGE_WINDOW))
        records.append(rec)
        if on_record is not None:
            on_record(rec)
    return ExperimentResult(cfg, records, choice, tuple(baselines))


CSV_COLUMNS = ["episode", "seed", "variant", "choice_cost", "baseline",
               "baseline_cost", "regret", "cum_regret", "policy_tag",
               "p_learned", "usage_rate"]


def write_records_csv(path, result):
    """One row per (episode x baseline), exact column set CSV_COLUMNS."""
    cum = {name: 0.0 for name in result.baselines}
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for rec in result.records:
            for name in result.baselines:
                regret = rec.choice_cost - rec.baseline_costs[name]
                cum[name] += regret
                w.writerow([rec.episode, rec.seed, rec.variant,
                            repr(rec.choice_cost), name,
                            repr(rec.baseline_costs[name]), repr(regret),
                            repr(cum[name]), rec.policy_tag,
                            repr(rec.p_learned), repr(rec.usage_rate)])


def read_cum_regret_csv(path):
    """Per-baseline cumulative-regret series from a records CSV."""
    series = {}
    with open(path, newline="") as f:
        r = csv.DictReader(f)
        if r.fieldnames != CSV_COLUMNS:
            raise ConfigError(f"{path}: unexpected CSV columns")
        for row in r:
            series.setdefault(row["baseline"], []).append(
                float(row["cum_regret"]))
    return series

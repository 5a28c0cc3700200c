"""Regret metrics: cumulative regret, break-even, quantile tables."""

import math

import numpy as np

QUANTILES = (1, 5, 10, 25, 50, 75, 90, 95, 99)


def cumulative_regret(costs, baseline_costs):
    """Running sum of per-episode regret (choice cost minus baseline cost)."""
    costs = np.asarray(costs, dtype=np.float64)
    base = np.asarray(baseline_costs, dtype=np.float64)
    if costs.shape != base.shape:
        raise ValueError("costs and baseline_costs must have equal length")
    return np.cumsum(costs - base)


def break_even(series):
    """Smallest 1-based episode e with series[j] < 0 for all j >= e, or None.

    This is the point after which cumulative regret stays negative forever.
    """
    series = np.asarray(series, dtype=np.float64)
    n = len(series)
    if n == 0 or series[-1] >= 0:
        return None
    nonneg = np.nonzero(series >= 0)[0]
    last = -1 if len(nonneg) == 0 else int(nonneg[-1])
    return last + 2  # episodes are 1-based


def nearest_rank(values, q):
    """Nearest-rank quantile (q in percent) of a sequence; inf-safe."""
    vals = sorted(values)
    if not vals:
        raise ValueError("no values")
    rank = max(1, math.ceil(q / 100.0 * len(vals)))
    return vals[rank - 1]


def quantile_report(runs, checkpoints, quantiles=QUANTILES):
    """Table 2-style report over a set of runs.

    runs: list of cumulative-regret series (one per run).
    Returns a list of row dicts: one per checkpoint episode with the
    requested quantiles and the mean of cumulative regret, plus one
    break-even row whose "mean" is the fraction of runs that reach
    break-even (unreached runs count as infinity in the quantiles).
    """
    if not runs:
        raise ValueError("need at least one run")
    rows = []
    for ck in checkpoints:
        vals = []
        for series in runs:
            if ck < 1 or ck > len(series):
                raise ValueError(f"checkpoint {ck} outside run length")
            vals.append(float(series[ck - 1]))
        row = {"metric": f"cum_regret@{ck}"}
        for q in quantiles:
            row[f"q{q}"] = nearest_rank(vals, q)
        row["mean"] = float(np.mean(vals))
        rows.append(row)
    bes = [break_even(series) for series in runs]
    be_vals = [math.inf if b is None else float(b) for b in bes]
    row = {"metric": "break_even"}
    for q in quantiles:
        row[f"q{q}"] = nearest_rank(be_vals, q)
    row["mean"] = sum(1 for b in bes if b is not None) / len(bes)
    rows.append(row)
    return rows

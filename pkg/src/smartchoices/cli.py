"""Command line interface.

    smartchoices run --problem bsearch --variant mix --episodes 500 \
        --seed 0 --out run.csv [--config overrides.cfg]
    smartchoices report --inputs run_*.csv --checkpoints 100,500 \
        --out report.csv

`run` executes one experiment (learned choice plus paired baselines on the
same instances) and writes one CSV row per episode and baseline. `report`
aggregates several run CSVs into quantile tables of cumulative regret at
the given checkpoints plus a break-even row.
"""

import argparse
import csv
import sys

from .envs import presets
from .errors import ConfigError
from .harness import fileconfig, metrics, runner


def _cmd_run(args):
    run_cfg = runner.RunConfig(problem=args.problem, variant=args.variant,
                               episodes=args.episodes, seed=args.seed)
    learner_cfg = presets.preset(args.problem, args.variant)
    if args.config:
        run_over, learn_over = fileconfig.load_config(args.config)
        run_cfg, learner_cfg = fileconfig.apply_config(
            run_cfg, learner_cfg, run_over, learn_over)
    result = runner.run_experiment(run_cfg, learner_cfg)
    runner.write_records_csv(args.out, result)
    for name in result.baselines:
        cum = result.cum_regret(name)
        be = metrics.break_even(cum)
        print(f"{args.problem}/{args.variant} vs {name}: "
              f"final cum_regret {cum[-1]:.4f}, "
              f"break_even {be if be is not None else 'not reached'}")
    return 0


def _cmd_report(args):
    checkpoints = [int(c) for c in args.checkpoints.split(",") if c.strip()]
    by_baseline = {}
    for path in args.inputs:
        for name, series in runner.read_cum_regret_csv(path).items():
            by_baseline.setdefault(name, []).append(series)
    if not by_baseline:
        raise ConfigError("no input runs")
    qcols = [f"q{q}" for q in metrics.QUANTILES]
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["baseline", "metric"] + qcols + ["mean"])
        for name in sorted(by_baseline):
            rows = metrics.quantile_report(by_baseline[name], checkpoints)
            for row in rows:
                w.writerow([name, row["metric"]]
                           + [row[c] for c in qcols] + [row["mean"]])
    print(f"wrote {args.out} ({len(by_baseline)} baselines, "
          f"{sum(len(v) for v in by_baseline.values())} runs)")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="smartchoices",
                                description="Learned algorithmic choices: "
                                "experiment runner and regret reports.")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("run", help="run one experiment and write a CSV")
    pr.add_argument("--problem", required=True,
                    choices=["bsearch", "quicksort", "cache"])
    pr.add_argument("--variant", required=True,
                    help="bsearch: simple|shaped|mix; quicksort: choice; "
                    "cache: discrete|continuous_keys|continuous_freq")
    pr.add_argument("--episodes", type=int, default=500)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--config", default=None,
                    help="key=value override file (run or learner settings)")
    pr.add_argument("--out", required=True, help="output CSV path")
    pr.set_defaults(func=_cmd_run)

    pp = sub.add_parser("report",
                        help="aggregate run CSVs into a quantile table")
    pp.add_argument("--inputs", nargs="+", required=True,
                    help="run CSVs produced by the run command")
    pp.add_argument("--checkpoints", required=True,
                    help="comma-separated episode checkpoints, e.g. 100,500")
    pp.add_argument("--out", required=True, help="output CSV path")
    pp.set_defaults(func=_cmd_report)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

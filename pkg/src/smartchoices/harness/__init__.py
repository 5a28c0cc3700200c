from .metrics import (QUANTILES, break_even, cumulative_regret, nearest_rank,
                      quantile_report)
from .runner import (CSV_COLUMNS, EpisodeRecord, ExperimentResult, RunConfig,
                     read_cum_regret_csv, run_experiment, write_records_csv)
from .fileconfig import apply_config, load_config, parse_config_text

__all__ = [
    "QUANTILES", "break_even", "cumulative_regret", "nearest_rank",
    "quantile_report", "CSV_COLUMNS", "EpisodeRecord", "ExperimentResult",
    "RunConfig", "read_cum_regret_csv", "run_experiment",
    "write_records_csv", "apply_config", "load_config", "parse_config_text",
]

from .config import ExperimentConfig, MethodConfig, config_from_dict, load_config
from .runner import (CSV_COLUMNS, ResultRow, rows_from_csv, rows_to_csv, run,
                     summarize, summary_table)
from .verify import verify_counterexample_family, verify_low_varsortability_family, verify_constructions

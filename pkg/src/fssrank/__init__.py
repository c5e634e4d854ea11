"""Research productivity (Fractional Scientific Strength) of individual
researchers and its territory x field rankings."""

__version__ = "0.1.0"

from .citations import CitationBaseline, compute_baselines, scaled_citation  # noqa: E402
from .ingest import Config, DatasetPaths, load_config, load_dataset, write_dataset  # noqa: E402
from .model import Dataset, WeightingScheme  # noqa: E402
from .productivity import ScoreSet, score_dataset  # noqa: E402
from .ranking import competition_ranks, national_percentile, spearman_rho  # noqa: E402
from .territorial import Granularity, Level, TerritorialAnalytics  # noqa: E402
from .weights import DEFAULT_WEIGHTS, WeightTable, fractional_weights  # noqa: E402

__all__ = [
    "CitationBaseline",
    "Config",
    "DEFAULT_WEIGHTS",
    "Dataset",
    "DatasetPaths",
    "Granularity",
    "Level",
    "ScoreSet",
    "TerritorialAnalytics",
    "WeightTable",
    "WeightingScheme",
    "competition_ranks",
    "compute_baselines",
    "fractional_weights",
    "load_config",
    "load_dataset",
    "national_percentile",
    "scaled_citation",
    "score_dataset",
    "spearman_rho",
    "write_dataset",
]

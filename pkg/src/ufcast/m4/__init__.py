"""M4 benchmark harness: data ingestion, model registry, experiment
runner, published-result comparison, and significance reporting."""

from .datasets import DATASETS, DatasetSpec, load_m4
from .published import (
    compare_aggregate,
    default_published_path,
    load_published,
)
from .registry import KNOWN_MODELS, WINDOW_GRID, build_model
from .reports import render_cd_svg, stats_report
from .runner import RunManifest, read_results, run

__all__ = [
    "DATASETS",
    "DatasetSpec",
    "load_m4",
    "KNOWN_MODELS",
    "WINDOW_GRID",
    "build_model",
    "RunManifest",
    "run",
    "read_results",
    "load_published",
    "default_published_path",
    "compare_aggregate",
    "stats_report",
    "render_cd_svg",
]

"""Composable univariate time-series forecasting.

Simple forecasters and meta-forecasters (reduction to regression,
detrending, pipelining, ensembling, tuning) share one fit / predict /
update contract, with accuracy metrics, significance tests, and an M4
benchmark harness (`ufcast.m4`, CLI entry point ``ufcast-m4``) on top.
"""

from .core import (
    BaseForecaster,
    Forecast,
    ForecastingHorizon,
    TimeSeries,
    as_horizon,
    as_series,
)
from .forecasters import (
    HoltForecaster,
    NaiveForecaster,
    PolynomialTrendForecaster,
    SESForecaster,
    ThetaForecaster,
)
from .transforms import (
    BoxCoxTransformer,
    Deseasonalizer,
    Detrender,
    SeasonalIndices,
    Standardizer,
    classical_decompose,
    seasonality_test,
)
from .regress import KNNRegressor, LinearRegressor
from .compose import (
    EnsembleForecaster,
    LaggedTable,
    ReducedRegressionForecaster,
    TransformedTargetForecaster,
    tabularize,
)
from .select import ForecastingGridSearch, SlidingWindowSplitter
from .evaluation import (
    EvalRecord,
    RankMatrix,
    critical_difference_report,
    friedman_test,
    holm_adjust,
    mase,
    mean_ranks,
    nemenyi_critical_difference,
    nemenyi_groups,
    owa,
    paired_t_test,
    rank_models,
    smape,
    wilcoxon_signed_rank,
)
from . import exceptions

__version__ = "0.1.0"

__all__ = [
    "TimeSeries",
    "ForecastingHorizon",
    "Forecast",
    "as_series",
    "as_horizon",
    "BaseForecaster",
    "NaiveForecaster",
    "SESForecaster",
    "HoltForecaster",
    "ThetaForecaster",
    "PolynomialTrendForecaster",
    "seasonality_test",
    "classical_decompose",
    "SeasonalIndices",
    "Deseasonalizer",
    "BoxCoxTransformer",
    "Standardizer",
    "Detrender",
    "LinearRegressor",
    "KNNRegressor",
    "LaggedTable",
    "tabularize",
    "ReducedRegressionForecaster",
    "TransformedTargetForecaster",
    "EnsembleForecaster",
    "SlidingWindowSplitter",
    "ForecastingGridSearch",
    "smape",
    "mase",
    "owa",
    "EvalRecord",
    "RankMatrix",
    "rank_models",
    "mean_ranks",
    "paired_t_test",
    "friedman_test",
    "nemenyi_critical_difference",
    "nemenyi_groups",
    "critical_difference_report",
    "wilcoxon_signed_rank",
    "holm_adjust",
    "exceptions",
]

"""Composite models: pipelines, detrending, reduction, ensembles, boosting.

Meta-forecasters are forecasters themselves, so anything built here
supports the same fit / predict / update interface and can be nested
further.
"""

import numpy as np

from ufcast import (
    Deseasonalizer,
    Detrender,
    EnsembleForecaster,
    ForecastingHorizon,
    HoltForecaster,
    KNNRegressor,
    LinearRegressor,
    NaiveForecaster,
    PolynomialTrendForecaster,
    ReducedRegressionForecaster,
    SESForecaster,
    Standardizer,
    ThetaForecaster,
    TimeSeries,
    TransformedTargetForecaster,
)

rng = np.random.default_rng(1)
t = np.arange(144)
seasonal = 1 + 0.25 * np.sin(2 * np.pi * t / 12)
y = TimeSeries((30 + 0.2 * t) * seasonal * np.exp(rng.normal(0, 0.02, t.size)),
               sp=12)
fh = ForecastingHorizon.out_to(12)

# --- pipeline: seasonal adjustment in front of any forecaster ----------
# The deseasonalizer tests for seasonality first (autocorrelation test at
# the 90% level) and only divides by decomposition indices if it passes;
# forecasts are re-seasonalised on the way out.
naive2 = TransformedTargetForecaster([
    ("deseasonalize", Deseasonalizer()),
    ("forecast", NaiveForecaster("last")),
]).fit(y)
print("seasonally adjusted naive:", np.round(naive2.predict(fh).values[:6], 2))

# --- detrending as a transformer ---------------------------------------
detrender = Detrender(PolynomialTrendForecaster(degree=1)).fit(y)
residuals = detrender.transform(y)
print(f"\nlinear detrending: residual mean {residuals.values.mean():+.3f} "
      f"(raw mean {y.values.mean():.1f})")

# --- reduction to tabular regression ------------------------------------
# Sliding windows of the series become regression rows; multi-step
# forecasts come from the recursive strategy (each prediction feeds the
# next window).  Any regressor with fit(X, y)/predict(X) plugs in.
reduced = TransformedTargetForecaster([
    ("deseasonalize", Deseasonalizer()),
    ("detrend", Detrender(PolynomialTrendForecaster(degree=1))),
    ("standardize", Standardizer()),
    ("forecast", ReducedRegressionForecaster(LinearRegressor(),
                                             window_length=12)),
]).fit(y)
print("\nreduction pipeline (deseasonalize -> detrend -> standardize -> "
      "regress):")
print("  ", np.round(reduced.predict(fh).values[:6], 2))

knn_version = reduced.clone()
knn_version.set_params(**{"forecast.regressor": KNNRegressor(k=1)})
knn_version.fit(y)
print("  same pipeline, nearest-neighbour regressor:")
print("  ", np.round(knn_version.predict(fh).values[:6], 2))

# --- ensembling ----------------------------------------------------------
combo = EnsembleForecaster([
    ("ses", SESForecaster()),
    ("holt", HoltForecaster()),
    ("damped", HoltForecaster(damped=True)),
]).fit(y)
print("\nmean ensemble of three smoothers:",
      np.round(combo.predict(fh).values[:6], 2))

# --- residual boosting ---------------------------------------------------
# A fitted forecaster can act as the trend inside a Detrender, so
# "model A + regression on A's residuals" is just another pipeline.
base = TransformedTargetForecaster([
    ("deseasonalize", Deseasonalizer()),
    ("forecast", ThetaForecaster()),
])
boosted = TransformedTargetForecaster([
    ("detrend", Detrender(base)),
    ("standardize", Standardizer()),
    ("forecast", ReducedRegressionForecaster(KNNRegressor(k=1),
                                             window_length=12)),
]).fit(y)
print("theta boosted by residual regression:",
      np.round(boosted.predict(fh).values[:6], 2))

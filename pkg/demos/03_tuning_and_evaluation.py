"""Temporal cross-validation, grid-search tuning, and accuracy metrics.

Splits respect time: validation indices always follow their training
window, and tuning never sees the future.
"""

import numpy as np

from ufcast import (
    ForecastingGridSearch,
    KNNRegressor,
    NaiveForecaster,
    ReducedRegressionForecaster,
    SlidingWindowSplitter,
    TimeSeries,
    mase,
    owa,
    smape,
    EvalRecord,
)

rng = np.random.default_rng(2)
t = np.arange(160)
y = TimeSeries((25 + 0.1 * t) * (1 + 0.3 * np.sin(2 * np.pi * t / 8))
               * np.exp(rng.normal(0, 0.03, t.size)), sp=8)

# --- splitters -----------------------------------------------------------
cv = SlidingWindowSplitter(window_length=24, fh=[1, 2, 3, 4], step_length=24)
print("sliding windows over", len(y), "points:")
for train, test in cv.split(y):
    print(f"  train [{train[0]:3d}..{train[-1]:3d}] -> validate {test.tolist()}")

single = SlidingWindowSplitter(window_length=1, fh=list(range(1, 9)),
                               mode="single")
[(train, test)] = list(single.split(y))
print(f"single split: train up to {train[-1]}, validate {test[0]}..{test[-1]}")

# --- grid search ---------------------------------------------------------
# Candidates are scored with sMAPE on each validation window (mean over
# splits); the winner is refitted on the full series.  Dotted paths reach
# nested components.
search = ForecastingGridSearch(
    ReducedRegressionForecaster(KNNRegressor(k=1), window_length=4),
    {"window_length": [4, 8, 12, 16], "regressor.k": [1, 2, 4]},
    SlidingWindowSplitter(window_length=96, fh=list(range(1, 9)),
                          mode="single"),
)
search.fit(y)
print(f"\nbest parameters {search.best_params_} "
      f"(validation sMAPE {search.best_score_:.3f})")
print("every candidate:")
for row in search.report_[:6]:
    print(f"  {row['params']}  ->  {row['mean_score']:.3f}")
print("  ...")

# --- rolling evaluation with update_predict ------------------------------
holdout = TimeSeries(
    (25 + 0.1 * np.arange(160, 184)) * (1 + 0.3 * np.sin(2 * np.pi * np.arange(160, 184) / 8)),
    start_index=160, sp=8,
)
model = NaiveForecaster("seasonal_last").fit(y)
walk = model.update_predict(
    holdout, SlidingWindowSplitter(window_length=1, fh=1, mode="expanding")
)
errors = [abs(fc.values[0] - holdout.values[i + 1])
          for i, (_, fc) in enumerate(walk[:-1])]
print(f"\nrolling one-step seasonal-naive: {len(walk)} forecasts, "
      f"mean abs error {np.mean(errors):.2f}")

# --- metrics --------------------------------------------------------------
actual = holdout.values[:8]
pred = search.predict(list(range(1, 9))).values
print("\naccuracy of the tuned model on the first 8 holdout points:")
print(f"  sMAPE {smape(actual, pred):6.3f}   "
      f"MASE {mase(actual, pred, y.values, sp=8):6.3f}")

# OWA aggregates sMAPE and MASE ratios against a reference model over a
# collection of series; the reference against itself is exactly 1.
ref = [EvalRecord(f"s{i}", "ref", smape=10.0 + i, mase=1.0) for i in range(5)]
mine = [EvalRecord(f"s{i}", "mine", smape=5.0 + i, mase=0.8) for i in range(5)]
print(f"  OWA vs reference {owa(mine, ref):.3f} "
      f"(reference vs itself: {owa(ref, ref):.1f})")

"""Forecasting basics: the fit / predict / update contract.

Every forecaster works the same way: construct with hyper-parameters,
fit on a series, ask for predictions at horizon steps relative to the
end of the training data (the "cutoff"), and feed new observations in
with update.  Run me with `python demos/01_forecasting_basics.py`.
"""

import numpy as np

from ufcast import (
    ForecastingHorizon,
    HoltForecaster,
    NaiveForecaster,
    PolynomialTrendForecaster,
    SESForecaster,
    ThetaForecaster,
    TimeSeries,
)

rng = np.random.default_rng(0)

# A noisy upward-trending series. sp=12 marks monthly-style periodicity;
# the simple forecasters here ignore it, the seasonal ones use it.
t = np.arange(96)
y = TimeSeries(20 + 0.4 * t + rng.normal(0, 1.5, t.size), sp=12)
print(f"training series: {len(y)} points, cutoff at position {y.end_index}")

# --- the basic loop ---------------------------------------------------
forecaster = SESForecaster()
forecaster.fit(y)
fh = ForecastingHorizon.out_to(6)        # steps 1..6 past the cutoff
forecast = forecaster.predict(fh)
print("\nSES six-step forecast:", np.round(forecast.values, 2))
print("fitted parameters:", {k: round(v, 4)
                             for k, v in forecaster.get_fitted_params().items()})

# Horizons are relative, so in-sample predictions are negative steps.
in_sample = forecaster.predict([-3, -2, -1])
print("one-step in-sample predictions for the last three points:",
      np.round(in_sample.values, 2))

# --- a few different models, same interface ---------------------------
models = {
    "naive (repeat last)": NaiveForecaster("last"),
    "seasonal naive": NaiveForecaster("seasonal_last"),
    "Holt linear trend": HoltForecaster(),
    "damped trend": HoltForecaster(damped=True),
    "theta (two-line)": ThetaForecaster(),
    "linear trend OLS": PolynomialTrendForecaster(degree=1),
}
print("\nstep-1 and step-6 forecasts:")
for name, model in models.items():
    out = model.fit(y).predict([1, 6]).values
    print(f"  {name:<22} {out[0]:8.2f} {out[1]:8.2f}")

# --- updating with new data -------------------------------------------
# update() advances the cutoff; with update_params=False (the default)
# only the cheap prediction state moves, nothing is re-estimated.
new_points = 20 + 0.4 * np.arange(96, 102) + rng.normal(0, 1.5, 6)
forecaster.update(new_points)
print(f"\nafter update: cutoff moved to {forecaster.cutoff}, "
      f"new one-step forecast {forecaster.predict(1).values[0]:.2f}")

# update_params=True refits on the concatenated history instead.
forecaster.update((), update_params=False)   # empty update is a no-op
print("empty update keeps forecasts identical:",
      forecaster.predict(1).values[0].round(4))

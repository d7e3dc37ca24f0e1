"""Meta-forecasters: reduction to tabular regression, transformed-target
pipelines, and mean ensembles.

Reduction turns the training series into a table of sliding windows
(features ordered oldest to newest) and forecasts recursively: each
one-step prediction is appended to the window to produce the next.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import BaseForecaster, TimeSeries, as_series
from .exceptions import (
    SeriesTooShortError,
    UnimplementedStrategyError,
    UnsupportedInSampleError,
)

__all__ = [
    "LaggedTable",
    "tabularize",
    "ReducedRegressionForecaster",
    "TransformedTargetForecaster",
    "EnsembleForecaster",
]


@dataclass(frozen=True)
class LaggedTable:
    """Design matrix of lagged windows plus one-step targets.

    Row ``i`` is ``(y_i, ..., y_{i+w-1})`` (oldest first) with target
    ``y_{i+w}``; there are ``T - w`` rows.
    """

    X: np.ndarray
    targets: np.ndarray
    window_length: int


def tabularize(y, window_length: int) -> LaggedTable:
    """Stack sliding windows of a series into a regression table."""
    y = as_series(y)
    w = int(window_length)
    if w < 1:
        raise ValueError("window_length must be >= 1")
    if len(y) < w + 1:
        raise SeriesTooShortError(w + 1, len(y), "tabularization")
    X = sliding_window_view(y.values, w)[:-1].copy()
    targets = y.values[w:].copy()
    return LaggedTable(X=X, targets=targets, window_length=w)


_STRATEGIES = ("recursive", "direct", "hybrid")


class ReducedRegressionForecaster(BaseForecaster):
    """Forecasting via reduction to tabular regression.

    Fits the regressor on the lagged-window table and generates multi-step
    forecasts with the recursive strategy: the last window is fed to the
    regressor, the prediction appended, and the window slid forward.  The
    ``direct`` and ``hybrid`` strategy names are reserved but not
    implemented.  In-sample predictions exist from position
    ``window_length`` onwards (earlier points have no full window).
    """

    def __init__(self, regressor, window_length: int = 10,
                 strategy: str = "recursive"):
        if strategy not in _STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        self.regressor = regressor
        self.window_length = window_length
        self.strategy = strategy
        super().__init__()

    def _children(self):
        return {"regressor": self.regressor}

    def _required_length(self, y):
        return self.window_length + 1

    def _fit(self, y, fh):
        if self.strategy != "recursive":
            raise UnimplementedStrategyError(
                f"strategy {self.strategy!r} is not implemented"
            )
        table = tabularize(y, self.window_length)
        self.regressor.fit(table.X, table.targets)
        self.n_windows_ = table.targets.size

    def _predict_at_positions(self, positions):
        positions = np.asarray(positions)
        out = np.empty(positions.size, dtype=float)
        oos = positions > self._y.end_index
        if np.any(oos):
            steps = positions[oos] - self._y.end_index
            out[oos] = self._recursive(int(steps.max()))[steps - 1]
        if np.any(~oos):
            out[~oos] = self._insample(positions[~oos])
        return out

    def _recursive(self, n_steps: int) -> np.ndarray:
        w = self.window_length
        window = self._y.values[-w:].astype(float).copy()
        preds = np.empty(n_steps)
        for k in range(n_steps):
            preds[k] = float(self.regressor.predict(window[None, :])[0])
            window[:-1] = window[1:]
            window[-1] = preds[k]
        return preds

    def _insample(self, positions) -> np.ndarray:
        w = self.window_length
        rel = positions - self._y.start_index
        if np.any(rel < w):
            raise UnsupportedInSampleError(
                f"first {w} in-sample positions have no full window"
            )
        rows = np.stack([self._y.values[i - w:i] for i in rel])
        return np.asarray(self.regressor.predict(rows), dtype=float)

    def _get_fitted_params(self):
        return {"n_windows": self.n_windows_}


def _named_steps(estimators, kind: str):
    """Normalise a list of estimators / (name, estimator) pairs."""
    named = []
    seen = {}
    for item in estimators:
        if isinstance(item, tuple):
            name, est = item
        else:
            est = item
            name = type(est).__name__.lower()
            seen[name] = seen.get(name, 0) + 1
            if seen[name] > 1:
                name = f"{name}_{seen[name]}"
        if name in dict(named):
            raise ValueError(f"duplicate {kind} name {name!r}")
        named.append((name, est))
    return named


class TransformedTargetForecaster(BaseForecaster):
    """Chain of transformers ending in a forecaster.

    Fitting folds the series through the transformers (fit, then
    transform) before fitting the final forecaster; predictions run the
    inverse transformations in reverse order at the forecast positions.
    Transformers other than position-aware ones never see the horizon.

    Steps may be given as estimators or (name, estimator) pairs; names are
    the path components for nested parameter access, e.g.
    ``set_params(**{"forecast.window_length": 6})``.
    """

    def __init__(self, steps):
        if not steps:
            raise ValueError("pipeline needs at least one step")
        self.steps = _named_steps(steps, "step")
        name, final = self.steps[-1]
        if not hasattr(final, "predict"):
            raise ValueError(f"final step {name!r} is not a forecaster")
        for name, step in self.steps[:-1]:
            if not hasattr(step, "transform_at"):
                raise ValueError(f"step {name!r} is not a transformer")
        super().__init__()

    def _children(self):
        return dict(self.steps)

    @property
    def _transformers(self):
        return self.steps[:-1]

    @property
    def _final(self):
        return self.steps[-1][1]

    def _fit(self, y, fh):
        current = y
        for _, transformer in self._transformers:
            transformer.fit(current)
            current = transformer.transform(current)
        self._final.fit(current, fh=fh)

    def _predict_at_positions(self, positions):
        values = self._final._predict_at_positions(positions)
        for _, transformer in reversed(self._transformers):
            values = transformer.inverse_at(values, positions)
        return values

    def _update_state(self, y_new):
        current = y_new
        for _, transformer in self._transformers:
            current = transformer.transform(current)
        self._final.update(current, update_params=False)

    def _get_fitted_params(self):
        out = {}
        for name, step in self.steps:
            getter = getattr(step, "get_fitted_params", None)
            if getter is None:
                continue
            for key, value in getter().items():
                out[f"{name}.{key}"] = value
        return out


class EnsembleForecaster(BaseForecaster):
    """Unweighted mean of independently fitted component forecasters.

    Components may run and fail independently; any component error fails
    the ensemble.  The pointwise mean is computed over sorted component
    values so predictions are exactly invariant to component order.
    """

    def __init__(self, forecasters):
        if not forecasters:
            raise ValueError("ensemble needs at least one component")
        self.forecasters = _named_steps(forecasters, "component")
        super().__init__()

    def _children(self):
        return dict(self.forecasters)

    def _fit(self, y, fh):
        for _, forecaster in self.forecasters:
            forecaster.fit(y, fh=fh)

    def _predict_at_positions(self, positions):
        stacked = np.stack([
            f._predict_at_positions(positions) for _, f in self.forecasters
        ])
        return np.sort(stacked, axis=0).mean(axis=0)

    def _update_state(self, y_new):
        for _, forecaster in self.forecasters:
            forecaster.update(y_new, update_params=False)

    def _get_fitted_params(self):
        out = {}
        for name, forecaster in self.forecasters:
            for key, value in forecaster.get_fitted_params().items():
                out[f"{name}.{key}"] = value
        return out

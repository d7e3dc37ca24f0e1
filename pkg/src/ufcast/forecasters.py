"""Reference forecasting algorithms: naive family, exponential smoothing
family (simple / trend / damped trend), the two-line theta method, and
polynomial trend.

Smoothing parameters are estimated by minimising the in-sample one-step
sum of squared errors: a coarse deterministic grid over the smoothing
coefficients (0.01 to 0.99, step 0.02) seeds a Nelder-Mead refinement that
also adjusts the initial states.  Everything is deterministic.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize

from .core import BaseForecaster, ForecastingHorizon, TimeSeries
from .exceptions import (
    OptimizerFailedError,
    SeriesTooShortError,
    UnsupportedInSampleError,
)

__all__ = [
    "NaiveForecaster",
    "SESForecaster",
    "HoltForecaster",
    "ThetaForecaster",
    "PolynomialTrendForecaster",
]

_SMOOTHING_GRID = np.linspace(0.01, 0.99, 50)


# ---------------------------------------------------------------------------
# naive family
# ---------------------------------------------------------------------------

class NaiveForecaster(BaseForecaster):
    """Repeat the last observation, or the last observed season.

    Parameters
    ----------
    strategy : {"last", "seasonal_last"}
    sp : int, optional
        Seasonal periodicity for ``seasonal_last``; taken from the series
        when not given.
    """

    def __init__(self, strategy: str = "last", sp: int | None = None):
        if strategy not in ("last", "seasonal_last"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.strategy = strategy
        self.sp = sp
        super().__init__()

    def _effective_sp(self, y: TimeSeries) -> int:
        return self.sp if self.sp is not None else y.sp

    def _required_length(self, y: TimeSeries) -> int:
        return self._effective_sp(y) if self.strategy == "seasonal_last" else 1

    def _fit(self, y, fh):
        self._sp_ = self._effective_sp(y)

    def _predict_at_positions(self, positions):
        y = self._y
        lag = self._sp_ if self.strategy == "seasonal_last" else 1
        out = np.empty(positions.size, dtype=float)
        for i, pos in enumerate(positions):
            if pos > y.end_index:
                h = pos - y.end_index
                # repeat the final lag-length block of observations
                rel = len(y) - lag + (h - 1) % lag
            else:
                rel = pos - lag - y.start_index
                if rel < 0:
                    raise UnsupportedInSampleError(
                        f"no observation {lag} steps before position {pos}"
                    )
            out[i] = y.values[rel]
        return out

    def _get_fitted_params(self):
        if self.strategy == "seasonal_last":
            return {"last_season": self._y.values[-self._sp_:].copy()}
        return {"last": float(self._y.values[-1])}


# ---------------------------------------------------------------------------
# exponential smoothing machinery
# ---------------------------------------------------------------------------

def _ses_sse_grid(values, alphas, l0s):
    """One-step SSE of the level recursion, vectorised over candidates."""
    level = np.broadcast_to(l0s, alphas.shape).astype(float).copy()
    sse = np.zeros_like(level)
    with np.errstate(over="ignore", invalid="ignore"):
        for x in values:
            e = x - level
            sse += e * e
            level += alphas * e
    return sse, level


def _ses_sse_scalar(values, alpha, l0):
    """Scalar twin of the grid recursion (Python floats: optimiser-hot path)."""
    level = l0
    sse = 0.0
    for x in values:
        e = x - level
        sse += e * e
        level += alpha * e
    return sse


def _refine(objective, x0, seed_sse):
    """Deterministic Nelder-Mead from the best grid point.

    Convergence thresholds are relative to the seed objective; the result
    is only accepted when it beats the seed.
    """
    res = optimize.minimize(
        objective, np.asarray(x0, dtype=float), method="Nelder-Mead",
        options={"xatol": 1e-7, "fatol": 1e-10 * (1.0 + abs(seed_sse))},
    )
    if np.isfinite(res.fun) and res.fun < seed_sse:
        return np.asarray(res.x), float(res.fun)
    return np.asarray(x0, dtype=float), float(seed_sse)


def _ses_fit(values, alpha=None):
    """Fit level smoothing; returns (alpha, l0, sse).

    With ``alpha`` given the initial level is the first observation and no
    optimisation happens.  Otherwise a grid over alpha (initial level fixed
    at the first observation) seeds Nelder-Mead over (alpha, l0), with the
    level coordinate scaled to the data so tolerances bite on both axes.
    """
    y0 = float(values[0])
    if alpha is not None:
        sse, _ = _ses_sse_grid(values, np.array([float(alpha)]), y0)
        return float(alpha), y0, float(sse[0])

    sse_grid, _ = _ses_sse_grid(values, _SMOOTHING_GRID, y0)
    sse_grid = np.where(np.isfinite(sse_grid), sse_grid, np.inf)
    if not np.any(np.isfinite(sse_grid)):
        raise OptimizerFailedError("no finite SSE on the alpha grid")
    best = int(np.argmin(sse_grid))

    data = values.tolist()
    scale = max(1.0, abs(float(np.mean(values))))

    def objective(x):
        a, l0_scaled = x
        if not 0.0 <= a <= 1.0:
            return np.inf
        s = _ses_sse_scalar(data, a, l0_scaled * scale)
        return s if np.isfinite(s) else np.inf

    x, sse = _refine(objective, [_SMOOTHING_GRID[best], y0 / scale],
                     float(sse_grid[best]))
    return float(np.clip(x[0], 0.0, 1.0)), float(x[1] * scale), sse


def _ses_levels(values, alpha, l0):
    """Level path; levels[t] is the level after consuming values[t]."""
    levels = np.empty(values.size, dtype=float)
    level = l0
    for t, x in enumerate(values):
        level += alpha * (x - level)
        levels[t] = level
    return levels


class SESForecaster(BaseForecaster):
    """Simple exponential smoothing with flat extrapolation.

    ``alpha=None`` (default) estimates the smoothing coefficient and the
    initial level by SSE minimisation; a fixed ``alpha`` runs the plain
    recursion seeded with the first observation.
    """

    def __init__(self, alpha: float | None = None):
        self.alpha = alpha
        super().__init__()

    def _required_length(self, y):
        return 2 if self.alpha is None else 1

    def _fit(self, y, fh):
        self.alpha_, self.initial_level_, self.sse_ = _ses_fit(y.values, self.alpha)
        self._levels = _ses_levels(y.values, self.alpha_, self.initial_level_)

    def _predict_at_positions(self, positions):
        return _smoothing_insample_mix(
            positions, self._y,
            lambda h: np.full(h.size, self._levels[-1]),
            self._insample_fitted,
        )

    def _insample_fitted(self, rel):
        # one-step prediction of values[rel] is the level before it
        prior = np.concatenate([[self.initial_level_], self._levels[:-1]])
        return prior[rel]

    def _update_state(self, y_new):
        extension = _ses_levels(y_new.values, self.alpha_, self._levels[-1])
        self._levels = np.concatenate([self._levels, extension])

    def _get_fitted_params(self):
        return {
            "alpha": self.alpha_,
            "initial_level": self.initial_level_,
            "level": float(self._levels[-1]),
            "sse": self.sse_,
        }


def _smoothing_insample_mix(positions, y, out_of_sample, in_sample):
    """Dispatch absolute positions to out-of-sample / in-sample code paths."""
    positions = np.asarray(positions)
    out = np.empty(positions.size, dtype=float)
    oos = positions > y.end_index
    if np.any(oos):
        out[oos] = out_of_sample(positions[oos] - y.end_index)
    if np.any(~oos):
        rel = positions[~oos] - y.start_index
        if np.any(rel < 0):
            raise UnsupportedInSampleError("position precedes the training series")
        out[~oos] = in_sample(rel)
    return out


def _holt_sse_grid(values, alphas, betas, phis, l0, b0):
    """One-step SSE of the (damped) trend recursion, vectorised."""
    shape = np.broadcast(alphas, betas, phis).shape
    level = np.full(shape, float(l0))
    trend = np.full(shape, float(b0))
    sse = np.zeros(shape)
    with np.errstate(over="ignore", invalid="ignore"):
        for x in values:
            pred = level + phis * trend
            e = x - pred
            sse += e * e
            prev_level = level
            level = pred + alphas * e
            trend = betas * (level - prev_level) + (1 - betas) * phis * trend
    return sse


class HoltForecaster(BaseForecaster):
    """Additive level-and-trend smoothing, optionally with damping.

    Forecasts are ``level + h * trend`` (Holt) or
    ``level + (phi + ... + phi**h) * trend`` (damped).  Unset coefficients
    are estimated by SSE minimisation together with the initial states.
    """

    _min_length = 3

    def __init__(
        self,
        damped: bool = False,
        alpha: float | None = None,
        beta: float | None = None,
        phi: float | None = None,
    ):
        self.damped = damped
        self.alpha = alpha
        self.beta = beta
        self.phi = phi
        super().__init__()

    def _fit(self, y, fh):
        values = y.values
        l0 = float(values[0])
        b0 = float((values[-1] - values[0]) / (len(values) - 1))
        fixed = self.alpha is not None and self.beta is not None and (
            not self.damped or self.phi is not None
        )
        if fixed:
            a, b = float(self.alpha), float(self.beta)
            p = float(self.phi) if self.damped else 1.0
            sse = _holt_sse_grid(values, np.array([a]), np.array([b]),
                                 np.array([p]), l0, b0)
            params = (a, b, p, l0, b0, float(sse[0]))
        else:
            params = self._optimize(values, l0, b0)
        (self.alpha_, self.beta_, self.phi_, self.initial_level_,
         self.initial_trend_, self.sse_) = params
        self._run_path(values)

    def _optimize(self, values, l0, b0):
        grid = _SMOOTHING_GRID
        if self.damped:
            aa, bb, pp = (g.ravel() for g in np.meshgrid(grid, grid, grid,
                                                         indexing="ij"))
        else:
            aa, bb = (g.ravel() for g in np.meshgrid(grid, grid, indexing="ij"))
            pp = np.ones_like(aa)
        sse = _holt_sse_grid(values, aa, bb, pp, l0, b0)
        sse = np.where(np.isfinite(sse), sse, np.inf)
        if not np.any(np.isfinite(sse)):
            raise OptimizerFailedError("no finite SSE on the coefficient grid")
        best = int(np.argmin(sse))
        best_sse = float(sse[best])

        damped = self.damped

        def objective(x):
            if damped:
                a, b, p, lv, tr = x
                if not 0.0 < p <= 1.0:
                    return np.inf
            else:
                a, b, lv, tr = x
                p = 1.0
            if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
                return np.inf
            s = _holt_sse_grid(values, np.array([a]), np.array([b]),
                               np.array([p]), lv, tr)
            s = float(s[0])
            return s if np.isfinite(s) else np.inf

        if damped:
            x0 = np.array([aa[best], bb[best], pp[best], l0, b0])
        else:
            x0 = np.array([aa[best], bb[best], l0, b0])
        res = optimize.minimize(
            objective, x0, method="Nelder-Mead",
            options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 4000},
        )
        if np.isfinite(res.fun) and res.fun < best_sse:
            x = res.x
            best_sse = float(res.fun)
        else:
            x = x0
        if damped:
            a, b, p, lv, tr = x
        else:
            (a, b, lv, tr), p = x, 1.0
        a = float(np.clip(a, 0.0, 1.0))
        b = float(np.clip(b, 0.0, 1.0))
        p = float(np.clip(p, 1e-6, 1.0))
        return a, b, p, float(lv), float(tr), best_sse

    def _run_path(self, values, seed=None):
        if seed is None:
            level, trend = self.initial_level_, self.initial_trend_
        else:
            level, trend = seed
        fitted = np.empty(values.size)
        levels = np.empty(values.size)
        trends = np.empty(values.size)
        a, b, p = self.alpha_, self.beta_, self.phi_
        for t, x in enumerate(values):
            pred = level + p * trend
            fitted[t] = pred
            prev_level = level
            level = pred + a * (x - pred)
            trend = b * (level - prev_level) + (1 - b) * p * trend
            levels[t] = level
            trends[t] = trend
        if seed is None:
            self._fitted, self._levels, self._trends = fitted, levels, trends
        else:
            self._fitted = np.concatenate([self._fitted, fitted])
            self._levels = np.concatenate([self._levels, levels])
            self._trends = np.concatenate([self._trends, trends])

    def _predict_at_positions(self, positions):
        level = self._levels[-1]
        trend = self._trends[-1]

        def oos(h):
            if self.damped:
                # cumulative phi + phi^2 + ... + phi^h
                damp = np.cumsum(self.phi_ ** np.arange(1, h.max() + 1))
                return level + damp[h - 1] * trend
            return level + h * trend

        return _smoothing_insample_mix(
            positions, self._y, oos, lambda rel: self._fitted[rel]
        )

    def _update_state(self, y_new):
        self._run_path(y_new.values, seed=(self._levels[-1], self._trends[-1]))

    def _get_fitted_params(self):
        out = {
            "alpha": self.alpha_,
            "beta": self.beta_,
            "initial_level": self.initial_level_,
            "initial_trend": self.initial_trend_,
            "level": float(self._levels[-1]),
            "trend": float(self._trends[-1]),
            "sse": self.sse_,
        }
        if self.damped:
            out["phi"] = self.phi_
        return out


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------

class ThetaForecaster(BaseForecaster):
    """Two-line theta method with equal combination weights.

    The zero-curvature line is the least-squares linear trend; the
    double-curvature line (two times the series minus the trend line) is
    extrapolated flat by simple exponential smoothing with its own
    estimated coefficient.  Forecasts average the two extrapolations.
    Expects seasonally adjusted input; seasonal handling lives in the
    surrounding pipeline.
    """

    _min_length = 3

    def __init__(self):
        super().__init__()

    def _fit(self, y, fh):
        values = y.values
        t = np.arange(values.size, dtype=float)
        design = np.column_stack([np.ones_like(t), t])
        coef, *_ = np.linalg.lstsq(design, values, rcond=None)
        self.intercept_, self.slope_ = float(coef[0]), float(coef[1])
        line = self.intercept_ + self.slope_ * t
        self._line2 = 2.0 * values - line
        self.alpha_, self.initial_level_, self.sse_ = _ses_fit(self._line2)
        self._levels = _ses_levels(self._line2, self.alpha_, self.initial_level_)

    def _line_at(self, rel):
        return self.intercept_ + self.slope_ * rel

    def _predict_at_positions(self, positions):
        def oos(h):
            rel = (self._y.end_index - self._y.start_index) + h
            return 0.5 * self._line_at(rel) + 0.5 * self._levels[-1]

        def insample(rel):
            prior = np.concatenate([[self.initial_level_], self._levels[:-1]])
            return 0.5 * self._line_at(rel) + 0.5 * prior[rel]

        return _smoothing_insample_mix(positions, self._y, oos, insample)

    def _update_state(self, y_new):
        rel = y_new.positions - self._y.start_index
        new_line2 = 2.0 * y_new.values - self._line_at(rel)
        level = self._levels[-1]
        out = np.empty(new_line2.size)
        for t, x in enumerate(new_line2):
            level += self.alpha_ * (x - level)
            out[t] = level
        self._line2 = np.concatenate([self._line2, new_line2])
        self._levels = np.concatenate([self._levels, out])

    def _get_fitted_params(self):
        return {
            "slope": self.slope_,
            "intercept": self.intercept_,
            "alpha": self.alpha_,
            "level": float(self._levels[-1]),
        }


# ---------------------------------------------------------------------------
# polynomial trend
# ---------------------------------------------------------------------------

class PolynomialTrendForecaster(BaseForecaster):
    """Least-squares polynomial in the 0-based training position.

    Supports in-sample prediction at any training position, which makes it
    the standard engine for the detrending transformer.
    """

    def __init__(self, degree: int = 1):
        if degree < 0 or int(degree) != degree:
            raise ValueError("degree must be a nonnegative integer")
        self.degree = degree
        super().__init__()

    def _required_length(self, y):
        return self.degree + 1

    def _fit(self, y, fh):
        t = np.arange(len(y), dtype=float)
        design = np.vander(t, self.degree + 1, increasing=True)
        coef, *_ = np.linalg.lstsq(design, y.values, rcond=None)
        self.coef_ = coef

    def _predict_at_positions(self, positions):
        rel = np.asarray(positions) - self._y.start_index
        if np.any(rel < 0):
            raise UnsupportedInSampleError("position precedes the training series")
        powers = np.vander(rel.astype(float), self.degree + 1, increasing=True)
        return powers @ self.coef_

    def _get_fitted_params(self):
        return {f"coef_{i}": float(c) for i, c in enumerate(self.coef_)}

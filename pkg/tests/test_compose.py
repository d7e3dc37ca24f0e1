import numpy as np
import pytest

from ufcast.compose import (
    EnsembleForecaster,
    ReducedRegressionForecaster,
    TransformedTargetForecaster,
    tabularize,
)
from ufcast.core import TimeSeries
from ufcast.exceptions import (
    SeriesTooShortError,
    UnimplementedStrategyError,
    UnsupportedInSampleError,
)
from ufcast.forecasters import (
    HoltForecaster,
    NaiveForecaster,
    PolynomialTrendForecaster,
    SESForecaster,
)
from ufcast.regress import KNNRegressor, LinearRegressor
from ufcast.transforms import (
    Deseasonalizer,
    Standardizer,
    classical_decompose,
    seasonality_test,
)
from tests.conftest import seasonal_series


class TestTabularize:
    def test_enumerated_windows(self):
        table = tabularize((1.0, 2.0, 3.0, 4.0, 5.0), 2)
        np.testing.assert_array_equal(
            table.X, [[1.0, 2.0], [2.0, 3.0], [3.0, 4.0]]
        )
        np.testing.assert_array_equal(table.targets, [3.0, 4.0, 5.0])

    def test_single_row(self):
        table = tabularize((1.0, 2.0, 3.0), 2)
        assert table.X.shape == (1, 2)

    def test_window_equal_to_length_rejected(self):
        with pytest.raises(SeriesTooShortError):
            tabularize((1.0, 2.0, 3.0), 3)

    def test_reconstruction_identity(self):
        rng = np.random.default_rng(0)
        y = rng.normal(size=17)
        for w in (1, 3, 8):
            table = tabularize(y, w)
            rebuilt = np.concatenate([table.X[0], table.targets])
            np.testing.assert_array_equal(rebuilt, y)


class TestReducedRegression:
    def test_least_squares_continues_line(self):
        y = np.arange(1.0, 21.0)
        f = ReducedRegressionForecaster(LinearRegressor(), window_length=2)
        f.fit(y)
        got = f.predict([1, 2, 3]).values
        np.testing.assert_allclose(got, [21.0, 22.0, 23.0], atol=1e-6)

        # pseudoinverse oracle for the first step: collinear windows still
        # interpolate the line
        table = tabularize(y, 2)
        Xc = table.X - table.X.mean(axis=0)
        coef = np.linalg.pinv(Xc) @ (table.targets - table.targets.mean())
        intercept = table.targets.mean() - table.X.mean(axis=0) @ coef
        first = np.array([19.0, 20.0]) @ coef + intercept
        assert got[0] == pytest.approx(first, abs=1e-9)

    def test_constant_series(self):
        f = ReducedRegressionForecaster(KNNRegressor(1), window_length=3)
        f.fit(np.full(12, 5.0))
        np.testing.assert_array_equal(f.predict([1, 2, 5]).values, 5.0)

    def test_knn_nearest_window_oracle(self):
        y = np.array([1.0, 2.0, 3.0, 4.0])
        f = ReducedRegressionForecaster(KNNRegressor(1), window_length=2).fit(y)
        # rows: (1,2)->3, (2,3)->4; query window (3,4)
        rows = np.array([[1.0, 2.0], [2.0, 3.0]])
        targets = np.array([3.0, 4.0])
        dists = np.sqrt(((rows - np.array([3.0, 4.0])) ** 2).sum(axis=1))
        assert f.predict(1).values[0] == targets[np.argmin(dists)] == 4.0

    def test_sparse_horizon_runs_full_recursion(self):
        y = seasonal_series(40, sp=4, seed=2)
        f = ReducedRegressionForecaster(LinearRegressor(), window_length=4).fit(y)
        dense = f.predict([1, 2, 3]).values
        sparse = f.predict([3]).values
        assert sparse[0] == dense[2]

    def test_in_sample_needs_full_window(self):
        y = seasonal_series(20, sp=2, seed=3)
        f = ReducedRegressionForecaster(LinearRegressor(), window_length=5).fit(y)
        preds = f.predict([-5, -1])
        assert np.all(np.isfinite(preds.values))
        with pytest.raises(UnsupportedInSampleError):
            f.predict([-(len(y) - 1)])  # inside the first window

    def test_window_too_long(self):
        with pytest.raises(SeriesTooShortError):
            ReducedRegressionForecaster(LinearRegressor(), window_length=9).fit(
                np.arange(5.0)
            )

    @pytest.mark.parametrize("strategy", ["direct", "hybrid"])
    def test_named_strategies_unimplemented(self, strategy):
        f = ReducedRegressionForecaster(LinearRegressor(), 3, strategy=strategy)
        with pytest.raises(UnimplementedStrategyError):
            f.fit(np.arange(10.0))

    def test_interpolating_regressor_reproduces_ar_continuation(self):
        # y_t = 0.6 y_{t-1} + 0.4 y_{t-2}: exactly AR-representable windows
        y = [1.0, 2.0]
        for _ in range(28):
            y.append(0.6 * y[-1] + 0.4 * y[-2])
        y = np.array(y)
        truth = list(y)
        for _ in range(5):
            truth.append(0.6 * truth[-1] + 0.4 * truth[-2])
        f = ReducedRegressionForecaster(LinearRegressor(), window_length=2).fit(y)
        np.testing.assert_allclose(f.predict([1, 2, 3, 4, 5]).values,
                                   truth[30:], rtol=1e-8)


def naive2_direct(y: TimeSeries, horizon: int) -> np.ndarray:
    """Straight-line reference: conditional seasonal adjustment + last value."""
    sp = y.sp
    if seasonality_test(y, sp):
        idx = classical_decompose(y, sp)
        adjusted = y.values / idx.indices[np.arange(len(y)) % sp]
        out_idx = idx.indices[(len(y) + np.arange(horizon)) % sp]
        return adjusted[-1] * out_idx
    return np.full(horizon, y.values[-1])


class TestPipeline:
    def test_reproduces_direct_seasonal_naive(self):
        for seed in range(3):
            y = seasonal_series(144, sp=12, seed=seed)
            pipe = TransformedTargetForecaster(
                [Deseasonalizer(sp=12), NaiveForecaster("last")]
            ).fit(y)
            got = pipe.predict(list(range(1, 19))).values
            np.testing.assert_allclose(got, naive2_direct(y, 18), rtol=1e-12)

    def test_single_step_equals_bare_forecaster(self):
        y = seasonal_series(50, sp=5, seed=1)
        bare = SESForecaster().fit(y).predict([1, 2, 3]).values
        piped = TransformedTargetForecaster([SESForecaster()]).fit(y)
        np.testing.assert_array_equal(piped.predict([1, 2, 3]).values, bare)

    def test_standardized_trend_is_exact_on_line(self):
        t = np.arange(30.0)
        y = TimeSeries(3 * t + 7)
        pipe = TransformedTargetForecaster(
            [Standardizer(), PolynomialTrendForecaster(degree=1)]
        ).fit(y)
        expected = 3 * np.arange(30, 34) + 7
        np.testing.assert_allclose(pipe.predict([1, 2, 3, 4]).values, expected,
                                   atol=1e-8)

    def test_manual_inverse_chain(self):
        y = seasonal_series(96, sp=12, seed=7)
        deseas, std = Deseasonalizer(sp=12), Standardizer()
        pipe = TransformedTargetForecaster(
            [("d", deseas), ("s", std), ("f", SESForecaster())]
        ).fit(y)
        fh = [1, 5, 12]
        got = pipe.predict(fh).values

        inner = SESForecaster().fit(
            Standardizer().fit(
                Deseasonalizer(sp=12).fit(y).transform(y)
            ).transform(Deseasonalizer(sp=12).fit(y).transform(y))
        )
        positions = np.array([95 + s for s in fh])
        manual = inner.predict(fh).values
        manual = Standardizer().fit(Deseasonalizer(sp=12).fit(y).transform(y)) \
            .inverse_at(manual, positions)
        manual = Deseasonalizer(sp=12).fit(y).inverse_at(manual, positions)
        np.testing.assert_allclose(got, manual, rtol=1e-12)

    def test_update_without_refit(self):
        y = seasonal_series(96, sp=12, seed=8)
        more = seasonal_series(12, sp=12, seed=9, start_index=96)
        pipe = TransformedTargetForecaster(
            [Deseasonalizer(sp=12), SESForecaster()]
        ).fit(y)
        pipe.update(more)
        assert pipe.cutoff == 107
        assert np.isfinite(pipe.predict([1, 2]).values).all()

    def test_step_kinds_validated(self):
        with pytest.raises(ValueError):
            TransformedTargetForecaster([Standardizer()])  # no forecaster
        with pytest.raises(ValueError):
            TransformedTargetForecaster(
                [NaiveForecaster(), SESForecaster()]  # forecaster mid-chain
            )

    def test_nested_param_paths(self):
        pipe = TransformedTargetForecaster([
            ("deseasonalize", Deseasonalizer(sp=4)),
            ("forecast", ReducedRegressionForecaster(KNNRegressor(1), 3)),
        ])
        pipe.set_params(**{"forecast.window_length": 6,
                           "forecast.regressor.k": 2})
        params = pipe.get_params()
        assert params["forecast.window_length"] == 6
        assert params["forecast.regressor.k"] == 2


class TestEnsemble:
    def test_single_component_identity(self):
        y = seasonal_series(40, sp=4, seed=4)
        bare = SESForecaster().fit(y).predict([1, 2]).values
        ens = EnsembleForecaster([SESForecaster()]).fit(y)
        np.testing.assert_array_equal(ens.predict([1, 2]).values, bare)

    def test_hand_mean(self):
        ens = EnsembleForecaster([
            NaiveForecaster("last"),
            NaiveForecaster("seasonal_last", sp=2),
        ]).fit((1.0, 2.0, 3.0, 4.0))
        assert ens.predict(1).values[0] == pytest.approx(3.5)

    def test_permutation_invariant_bitwise(self):
        y = seasonal_series(60, sp=6, seed=5)
        parts = [SESForecaster(), HoltForecaster(),
                 NaiveForecaster("seasonal_last")]
        a = EnsembleForecaster(list(parts)).fit(y).predict([1, 2, 3]).values
        b = EnsembleForecaster(parts[::-1]).fit(y).predict([1, 2, 3]).values
        assert np.array_equal(a, b)

    def test_component_failure_fails_ensemble(self):
        ens = EnsembleForecaster([
            NaiveForecaster("last"),
            HoltForecaster(),  # needs 3 points
        ])
        with pytest.raises(SeriesTooShortError):
            ens.fit((1.0, 2.0))

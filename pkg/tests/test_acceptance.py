"""Acceptance gate.

Criteria 1-5 replicate published hourly/weekly M4 numbers and therefore
need the real competition data: point ``M4_DATA_DIR`` at a directory
holding the distribution CSVs (flat, or with Train/ and Test/
subdirectories).  Without the data those criteria skip with an explicit
message -- supplying the data is the caller's job, never the package's.
Criteria 6-8 run unconditionally (6 documents the out-of-scope full-M4
run, 7 is the property battery, 8 is the determinism check).

Each criterion prints one ``[ACCEPTANCE] ...`` pass/fail line
(visible with ``pytest -s`` or on failure).
"""

import itertools
import json
import os
import re
from pathlib import Path

import numpy as np
import pytest

import ufcast as uf
from ufcast.m4.published import compare_aggregate, load_published
from ufcast.m4.runner import RunManifest, run
from tests.conftest import seasonal_series


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _finish(criterion: str, failures: list):
    status = "FAIL" if failures else "PASS"
    print(f"[ACCEPTANCE] {criterion}: {status}")
    for f in failures:
        print(f"    failed: {f}")
    assert not failures, f"{criterion}: {failures}"


def _check(failures: list, ok: bool, detail: str):
    print(f"    {'ok ' if ok else 'BAD'} {detail}")
    if not ok:
        failures.append(detail)


def _m4_dirs():
    root = os.environ.get("M4_DATA_DIR")
    if not root:
        return None
    root = Path(root)
    train_candidates = [root, root / "Train", root / "train",
                        root / "Dataset" / "Train"]
    test_candidates = [root, root / "Test", root / "test",
                       root / "Dataset" / "Test"]
    train = next((d for d in train_candidates
                  if (d / "Hourly-train.csv").exists()), None)
    test = next((d for d in test_candidates
                 if (d / "Hourly-test.csv").exists()), None)
    if train is None or test is None:
        return None
    return train, test


_SKIP_MSG = ("real M4 data not found: set M4_DATA_DIR to the directory with "
             "the competition CSVs (Hourly-train.csv, ...) to run the "
             "replication criteria")


@pytest.fixture(scope="module")
def m4_dirs():
    dirs = _m4_dirs()
    if dirs is None:
        pytest.skip(_SKIP_MSG)
    return dirs


@pytest.fixture(scope="module")
def hourly_run(m4_dirs, tmp_path_factory):
    """One shared hourly run covering criteria 1, 2, 4, 5 and half of 3.

    The MASE scaling is pinned to the in-sample (train-only) convention
    the published numbers were produced with.
    """
    train_dir, test_dir = m4_dirs
    out = tmp_path_factory.mktemp("acceptance") / "hourly.jsonl"
    manifest = RunManifest(
        datasets=["hourly"],
        models=["Naive", "sNaive", "Naive2", "SES", "Theta", "Theta-bc",
                "LR-s", "KNN-s"],
        train_dir=str(train_dir), test_dir=str(test_dir), out_path=str(out),
        jobs=min(8, os.cpu_count() or 1), mase_denominator="train_only",
    )
    return run(manifest)


@pytest.fixture(scope="module")
def weekly_run(m4_dirs, tmp_path_factory):
    train_dir, test_dir = m4_dirs
    if not (train_dir / "Weekly-train.csv").exists():
        pytest.skip("Weekly-train.csv not found next to the hourly data")
    out = tmp_path_factory.mktemp("acceptance") / "weekly.jsonl"
    manifest = RunManifest(
        datasets=["weekly"], models=["Naive", "sNaive", "Naive2"],
        train_dir=str(train_dir), test_dir=str(test_dir), out_path=str(out),
        jobs=min(8, os.cpu_count() or 1), mase_denominator="train_only",
    )
    return run(manifest)


# ---------------------------------------------------------------------------
# criteria 1-5: replication against published values (need real data)
# ---------------------------------------------------------------------------

class TestReplication:
    def test_criterion_1_naive_hourly(self, hourly_run):
        failures = []
        block = hourly_run["datasets"]["hourly"]
        naive = block["models"]["Naive"]
        _check(failures, block["n_series"] == 414,
               f"hourly series count 414, got {block['n_series']}")
        _check(failures, abs(naive["mean_smape"] - 43.003) <= 0.005,
               f"Naive sMAPE 43.003 +/- 0.005, got {naive['mean_smape']:.4f}")
        _check(failures, abs(naive["mean_mase"] - 11.608) <= 0.005,
               f"Naive MASE 11.608 +/- 0.005, got {naive['mean_mase']:.4f}")
        _check(failures, naive["runtime_s"] < 60.0,
               f"Naive runtime < 60s, got {naive['runtime_s']:.1f}s")
        _finish("criterion 1 (Naive hourly replication)", failures)

    def test_criterion_2_seasonal_naive_hourly(self, hourly_run):
        failures = []
        models = hourly_run["datasets"]["hourly"]["models"]
        snaive = models["sNaive"]["mean_smape"]
        naive2 = models["Naive2"]["mean_smape"]
        _check(failures, abs(snaive - 13.912) <= 0.005,
               f"sNaive sMAPE 13.912 +/- 0.005, got {snaive:.4f}")
        _check(failures, abs(naive2 - 18.383) <= 0.02,
               f"Naive2 sMAPE 18.383 +/- 0.02, got {naive2:.4f}")
        _finish("criterion 2 (sNaive / Naive2 hourly)", failures)

    def test_criterion_3_naive_family_zero_differences(self, hourly_run,
                                                       weekly_run):
        """Replicated naive-family metrics match the published table at its
        own (three-decimal) precision, so the compare output prints 0.000."""
        failures = []
        published = load_published()
        for aggregate, dataset in ((hourly_run, "hourly"),
                                   (weekly_run, "weekly")):
            rows = compare_aggregate(aggregate, published)
            for row in rows:
                if row["model"] not in ("Naive", "sNaive", "Naive2"):
                    continue
                if row["dataset"] != dataset:
                    continue
                gap = abs(row["replicated"] - row["published"])
                _check(failures, gap <= 0.0005,
                       f"{row['model']} {dataset} {row['metric']}: "
                       f"replicated {row['replicated']:.5f} vs published "
                       f"{row['published']} (|gap| {gap:.5f} <= 0.0005)")
        _finish("criterion 3 (naive family perfect replication)", failures)

    def test_criterion_4_statistical_models_hourly(self, hourly_run):
        failures = []
        models = hourly_run["datasets"]["hourly"]["models"]
        targets = (("SES", 18.094, 0.005), ("Theta", 18.14, 0.005),
                   ("Theta-bc", 18.16, 0.01))
        for name, target, rel in targets:
            got = models[name]["mean_smape"]
            _check(failures, abs(got - target) <= rel * target,
                   f"{name} sMAPE {target} +/- {rel:.1%}, got {got:.4f}")
        _finish("criterion 4 (smoothing and theta hourly)", failures)

    def test_criterion_5_reduction_pipelines_hourly(self, hourly_run):
        failures = []
        models = hourly_run["datasets"]["hourly"]["models"]
        for name, target in (("LR-s", 0.501), ("KNN-s", 0.544)):
            got = models[name]["owa"]
            _check(failures, abs(got - target) <= 0.02,
                   f"{name} OWA {target} +/- 0.02, got {got:.4f}")
        _finish("criterion 5 (reduction pipelines end to end)", failures)


# ---------------------------------------------------------------------------
# criterion 6: full-M4 totals are out of required scope
# ---------------------------------------------------------------------------

def test_criterion_6_full_m4_documented_not_gated():
    print("[ACCEPTANCE] criterion 6: SKIP by design")
    pytest.skip(
        "full-M4 totals (100k series, hours of smoothing optimisation) are "
        "documented but not gated; run `ufcast-m4 run --dataset all` with "
        "the full data to produce them"
    )


# ---------------------------------------------------------------------------
# criterion 7: property battery (always runs)
# ---------------------------------------------------------------------------

class TestCriterion7Properties:
    def test_criterion_7_property_suites(self):
        failures = []
        rng = np.random.default_rng(2024)

        # metric symmetry and joint positive-scale invariance
        ok = True
        for _ in range(25):
            y = rng.normal(10, 3, 12)
            p = rng.normal(10, 3, 12)
            c = float(rng.uniform(0.1, 100))
            ok &= np.isclose(uf.smape(y, p), uf.smape(p, y))
            ok &= np.isclose(uf.smape(c * y, c * p), uf.smape(y, p))
            train = rng.normal(10, 3, 30)
            ok &= np.isclose(uf.mase(y, p, train, sp=1),
                             uf.mase(c * y, c * p, c * train, sp=1))
        _check(failures, bool(ok), "sMAPE symmetry, sMAPE/MASE scale invariance")

        # OWA of the reference against itself is exactly 1
        recs = [uf.EvalRecord(f"s{i}", "Naive2", smape=float(rng.uniform(1, 30)),
                              mase=float(rng.uniform(0.1, 3)))
                for i in range(50)]
        _check(failures, uf.owa(recs, recs) == 1.0, "OWA(Naive2, Naive2) == 1.0")

        # transformer round-trips at 1e-9
        ok = True
        for seed in range(5):
            y = seasonal_series(120, sp=12, seed=seed)
            for t in (uf.Deseasonalizer(), uf.BoxCoxTransformer(),
                      uf.Standardizer(),
                      uf.Detrender(uf.PolynomialTrendForecaster(1))):
                back = t.fit(y).inverse_transform(t.transform(y))
                ok &= bool(np.allclose(back.values, y.values, atol=1e-9))
        _check(failures, ok, "transformer inverse(transform(x)) == x at 1e-9")

        # classical decomposition recovers synthetic indices at 1e-6
        s = np.array([0.8, 1.2, 0.9, 1.1])
        y = 10.0 * s[np.arange(48) % 4]
        got = uf.classical_decompose(uf.TimeSeries(y, sp=4), sp=4).indices
        _check(failures, bool(np.allclose(got, s, atol=1e-6)),
               "decomposition recovers synthetic indices at 1e-6")

        # tabularize / reconstruct identity
        ok = True
        for w in (1, 4, 9):
            z = rng.normal(size=20)
            table = uf.tabularize(z, w)
            ok &= bool(np.array_equal(
                np.concatenate([table.X[0], table.targets]), z))
        _check(failures, ok, "tabularize first row + targets reproduces y")

        # grid search equals an external brute-force loop, 20 random instances
        _check(failures, self._grid_search_matches_brute_force(),
               "grid search == brute-force oracle on 20 random instances")

        # Wilcoxon exact p equals full sign enumeration for n <= 10
        _check(failures, self._wilcoxon_matches_enumeration(),
               "Wilcoxon exact p == 2^n enumeration for n <= 10")

        # Friedman statistic on the constant-rank fixture
        ranks = np.tile([1.0, 2.0, 3.0], (10, 1))
        chi2, _ = uf.friedman_test(
            uf.RankMatrix(list("abc"), [f"s{i}" for i in range(10)], ranks))
        _check(failures, np.isclose(chi2, 20.0),
               f"Friedman constant-rank fixture chi2 == 20, got {chi2}")

        # Holm step-down fixture
        adjusted = uf.holm_adjust([0.01, 0.04, 0.03])
        _check(failures, np.allclose(adjusted, [0.03, 0.06, 0.06]),
               f"Holm (0.01, 0.04, 0.03) -> (0.03, 0.06, 0.06), got {adjusted}")

        _finish("criterion 7 (property suites)", failures)

    @staticmethod
    def _grid_search_matches_brute_force() -> bool:
        rng = np.random.default_rng(7)
        for _ in range(20):
            y = seasonal_series(int(rng.integers(30, 60)), sp=4, noise=0.15,
                                seed=int(rng.integers(1e6)))
            grid = {"window_length": [2, 4, 6]}
            cv = uf.SlidingWindowSplitter(
                window_length=int(rng.integers(12, 18)), fh=[1, 2],
                mode=str(rng.choice(["sliding", "expanding"])),
                step_length=int(rng.integers(1, 3)),
            )
            best, best_w = np.inf, None
            for w in grid["window_length"]:
                scores = []
                try:
                    for train_pos, test_pos in cv.split(y):
                        cand = uf.ReducedRegressionForecaster(
                            uf.LinearRegressor(), w)
                        cand.fit(y.islice(int(train_pos[0]),
                                          int(train_pos[-1]) + 1))
                        scores.append(uf.smape(
                            y.values[test_pos], cand.predict([1, 2]).values))
                except Exception:
                    continue
                if scores and np.mean(scores) < best:
                    best, best_w = float(np.mean(scores)), w
            gs = uf.ForecastingGridSearch(
                uf.ReducedRegressionForecaster(uf.LinearRegressor(), 2),
                grid, cv).fit(y)
            if gs.best_params_["window_length"] != best_w:
                return False
            if not np.isclose(gs.best_score_, best):
                return False
        return True

    @staticmethod
    def _wilcoxon_matches_enumeration() -> bool:
        from scipy.stats import rankdata

        rng = np.random.default_rng(11)
        for _ in range(10):
            n = int(rng.integers(3, 11))
            d = rng.integers(1, 6, size=n).astype(float)
            d *= np.where(rng.random(n) < 0.5, -1.0, 1.0)
            w_obs, p_got = uf.wilcoxon_signed_rank(d, np.zeros(n))
            ranks = rankdata(np.abs(d), method="average")
            count = 0
            for signs in itertools.product((1, -1), repeat=n):
                w_plus = sum(r for s, r in zip(signs, ranks) if s > 0)
                count += (w_plus <= w_obs + 1e-12)
            if not np.isclose(p_got, min(1.0, 2.0 * count / 2 ** n)):
                return False
        return True


# ---------------------------------------------------------------------------
# criterion 8: determinism, serial vs 8-way parallel (always runs)
# ---------------------------------------------------------------------------

_RUNTIME_FIELDS = re.compile(r',?\s*"(?:total_)?runtime_s": [^,}]+')


def test_criterion_8_determinism(mini_m4_dir, tmp_path):
    failures = []
    outs = []
    for jobs in (1, 8):
        out = tmp_path / f"det_{jobs}.jsonl"
        run(RunManifest(
            datasets=["hourly"], models=["Naive", "sNaive", "SES", "KNN-s"],
            train_dir=str(mini_m4_dir), test_dir=str(mini_m4_dir),
            out_path=str(out), jobs=jobs, mase_denominator="train_only",
        ))
        outs.append(out)

    def canonical(path):
        return [_RUNTIME_FIELDS.sub("", line.rstrip("\n"))
                for line in open(path)]

    serial, parallel = canonical(outs[0]), canonical(outs[1])
    _check(failures, serial == parallel,
           "serial and 8-way runs byte-identical outside runtime fields")

    rerun = tmp_path / "det_rerun.jsonl"
    run(RunManifest(
        datasets=["hourly"], models=["Naive", "sNaive", "SES", "KNN-s"],
        train_dir=str(mini_m4_dir), test_dir=str(mini_m4_dir),
        out_path=str(rerun), jobs=1, mase_denominator="train_only",
    ))
    _check(failures, canonical(rerun) == serial,
           "same manifest twice is byte-identical outside runtime fields")

    # records must parse and carry 17-significant-digit metric values
    with open(outs[0]) as fh:
        first = json.loads(fh.readline())
    _check(failures, first["type"] == "record" and "smape" in first,
           "JSON-lines records parse back")
    _finish("criterion 8 (determinism)", failures)

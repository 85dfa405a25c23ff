"""Unit tests for evaluation statistics and reports."""

from __future__ import annotations

import csv
import json

import numpy as np
import pytest

from laman_ric.errors import ConfigError, DodIntractable, EmptySample
from laman_ric.graph import complete_graph
from laman_ric.rigidity import is_laman
from laman_ric.stats import (
    CSV_COLUMNS,
    EvalConfig,
    bootstrap_ks,
    dod_values,
    er_baseline,
    eval_report,
    ks_statistic,
    validity_rate,
    write_report,
)


class TestKsStatistic:
    """Tests for the two-sample KS statistic."""

    @pytest.mark.parametrize(
        "a, b, expected",
        [([1, 2, 3], [1, 2, 3], 0.0), ([0, 0, 0], [1, 1, 1], 1.0), ([1, 2], [1, 3], 0.5)],
    )
    def test_examples(self, a, b, expected):
        assert ks_statistic(a, b) == pytest.approx(expected)

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=40), rng.normal(0.5, size=30)
        assert ks_statistic(a, b) == ks_statistic(b, a)

    def test_empty(self):
        with pytest.raises(EmptySample):
            ks_statistic([], [1.0])


class TestBootstrapKs:
    """Tests for bootstrapped KS reports."""

    def test_disjoint(self):
        report = bootstrap_ks([0.0] * 5, [1.0] * 5, 200, np.random.default_rng(0))
        assert report.statistic == 1.0
        assert report.bootstrap_mean == 1.0
        assert report.bootstrap_se == 0.0

    def test_same_sample_near_zero(self):
        a = np.random.default_rng(1).normal(size=500)
        report = bootstrap_ks(a, a, 100, np.random.default_rng(2))
        assert report.statistic == 0.0
        assert 0.0 < report.bootstrap_mean < 0.15

    def test_deterministic(self):
        a, b = [0.1, 0.2, 0.4, 0.8], [0.3, 0.5, 0.6]
        first = bootstrap_ks(a, b, 150, np.random.default_rng(3))
        second = bootstrap_ks(a, b, 150, np.random.default_rng(3))
        assert first == second

    def test_too_few_reps(self):
        with pytest.raises(ConfigError):
            bootstrap_ks([1.0], [2.0], 50, np.random.default_rng(0))


class TestValidity:
    """Tests for validity rates and the E-R baseline."""

    def test_all_triangles(self, k3):
        assert validity_rate([k3] * 20, 100, np.random.default_rng(0)) == (100.0, 0.0)

    def test_half_valid(self, k3, path3):
        pct, sd = validity_rate([k3, path3] * 10, 100, np.random.default_rng(0))
        assert pct == 50.0
        assert sd > 0

    def test_baseline_three_nodes_is_triangle(self):
        graphs = er_baseline([3] * 10, np.random.default_rng(0))
        assert all(g == complete_graph(3) for g in graphs)

    def test_baseline_four_nodes_always_laman(self):
        graphs = er_baseline([4] * 30, np.random.default_rng(1))
        assert all(g.m == 5 and is_laman(g) for g in graphs)

    def test_baseline_edge_count(self):
        graphs = er_baseline([12] * 50, np.random.default_rng(2))
        assert all(g.n == 12 and g.m == 21 for g in graphs)

    @pytest.mark.parametrize("n, recorded", [(8, 44.6), (12, 22.7), (16, 12.1)])
    def test_baseline_validity_regression(self, n, recorded):
        """Test G(n, 2n-3) validity stays at the recorded rate for each node count."""
        graphs = er_baseline([n] * 2000, np.random.default_rng(n))
        pct, _ = validity_rate(graphs, 100, np.random.default_rng(3))
        assert abs(pct - recorded) <= 5.0

    def test_baseline_validity_over_reference_sizes(self):
        rng = np.random.default_rng(4)
        sizes = [int(n) for n in rng.integers(8, 17, size=3000)]
        pct, sd = validity_rate(er_baseline(sizes, rng), 100, np.random.default_rng(5))
        assert abs(pct - 23.5) <= 4.0
        assert 0.0 < sd < 2.0

    def test_baseline_too_small(self):
        with pytest.raises(ConfigError):
            er_baseline([2], np.random.default_rng(0))


class TestDodValues:
    """Tests for batch DoD computation."""

    def test_values(self, k3, fan4):
        values, skipped = dod_values([k3, fan4])
        assert values == pytest.approx([1 / 3, 0.75])
        assert skipped == 0

    def test_skip_policy(self, k3, laman_graph):
        big = laman_graph(7, seed=0)
        values, skipped = dod_values([k3, big], max_n=6, skip_intractable=True)
        assert (len(values), skipped) == (1, 1)
        with pytest.raises(DodIntractable):
            dod_values([k3, big], max_n=6)


class TestEvalReport:
    """Tests for eval_report and write_report."""

    @pytest.fixture
    def graphs(self, laman_graph):
        return [laman_graph(6 + i % 4, p=0.5, seed=i) for i in range(12)]

    def test_samples_equal_reference(self, graphs):
        report = eval_report(graphs, graphs, EvalConfig(reps=100, seed=1))
        assert set(report.sources) == {"samples", "erdos_renyi", "reference"}
        samples = report.sources["samples"]
        assert samples.ks is not None and samples.ks.statistic == 0.0
        assert samples.validity_pct == 100.0
        assert report.sources["reference"].ks is None
        assert report.sources["erdos_renyi"].count == len(graphs)

    def test_deterministic(self, graphs):
        cfg = EvalConfig(reps=100, seed=2, er_count=20)
        a = eval_report(graphs[:6], graphs[6:], cfg)
        b = eval_report(graphs[:6], graphs[6:], cfg)
        assert a.to_dict() == b.to_dict()
        assert a.sources["erdos_renyi"].count == 20

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            EvalConfig(reps=10)
        with pytest.raises(ConfigError):
            EvalConfig(er_count=0)

    def test_empty_samples(self, graphs):
        with pytest.raises(EmptySample):
            eval_report([], graphs, EvalConfig(reps=100))

    def test_write_report(self, tmp_path, graphs):
        report = eval_report(graphs[:6], graphs[6:], EvalConfig(reps=100, seed=3))
        written = write_report(report, tmp_path / "out")
        names = {p.name for p in written}
        assert {"report.json", "report.csv"} <= names

        data = json.loads((tmp_path / "out" / "report.json").read_text(encoding="utf-8"))
        assert data["dod_convention"] == report.convention
        assert data["config"]["reps"] == 100

        with open(tmp_path / "out" / "report.csv", encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == CSV_COLUMNS
        assert [r[0] for r in rows[1:]] == ["samples", "erdos_renyi", "reference"]

    def test_histogram_is_reproducible(self, tmp_path, graphs):
        pytest.importorskip("matplotlib")
        report = eval_report(graphs[:6], graphs[6:], EvalConfig(reps=100, seed=4))
        write_report(report, tmp_path / "a")
        write_report(report, tmp_path / "b")
        first = (tmp_path / "a" / "dod_hist.svg").read_bytes()
        assert first == (tmp_path / "b" / "dod_hist.svg").read_bytes()
        assert b"<svg" in first

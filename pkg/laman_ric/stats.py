"""Evaluation statistics: DoD distributions, bootstrapped KS distance, validity, E-R baseline."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import networkx as nx
import numpy as np
from scipy.stats import ks_2samp

from .errors import ConfigError, DodIntractable, EmptySample, TooLarge, TooSmall
from .graph import Graph
from .rigidity import BRUTE_FORCE_MAX_N, DOD_CONVENTION, count_well_constrained_subgraphs, is_laman
from .workers import map_ordered

logger = logging.getLogger(__name__)

MIN_BOOTSTRAP_REPS = 100

HIST_SIZE_PX = (640, 400)
HIST_DPI = 100
HIST_BINS = 30
SVG_HASH_SALT = "laman-ric"


@dataclass(frozen=True)
class KsReport:
    """Point KS statistic with bootstrap mean and standard deviation."""
    statistic: float
    bootstrap_mean: float
    bootstrap_se: float
    reps: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "statistic": self.statistic,
            "bootstrap_mean": self.bootstrap_mean,
            "bootstrap_se": self.bootstrap_se,
            "reps": self.reps,
        }


def _require_nonempty(*samples: Sequence[Any]) -> None:
    for s in samples:
        if len(s) == 0:
            raise EmptySample("Statistic needs non-empty samples")


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sample KS statistic: largest gap between the empirical CDFs."""
    _require_nonempty(a, b)
    return float(ks_2samp(a, b, method="asymp").statistic)


def bootstrap_ks(
    a: Sequence[float],
    b: Sequence[float],
    reps: int,
    rng: np.random.Generator,
) -> KsReport:
    """Resample both sides with replacement `reps` times."""
    _require_nonempty(a, b)
    if reps < MIN_BOOTSTRAP_REPS:
        raise ConfigError(f"Bootstrap needs at least {MIN_BOOTSTRAP_REPS} reps, got {reps}")
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    values = np.array([
        ks_statistic(rng.choice(a_arr, size=a_arr.size), rng.choice(b_arr, size=b_arr.size))
        for _ in range(reps)
    ])
    return KsReport(
        statistic=ks_statistic(a_arr, b_arr),
        bootstrap_mean=float(values.mean()),
        bootstrap_se=float(values.std(ddof=1)),
        reps=reps,
    )


def _is_valid(g: Graph) -> bool:
    return g.n >= 2 and is_laman(g)


def validity_rate(
    graphs: Sequence[Graph],
    reps: int,
    rng: np.random.Generator,
) -> tuple[float, float]:
    """Percent of graphs that are Laman, with its bootstrap standard deviation in percent."""
    _require_nonempty(graphs)
    valid = np.array([_is_valid(g) for g in graphs], dtype=np.float64)
    boot = np.array([rng.choice(valid, size=valid.size).mean() for _ in range(reps)])
    sd = float(boot.std(ddof=1)) if reps > 1 else 0.0
    return 100.0 * float(valid.mean()), 100.0 * sd


def er_baseline(n_values: Sequence[int], rng: np.random.Generator) -> list[Graph]:
    """One uniform G(n, 2n-3) graph per requested node count."""
    graphs = []
    for n in n_values:
        if n < 3:
            raise ConfigError(f"Baseline graphs need n >= 3, got {n}")
        nxg = nx.gnm_random_graph(int(n), 2 * int(n) - 3, seed=int(rng.integers(2**32)))
        graphs.append(Graph.from_networkx(nxg))
    return graphs


def dod_values(
    graphs: Sequence[Graph],
    max_n: int = BRUTE_FORCE_MAX_N,
    skip_intractable: bool = False,
    jobs: int = 1,
) -> tuple[list[float], int]:
    """
    Exact DoD per graph, plus the number of graphs skipped as too large.

    Raises:
        DodIntractable: a graph exceeds max_n and skipping is off
    """
    def one(g: Graph) -> float | None:
        try:
            return count_well_constrained_subgraphs(g, max_n=max_n).dod
        except TooLarge as e:
            if skip_intractable:
                return None
            raise DodIntractable(str(e)) from e
        except TooSmall:
            return None

    results = map_ordered(one, graphs, jobs)
    values = [v for v in results if v is not None]
    skipped = len(results) - len(values)
    if skipped:
        logger.warning(f"Skipped {skipped} graphs without a computable DoD (max_n={max_n})")
    return values, skipped


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation settings."""
    reps: int = 1000
    seed: int = 0
    max_n: int = BRUTE_FORCE_MAX_N
    skip_intractable: bool = False
    # Baseline sample size; None means the number of samples
    er_count: int | None = None

    def __post_init__(self) -> None:
        if self.reps < MIN_BOOTSTRAP_REPS:
            raise ConfigError(f"reps must be >= {MIN_BOOTSTRAP_REPS}, got {self.reps}")
        if self.er_count is not None and self.er_count < 1:
            raise ConfigError(f"er_count must be positive, got {self.er_count}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "reps": self.reps,
            "seed": self.seed,
            "max_n": self.max_n,
            "skip_intractable": self.skip_intractable,
            "er_count": self.er_count,
        }


@dataclass
class SourceSummary:
    count: int
    skipped: int
    mean_dod: float
    validity_pct: float
    validity_sd: float
    ks: KsReport | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": self.count,
            "skipped": self.skipped,
            "mean_dod": self.mean_dod,
            "validity_pct": self.validity_pct,
            "validity_sd": self.validity_sd,
            "dod_ks": self.ks.to_dict() if self.ks else None,
        }


@dataclass
class EvalReport:
    """DoD and validity comparison of samples and the E-R baseline against a reference set."""
    config: EvalConfig
    sources: dict[str, SourceSummary]
    dod: dict[str, list[float]] = field(default_factory=dict, repr=False)
    convention: str = DOD_CONVENTION

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "dod_convention": self.convention,
            "sources": {name: s.to_dict() for name, s in self.sources.items()},
        }


def eval_report(
    samples: Sequence[Graph],
    reference: Sequence[Graph],
    cfg: EvalConfig,
    jobs: int = 1,
) -> EvalReport:
    """
    Compare samples and a matched E-R baseline against the reference DoD distribution.

    Baseline node counts are drawn from the reference node counts.

    Raises:
        EmptySample, DodIntractable
    """
    _require_nonempty(samples, reference)
    rng = np.random.default_rng(cfg.seed)

    ref_n = np.array([g.n for g in reference])
    er_count = cfg.er_count if cfg.er_count is not None else len(samples)
    baseline = er_baseline(rng.choice(ref_n, size=er_count).tolist(), rng)

    groups = {"samples": samples, "erdos_renyi": baseline, "reference": reference}
    dod: dict[str, list[float]] = {}
    skipped: dict[str, int] = {}
    for name, graphs in groups.items():
        dod[name], skipped[name] = dod_values(graphs, cfg.max_n, cfg.skip_intractable, jobs)

    sources = {}
    for name, graphs in groups.items():
        pct, sd = validity_rate(graphs, cfg.reps, rng)
        ks = None
        if name != "reference":
            ks = bootstrap_ks(dod[name], dod["reference"], cfg.reps, rng)
        sources[name] = SourceSummary(
            count=len(graphs),
            skipped=skipped[name],
            mean_dod=float(np.mean(dod[name])) if dod[name] else float("nan"),
            validity_pct=pct,
            validity_sd=sd,
            ks=ks,
        )
        logger.info(f"{name}: {len(graphs)} graphs, validity {pct:.2f}%")
    return EvalReport(cfg, sources, dod)


CSV_COLUMNS = [
    "source", "count", "skipped", "mean_dod", "validity_pct", "validity_sd",
    "ks", "ks_bootstrap_mean", "ks_bootstrap_se",
]


def write_report(report: EvalReport, out_dir: str | Path) -> list[Path]:
    """Write report.json, report.csv and (when matplotlib is available) dod_hist.svg."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = out / "report.json"
    with open(json_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(report.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")
    written.append(json_path)

    csv_path = out / "report.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for name, s in report.sources.items():
            ks = s.ks
            writer.writerow([
                name, s.count, s.skipped, repr(s.mean_dod), repr(s.validity_pct),
                repr(s.validity_sd),
                repr(ks.statistic) if ks else "",
                repr(ks.bootstrap_mean) if ks else "",
                repr(ks.bootstrap_se) if ks else "",
            ])
    written.append(csv_path)

    svg_path = out / "dod_hist.svg"
    if write_histogram(report.dod, svg_path):
        written.append(svg_path)
    return written


def write_histogram(dod: dict[str, list[float]], path: Path) -> bool:
    """Overlaid DoD histograms as a 640x400 SVG. Returns False if matplotlib is missing."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        logger.warning(
            "matplotlib not installed, skipping DoD histogram (pip install laman-ric[plots])"
        )
        return False

    values = [v for vs in dod.values() for v in vs]
    if not values:
        return False
    bins = np.linspace(min(values), max(values) + 1e-9, HIST_BINS + 1)
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        size = (HIST_SIZE_PX[0] / HIST_DPI, HIST_SIZE_PX[1] / HIST_DPI)
        fig = plt.figure(figsize=size, dpi=HIST_DPI)
        ax = fig.add_subplot()
        for name, vs in dod.items():
            if vs:
                ax.hist(vs, bins=bins, density=True, histtype="step", label=name)
        ax.set_xlabel("degree of decomposability")
        ax.set_ylabel("density")
        ax.legend()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    logger.info(f"Wrote {path}")
    return True

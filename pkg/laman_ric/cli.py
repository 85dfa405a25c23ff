"""Command-line entry point: `laman-ric <subcommand> ...`."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .chain import ChainConfig, run_chains, write_trace
from .config import RicConfig
from .corrupter import CorruptionConfig, corrupt, require_within_bounds
from .datagen import PRESETS, DatagenConfig, generate_dataset
from .errors import ConfigError, InputFormatError, RicError
from .formats import GraphRecord, read_graphs, write_graphs
from .formats.jsonl import dumps_record
from .graph import Graph
from .reconstructor import (
    ModelHyper,
    ModelParams,
    TrainConfig,
    evaluate,
    train,
    write_training_log,
)
from .reconstructor.training import EpochLog
from .rigidity import BRUTE_FORCE_MAX_N, count_well_constrained_subgraphs, is_laman
from .stats import EvalConfig, eval_report, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


@dataclass
class RunManifest:
    """What a run did, enough to repeat it."""
    subcommand: str
    flags: dict[str, Any]
    seed: int | None
    version: str = __version__
    inputs: dict[str, str] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    wall_time_s: float = 0.0
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "subcommand": self.subcommand,
            "flags": self.flags,
            "seed": self.seed,
            "version": self.version,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "wall_time_s": self.wall_time_s,
            **self.extra,
        }


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunContext:
    """Per-invocation state handed to each subcommand."""
    args: argparse.Namespace
    jobs: int
    inputs: list[Path] = field(default_factory=list)
    outputs: list[Path] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def read(self, path: str | Path) -> list[GraphRecord]:
        self.inputs.append(Path(path))
        return read_graphs(path)

    def wrote(self, *paths: Path) -> None:
        self.outputs.extend(paths)


# -- subcommands ------------------------------------------------------------


def _cmd_gen_data(ctx: RunContext) -> int:
    a = ctx.args
    p_low, p_high = PRESETS[a.preset]
    cfg = DatagenConfig(
        count=a.count,
        n_mean=a.n_mean,
        n_std=a.n_std,
        p_low=p_low if a.p_low is None else a.p_low,
        p_high=p_high if a.p_high is None else a.p_high,
        n_floor=a.n_floor,
        n_cap=a.n_cap,
        record_moves=a.record_moves,
    )
    records = generate_dataset(cfg, np.random.default_rng(a.seed), jobs=ctx.jobs)
    write_graphs(a.out, records, a.format)
    ctx.wrote(Path(a.out))
    return EXIT_OK


def _milestones(raw: str, epochs: int) -> tuple[int, ...]:
    try:
        values = [int(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"--milestones must be comma-separated integers, got {raw!r}") from None
    kept = tuple(e for e in values if 1 <= e < epochs)
    if len(kept) != len(values):
        dropped = sorted(set(values) - set(kept))
        logger.info(f"Dropped milestones outside 1..{epochs - 1}: {dropped}")
    return kept


def _corruption_cfg(a: argparse.Namespace) -> CorruptionConfig:
    return CorruptionConfig(mean_steps=a.mean_steps, size_min=a.size_min, size_max=a.size_max)


def _cmd_train(ctx: RunContext) -> int:
    a = ctx.args
    graphs = [r.graph for r in ctx.read(a.data)]
    cfg = TrainConfig(
        epochs=a.epochs,
        batch_size=a.batch_size,
        step_size=a.step_size,
        warmup_epochs=a.warmup_epochs,
        milestones=_milestones(a.milestones, a.epochs),
        scale_step_size=a.scale_step_size,
        corruption=_corruption_cfg(a),
        hyper=ModelHyper(hidden=a.hidden, rounds=a.rounds),
        seed=a.seed,
    )
    if not 0.0 <= a.holdout < 1.0:
        raise ConfigError(f"--holdout must be in [0, 1), got {a.holdout}")
    require_within_bounds(graphs, cfg.corruption, "Graph")

    rng = np.random.default_rng(a.seed)
    held: list[Graph] = []
    if a.holdout > 0:
        order = rng.permutation(len(graphs))
        cut = int(round(a.holdout * len(graphs)))
        held = [graphs[i] for i in order[:cut]]
        graphs = [graphs[i] for i in order[cut:]]

    log: list[EpochLog] = []
    params = train(graphs, cfg, rng, jobs=ctx.jobs, log=log)
    params.save(a.out)
    log_path = Path(a.log) if a.log else Path(f"{a.out}.log.csv")
    write_training_log(log_path, log)
    ctx.wrote(Path(a.out), log_path)
    ctx.extra["train_config"] = cfg.to_dict()

    if held:
        report = evaluate(params, held, cfg.corruption, rng)
        eval_path = Path(f"{a.out}.eval.json")
        with open(eval_path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(report.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(
            f"Held-out loss {report.loss:.4f} (uniform {report.uniform_loss:.4f}), "
            f"top-1 accuracy {report.accuracy:.3f}"
        )
        ctx.wrote(eval_path)
    return EXIT_OK


def _cmd_sample(ctx: RunContext) -> int:
    a = ctx.args
    ctx.inputs.append(Path(a.model))
    params = ModelParams.load(a.model)
    pool = [r.graph for r in ctx.read(a.data)]
    cfg = ChainConfig(
        transitions=a.transitions,
        chains=a.chains,
        corruption=_corruption_cfg(a),
        max_reconstruction_steps=a.max_steps,
        resample_transition_retries=a.retries,
        seed=a.seed,
        burn_in=a.burn_in,
        thin=a.thin,
    )
    records = run_chains(pool, params, cfg, jobs=ctx.jobs)
    write_graphs(a.out, [
        GraphRecord(graph=r.reconstructed, id=f"c{r.chain}-t{r.index}") for r in records
    ])
    trace_path = Path(a.trace) if a.trace else Path(f"{a.out}.trace.jsonl")
    write_trace(trace_path, records, cfg)
    ctx.wrote(Path(a.out), trace_path)
    ctx.extra["layout"] = {"chains": cfg.chains, "transitions": cfg.transitions}
    return EXIT_OK


def _cmd_eval(ctx: RunContext) -> int:
    a = ctx.args
    samples = [r.graph for r in ctx.read(a.samples)]
    reference = [r.graph for r in ctx.read(a.reference)]
    cfg = EvalConfig(
        reps=a.reps,
        seed=a.seed,
        max_n=a.max_n,
        skip_intractable=a.skip_intractable,
        er_count=a.er_count,
    )
    report = eval_report(samples, reference, cfg, jobs=ctx.jobs)
    ctx.wrote(*write_report(report, a.out_dir))
    return EXIT_OK


def _emit(ctx: RunContext, lines: Sequence[str]) -> None:
    text = "".join(line + "\n" for line in lines)
    if ctx.args.out:
        with open(ctx.args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        ctx.wrote(Path(ctx.args.out))
    else:
        sys.stdout.write(text)


def _cmd_check(ctx: RunContext) -> int:
    records = ctx.read(ctx.args.input)
    _emit(ctx, ["true" if r.graph.n >= 2 and is_laman(r.graph) else "false" for r in records])
    return EXIT_OK


def _cmd_dod(ctx: RunContext) -> int:
    a = ctx.args
    lines = [
        repr(count_well_constrained_subgraphs(r.graph, min_size=a.min_size, max_n=a.max_n).dod)
        for r in ctx.read(a.input)
    ]
    _emit(ctx, lines)
    return EXIT_OK


def _cmd_corrupt(ctx: RunContext) -> int:
    a = ctx.args
    cfg = _corruption_cfg(a)
    rng = np.random.default_rng(a.seed)
    lines = []
    for r in ctx.read(a.input):
        trace = corrupt(r.graph, cfg, rng)
        entry = trace.to_dict()
        if r.id is not None:
            entry["id"] = r.id
        lines.append(dumps_record(entry))
    _emit(ctx, lines)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _add_corruption_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mean-steps", type=float, default=5.0,
                   help="Expected corruption length (default: 5)")
    p.add_argument("--size-min", type=int, default=3, help="Minimum node count (default: 3)")
    p.add_argument("--size-max", type=int, default=100, help="Maximum node count (default: 100)")


def build_parser(config: RicConfig | None = None) -> argparse.ArgumentParser:
    config = config or RicConfig()
    parser = argparse.ArgumentParser(
        prog="laman-ric",
        description="Generative model over Laman graphs by reversing inductive corruptions",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="YAML config file (flag defaults per subcommand)")
    parser.add_argument("--jobs", type=int, default=config.jobs,
                        help=f"Worker threads (default: {config.jobs})")
    sub = parser.add_subparsers(dest="command", required=True)

    handlers: dict[str, Callable[[RunContext], int]] = {}

    p = sub.add_parser("gen-data", help="Generate a synthetic Laman dataset")
    p.add_argument("--count", type=int, required=True, help="Number of graphs")
    p.add_argument("--preset", choices=sorted(PRESETS), default="low",
                   help="Type-I probability range (default: low)")
    p.add_argument("--n-mean", type=float, default=30.0, help="Mean node count (default: 30)")
    p.add_argument("--n-std", type=float, default=5.0, help="Node count std (default: 5)")
    p.add_argument("--n-floor", type=int, default=3, help="Smallest node count (default: 3)")
    p.add_argument("--n-cap", type=int, default=None, help="Largest node count")
    p.add_argument("--p-low", type=float, default=None, help="Override the preset's lower p")
    p.add_argument("--p-high", type=float, default=None, help="Override the preset's upper p")
    p.add_argument("--record-moves", action="store_true",
                   help="Store each graph's Henneberg sequence")
    p.add_argument("--format", choices=["jsonl", "parquet"], default=None,
                   help="Output format (default: from suffix)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    handlers["gen-data"] = _cmd_gen_data

    p = sub.add_parser("train", help="Train a reconstruction model")
    p.add_argument("--data", required=True, help="Training graphs")
    p.add_argument("--out", required=True, help="Checkpoint path")
    p.add_argument("--log", default=None, help="Training log CSV (default: <out>.log.csv)")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=256)
    p.add_argument("--step-size", type=float, default=2e-3)
    p.add_argument("--warmup-epochs", type=int, default=5)
    p.add_argument("--milestones", default="12,24,36",
                   help="Epochs after which the step size is divided by 10")
    p.add_argument("--scale-step-size", action="store_true",
                   help="Scale the step size linearly with batch size / 128")
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--rounds", type=int, default=5)
    p.add_argument("--holdout", type=float, default=0.0,
                   help="Fraction of graphs held out for evaluation")
    _add_corruption_flags(p)
    p.add_argument("--seed", type=int, default=0)
    handlers["train"] = _cmd_train

    p = sub.add_parser("sample", help="Run sampling chains")
    p.add_argument("--model", required=True, help="Checkpoint path")
    p.add_argument("--data", required=True, help="Seed pool graphs")
    p.add_argument("--transitions", type=int, default=1000)
    p.add_argument("--chains", type=int, default=20)
    p.add_argument("--max-steps", type=int, default=30, help="Reconstruction step limit")
    p.add_argument("--retries", type=int, default=5, help="Whole-transition redraws")
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--burn-in", type=int, default=0)
    _add_corruption_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", default=None, help="Trace sidecar (default: <out>.trace.jsonl)")
    handlers["sample"] = _cmd_sample

    p = sub.add_parser("eval", help="Compare samples with a reference dataset")
    p.add_argument("--samples", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--max-n", type=int, default=BRUTE_FORCE_MAX_N)
    p.add_argument("--skip-intractable", action="store_true",
                   help="Skip graphs too large for exact DoD instead of failing")
    p.add_argument("--er-count", type=int, default=None,
                   help="Baseline graphs (default: number of samples)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    handlers["eval"] = _cmd_eval

    p = sub.add_parser("check", help="Print true/false per graph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None)
    handlers["check"] = _cmd_check

    p = sub.add_parser("dod", help="Print the degree of decomposability per graph")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--min-size", type=int, default=3)
    p.add_argument("--max-n", type=int, default=BRUTE_FORCE_MAX_N)
    p.add_argument("--out", default=None)
    handlers["dod"] = _cmd_dod

    p = sub.add_parser("corrupt", help="Emit corruption traces as JSON")
    p.add_argument("--in", dest="input", required=True)
    _add_corruption_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    handlers["corrupt"] = _cmd_corrupt

    for name, handler in handlers.items():
        sub.choices[name].set_defaults(handler=handler, **config.defaults_for(name))
    return parser


def _manifest_path(args: argparse.Namespace) -> Path | None:
    if getattr(args, "out_dir", None):
        return Path(args.out_dir) / "manifest.json"
    if getattr(args, "out", None):
        return Path(f"{args.out}.manifest.json")
    return None


def _configure_logging(level: int) -> None:
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)

    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    try:
        config = RicConfig.load(known.config)
    except (ConfigError, OSError) as e:
        print(f"laman-ric: config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    _configure_logging(config.logging_level)

    parser = build_parser(config)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    ctx = RunContext(args=args, jobs=max(1, args.jobs))
    started = time.perf_counter()
    try:
        code = args.handler(ctx)
    except (InputFormatError, ConfigError, OSError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except RicError as e:
        logger.error(f"{args.command}: {type(e).__name__}: {e}")
        return EXIT_DOMAIN

    flags = {k: v for k, v in sorted(vars(args).items()) if k != "handler"}
    manifest = RunManifest(
        subcommand=args.command,
        flags=flags,
        seed=getattr(args, "seed", None),
        inputs={str(p): sha256_file(p) for p in ctx.inputs},
        outputs={str(p): sha256_file(p) for p in ctx.outputs},
        wall_time_s=round(time.perf_counter() - started, 3),
        extra=ctx.extra,
    )
    path = _manifest_path(args)
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(manifest.to_dict(), f, indent=2, sort_keys=True)
            f.write("\n")
    else:
        logger.info(f"Manifest: {json.dumps(manifest.to_dict(), sort_keys=True)}")
    return code

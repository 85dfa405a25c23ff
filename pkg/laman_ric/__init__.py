"""
laman-ric

Learns and samples a generative model over Laman graphs: a Markov chain
alternating a fixed validity-preserving corruption with a learned
reconstruction, so every visited graph is Laman.

Usage:
    import numpy as np
    from laman_ric import (
        DatagenConfig, TrainConfig, ChainConfig,
        generate_dataset, train, run_chains, is_laman,
    )

    rng = np.random.default_rng(0)
    data = generate_dataset(DatagenConfig(count=200, n_mean=12, n_std=2, n_cap=16), rng)
    params = train([r.graph for r in data], TrainConfig(epochs=10, milestones=()), rng)

    records = run_chains([r.graph for r in data], params, ChainConfig(transitions=50, chains=4))
    assert all(is_laman(r.reconstructed) for r in records)

Command line:
    laman-ric gen-data --count 2000 --n-mean 12 --n-std 2 --n-cap 16 --out data.jsonl
    laman-ric train --data data.jsonl --out model.json --epochs 10
    laman-ric sample --model model.json --data data.jsonl --out samples.jsonl
    laman-ric eval --samples samples.jsonl --reference data.jsonl --out-dir report/
"""

__version__ = "0.1.0"

from .chain import ChainConfig, ChainRecord, run_chain, run_chains, subsample
from .config import RicConfig
from .corrupter import CorruptionConfig, CorruptionTrace, corrupt, sample_length
from .datagen import DatagenConfig, generate_dataset, generate_laman, replay
from .errors import (
    ConfigError,
    IllegalMove,
    InputFormatError,
    MaxStepsExceeded,
    NotLaman,
    RetryBudgetExhausted,
    RicError,
)
from .formats import GraphRecord, read_graphs, write_graphs
from .graph import Graph, complete_graph, from_edge_list, induced_subgraph, wl_fingerprint
from .moves import (
    DeleteI,
    DeleteII,
    InsertI,
    InsertII,
    MoveReceipt,
    apply,
    enumerate_legal,
    inverse,
)
from .reconstructor import (
    ModelHyper,
    ModelParams,
    TrainConfig,
    sample_reconstruction,
    score_actions,
    train,
)
from .rigidity import (
    DodResult,
    brute_force_is_laman,
    can_add_edge,
    count_well_constrained_subgraphs,
    is_laman,
)
from .stats import EvalConfig, bootstrap_ks, eval_report, ks_statistic, validity_rate

__all__ = [
    "__version__",
    # Graphs
    "Graph",
    "complete_graph",
    "from_edge_list",
    "induced_subgraph",
    "wl_fingerprint",
    "GraphRecord",
    "read_graphs",
    "write_graphs",
    # Rigidity
    "DodResult",
    "brute_force_is_laman",
    "can_add_edge",
    "count_well_constrained_subgraphs",
    "is_laman",
    # Moves
    "DeleteI",
    "DeleteII",
    "InsertI",
    "InsertII",
    "MoveReceipt",
    "apply",
    "enumerate_legal",
    "inverse",
    # Pipeline
    "CorruptionConfig",
    "CorruptionTrace",
    "corrupt",
    "sample_length",
    "DatagenConfig",
    "generate_dataset",
    "generate_laman",
    "replay",
    "ModelHyper",
    "ModelParams",
    "TrainConfig",
    "sample_reconstruction",
    "score_actions",
    "train",
    "ChainConfig",
    "ChainRecord",
    "run_chain",
    "run_chains",
    "subsample",
    "EvalConfig",
    "bootstrap_ks",
    "eval_report",
    "ks_statistic",
    "validity_rate",
    "RicConfig",
    # Exceptions
    "RicError",
    "ConfigError",
    "IllegalMove",
    "InputFormatError",
    "MaxStepsExceeded",
    "NotLaman",
    "RetryBudgetExhausted",
]

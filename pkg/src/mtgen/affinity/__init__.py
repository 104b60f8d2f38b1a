"""Multi-target affinity: oracles, threshold filtering, decay and patience."""

from mtgen.affinity.oracle import (
    AffinityOracle,
    CsvOracle,
    FixedSetResult,
    MockOracle,
    ScoreCache,
    build_fixed_set,
    default_targets,
    load_mock_references,
    read_scores_csv,
    write_scores_csv,
)
from mtgen.affinity.thresholds import (
    ScoreRecord,
    Target,
    ThresholdState,
    decay,
    evaluate,
    run_schedule,
    step,
    update_patience,
)

__all__ = [
    "AffinityOracle",
    "CsvOracle",
    "FixedSetResult",
    "MockOracle",
    "ScoreCache",
    "ScoreRecord",
    "Target",
    "ThresholdState",
    "build_fixed_set",
    "decay",
    "default_targets",
    "evaluate",
    "load_mock_references",
    "read_scores_csv",
    "run_schedule",
    "step",
    "update_patience",
    "write_scores_csv",
]

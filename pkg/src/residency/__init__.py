"""Exact inference of residence histories from location traces."""

from .errors import (
    ConfigError,
    EmptyHistory,
    EmptyInput,
    HistoryLengthMismatch,
    InstanceTooLarge,
    InsufficientData,
    InvalidWarpedHistory,
    ParseError,
    ResidencyError,
    UsageError,
)
from .model import (
    DEFAULT_COST,
    DEFAULT_EPOCH,
    UNKNOWN,
    Algorithm,
    Alphabet,
    CostModel,
    LocationHistory,
    Mode,
    QInterpretation,
    ResidenceHistory,
    ResidenceSegment,
    SolverConfig,
    TimeWarpedHistory,
    Violation,
    score,
    unwarp,
    validate,
    warp,
)
from .exact import (
    DpCell,
    Solution,
    candidate_boundaries,
    dp_cells,
    q_set,
    solve,
    solve_candidate,
    solve_daylevel,
    solve_warped,
)
from .oracle import OptimaSet, enumerate_feasible, solve_bruteforce
from .modal import ModalConfig, solve_modal
from .synth import (
    CompareReport,
    EvalReport,
    GenConfig,
    SolverSpec,
    SplitMix64,
    compare,
    evaluate,
    generate,
)
from ._backend import backend_name, compiled_available, use_backend

__version__ = "0.1.0"

"""Top-down interpretation with indexing, deterministic closure and delay patterns."""

from selective_magic_parser.topdown.control import (
    DEFAULT_INDEX,
    ControlSpec,
    DelayPattern,
    IndexKey,
    Requirement,
    is_delayed,
    load_delays,
    load_index,
    make_control,
)
from selective_magic_parser.topdown.indexing import ClauseIndex, clause_lookup
from selective_magic_parser.topdown.interpreter import (
    DEFAULT_MAX_DEPTH,
    ResolutionState,
    Selection,
    TopDownInterpreter,
    TopDownSolution,
    TopDownStatistics,
    td_interpret,
)

__all__ = [
    "DEFAULT_INDEX",
    "DEFAULT_MAX_DEPTH",
    "ClauseIndex",
    "ControlSpec",
    "DelayPattern",
    "IndexKey",
    "Requirement",
    "ResolutionState",
    "Selection",
    "TopDownInterpreter",
    "TopDownSolution",
    "TopDownStatistics",
    "clause_lookup",
    "is_delayed",
    "load_delays",
    "load_index",
    "make_control",
    "td_interpret",
]

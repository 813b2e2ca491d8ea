"""Semi-naive bottom-up evaluation with tabling and delayed-goal pass-through."""

from selective_magic_parser.bottomup.engine import (
    BottomUpEngine,
    EngineLimits,
    collect_answers,
    is_contiguous,
    phonology_admits,
)
from selective_magic_parser.bottomup.naive import naive_answers, naive_fixpoint
from selective_magic_parser.bottomup.table import Agenda, AgendaDiscipline, Table, prunes
from selective_magic_parser.bottomup.trace import EVENTS, Tracer

__all__ = [
    "EVENTS",
    "Agenda",
    "AgendaDiscipline",
    "BottomUpEngine",
    "EngineLimits",
    "Table",
    "Tracer",
    "collect_answers",
    "is_contiguous",
    "naive_answers",
    "naive_fixpoint",
    "phonology_admits",
    "prunes",
]

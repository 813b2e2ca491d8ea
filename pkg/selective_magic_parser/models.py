"""Data models for derived edges and parse output."""

import json
from dataclasses import asdict, dataclass, field

from selective_magic_parser.grammar import Literal, format_literals, freeze_literals
from selective_magic_parser.tfl import NodePool, Signature, Workspace


@dataclass(frozen=True)
class Edge:
    """A derived fact together with the goals still delayed for it.

    Fact and delayed goals share one pool, so a delayed goal can still be
    instantiated through the fact.
    """

    pool: NodePool
    fact: Literal
    delayed: tuple[Literal, ...] = ()
    number: int = -1

    @property
    def relation(self) -> str:
        return self.fact.relation

    @property
    def literals(self) -> tuple[Literal, ...]:
        return (self.fact, *self.delayed)

    @classmethod
    def from_workspace(
        cls, ws: Workspace, fact: Literal, delayed: tuple[Literal, ...] | list[Literal] = ()
    ) -> "Edge":
        pool, literals = freeze_literals(ws, [fact, *delayed])
        return cls(pool, literals[0], tuple(literals[1:]))

    def texts(self, sig: Signature) -> list[str]:
        return format_literals(sig, self.pool, self.literals)

    def to_text(self, sig: Signature) -> str:
        fact, *delayed = self.texts(sig)
        if not delayed:
            return fact
        return f"{fact} [delayed: {', '.join(delayed)}]"


@dataclass
class FlounderedAnswer:
    """An edge for the goal that still carries undischarged delayed goals."""

    fact: str
    delayed: list[str]


@dataclass
class ParseStatistics:
    """Counters collected over one parse."""

    match_calls: int = 0
    derivations: int = 0
    edges_stored: int = 0
    edges_pruned: int = 0
    edges_retired: int = 0
    agenda_pops: int = 0
    topdown_steps: int = 0
    choice_points: int = 0

    def add_topdown(self, steps: int, choice_points: int) -> None:
        self.topdown_steps += steps
        self.choice_points += choice_points


@dataclass
class ParseResult:
    """Complete result of parsing one sentence with one strategy."""

    strategy: str
    sentence: list[str]
    answers: list[str]
    floundered: list[FlounderedAnswer] = field(default_factory=list)
    statistics: ParseStatistics = field(default_factory=ParseStatistics)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and bool(self.answers)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        result = {
            "strategy": self.strategy,
            "sentence": self.sentence,
            "answers": self.answers,
            "floundered": [asdict(f) for f in self.floundered],
            "statistics": asdict(self.statistics),
        }
        if self.error is not None:
            result["error"] = self.error
        return result

    def to_json(self, indent: int | None = 2) -> str:
        """Serialize to JSON string."""
        return json.dumps(self.to_dict(), indent=indent)

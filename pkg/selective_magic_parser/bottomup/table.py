"""The edge table and the agenda."""

import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import replace
from enum import StrEnum

from selective_magic_parser.models import Edge
from selective_magic_parser.tfl import Signature, subsumes_roots

logger = logging.getLogger(__name__)


def _roots(edge: Edge) -> list[int]:
    return [a for lit in edge.literals for a in lit.args]


def prunes(sig: Signature, general: Edge, specific: Edge) -> bool:
    """True if ``specific`` adds nothing to a table already holding ``general``.

    Without delayed goals, fact subsumption decides. Otherwise the delayed
    relations must line up and one mapping has to cover the fact and the
    delayed goals together.
    """
    if general.fact.key != specific.fact.key:
        return False
    if not general.delayed:
        return subsumes_roots(
            sig, general.pool, general.fact.args, specific.pool, specific.fact.args
        )
    if [d.key for d in general.delayed] != [d.key for d in specific.delayed]:
        return False
    return subsumes_roots(sig, general.pool, _roots(general), specific.pool, _roots(specific))


class Table:
    """Stored edges by number, with retired edges kept but no longer live."""

    def __init__(self, signature: Signature):
        self.signature = signature
        self.edges: list[Edge] = []
        self.retired: set[int] = set()
        self._by_relation: dict[str, list[int]] = {}

    def __len__(self) -> int:
        return len(self.edges) - len(self.retired)

    def __iter__(self) -> Iterator[Edge]:
        return (e for e in self.edges if e.number not in self.retired)

    def is_live(self, number: int) -> bool:
        return number not in self.retired

    def live(self, relation: str) -> Iterator[Edge]:
        for number in self._by_relation.get(relation, ()):
            if number not in self.retired:
                yield self.edges[number]

    def pruner_of(self, edge: Edge) -> Edge | None:
        for stored in self.live(edge.relation):
            if prunes(self.signature, stored, edge):
                return stored
        return None

    def pruned_by(self, edge: Edge) -> list[Edge]:
        return [s for s in self.live(edge.relation) if prunes(self.signature, edge, s)]

    def add(self, edge: Edge) -> Edge:
        numbered = replace(edge, number=len(self.edges))
        self.edges.append(numbered)
        self._by_relation.setdefault(edge.relation, []).append(numbered.number)
        return numbered

    def retire(self, number: int) -> None:
        self.retired.add(number)
        logger.debug(f"Retired edge {number}, {len(self)} live")

    def subsumption_violations(self) -> list[tuple[int, int]]:
        """Pairs (a, b) of live edges where a prunes b; empty for a well-kept table."""
        live = list(self)
        return [
            (a.number, b.number)
            for a in live
            for b in live
            if a.number != b.number and prunes(self.signature, a, b)
        ]


class AgendaDiscipline(StrEnum):
    FIFO = "fifo"
    LIFO = "lifo"


class Agenda:
    """Edges waiting to be combined with the table."""

    def __init__(self, discipline: AgendaDiscipline = AgendaDiscipline.FIFO):
        self.discipline = AgendaDiscipline(discipline)
        self._queue: deque[Edge] = deque()

    def __len__(self) -> int:
        return len(self._queue)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._queue)

    def extend(self, edges: Iterable[Edge]) -> None:
        """FIFO appends at the back; LIFO puts the batch in front, keeping its order."""
        batch = list(edges)
        if self.discipline is AgendaDiscipline.FIFO:
            self._queue.extend(batch)
        else:
            self._queue.extendleft(reversed(batch))

    def pop(self) -> Edge:
        return self._queue.popleft()

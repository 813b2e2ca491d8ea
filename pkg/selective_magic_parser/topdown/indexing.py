"""Clause indexing on user-chosen argument paths."""

import logging
from collections.abc import Sequence

from selective_magic_parser.grammar import DefiniteClause, Grammar, Literal, Query
from selective_magic_parser.tfl import Signature, Workspace
from selective_magic_parser.topdown.control import ControlSpec, IndexKey

logger = logging.getLogger(__name__)


class ClauseIndex:
    """Per-relation clause lists with the head types found at each index key.

    Lookup only drops a clause when the goal and the clause head carry types
    without a meet at the same key, so every clause whose head could unify
    with the goal is kept.
    """

    def __init__(self, grammar: Grammar, control: ControlSpec | None = None):
        self.signature: Signature = grammar.signature
        self.control = control or ControlSpec()
        self._entries: dict[str, list[tuple[DefiniteClause, tuple[str | None, ...]]]] = {}
        for clause in grammar.clauses:
            head = clause.head
            keys = self.control.keys_for(head)
            types = tuple(self._clause_type(clause, key) for key in keys)
            self._entries.setdefault(head.key, []).append((clause, types))
        logger.debug(f"Clause index built for {len(self._entries)} relations")

    def _clause_type(self, clause: DefiniteClause, key: IndexKey) -> str | None:
        node = clause.head.args[key.argument - 1]
        return clause.pool.type_at(self.signature, node, key.path)

    def candidates(self, ws: Workspace, goal: Literal) -> list[DefiniteClause]:
        """Clauses for a goal living in ``ws``, in grammar order."""
        entries = self._entries.get(goal.key)
        if not entries:
            return []
        keys = self.control.keys_for(goal)
        goal_types = [ws.type_at(goal.args[k.argument - 1], k.path) for k in keys]
        sig = self.signature
        return [
            clause
            for clause, types in entries
            if all(
                g is None or c is None or sig.meet(g, c) is not None
                for g, c in zip(goal_types, types, strict=True)
            )
        ]


def clause_lookup(
    goal: Query, grammar: Grammar, control: ControlSpec | None = None
) -> Sequence[DefiniteClause]:
    """Index-filtered candidate clauses for a standalone goal."""
    ws = Workspace(grammar.signature)
    offset = ws.load(goal.pool)
    return ClauseIndex(grammar, control).candidates(ws, goal.literal.shifted(offset))

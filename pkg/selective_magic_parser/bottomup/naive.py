"""Naive bottom-up fixpoint, kept as an independent reference for the semi-naive engine.

Every round applies every clause to every combination of table edges until a
round adds nothing new. There is no agenda, no phonology filter and no
bookkeeping of which edges were already combined.
"""

import logging
from collections.abc import Iterator, Sequence

from selective_magic_parser.bottomup.engine import collect_answers
from selective_magic_parser.bottomup.table import Table
from selective_magic_parser.errors import ResourceLimitExceeded
from selective_magic_parser.grammar import Literal, Query
from selective_magic_parser.magic import CompiledClause, MagicGrammar, make_seed
from selective_magic_parser.models import Edge
from selective_magic_parser.tfl import Workspace
from selective_magic_parser.topdown import ControlSpec, TopDownInterpreter

logger = logging.getLogger(__name__)


def _bind(
    ws: Workspace, literals: Sequence[Literal], edges: Sequence[Edge]
) -> Iterator[list[Literal]]:
    if not literals:
        yield []
        return
    literal, *more = literals
    for edge in edges:
        if edge.fact.key != literal.key:
            continue
        start = ws.mark()
        offset = ws.load(edge.pool)
        if all(
            ws.unify(a, b + offset) is None
            for a, b in zip(literal.args, edge.fact.args, strict=True)
        ):
            for delayed in _bind(ws, more, edges):
                yield [*(d.shifted(offset) for d in edge.delayed), *delayed]
        ws.undo(start)


def _apply(
    compiled: CompiledClause, edges: Sequence[Edge], interpreter: TopDownInterpreter
) -> list[Edge]:
    clause = compiled.clause
    ws = Workspace(interpreter.signature)
    offset = ws.load(clause.pool)
    body = [lit.shifted(offset) for lit in clause.body]
    head = clause.head.shifted(offset)
    tabled = [body[p] for p in compiled.tabled_positions]
    rest = [lit for p, lit in enumerate(body) if p not in compiled.tabled_positions]
    derived = []
    for delayed in _bind(ws, tabled, edges):
        for residue in interpreter.solve(ws, [*delayed, *rest]):
            derived.append(Edge.from_workspace(ws, head, residue))
    return derived


def naive_fixpoint(
    grammar: MagicGrammar,
    goal: Query,
    control: ControlSpec | None = None,
    *,
    max_rounds: int = 1000,
    max_depth: int = 512,
) -> Table:
    """Table reached by exhaustive rounds from the seed and all unit clauses."""
    sig = grammar.signature
    interpreter = TopDownInterpreter(grammar.source, control, max_depth=max_depth)
    table = Table(sig)

    def insert(edge: Edge) -> bool:
        if table.pruner_of(edge) is not None:
            return False
        stored = table.add(edge)
        for old in table.pruned_by(stored):
            if old.number != stored.number:
                table.retire(old.number)
        return True

    insert(make_seed(goal, grammar.policy))
    for clause in grammar.source.facts:
        insert(Edge(clause.pool, clause.head))
    for round_number in range(1, max_rounds + 1):
        snapshot = list(table)
        added = 0
        for compiled in grammar.bottom_up:
            for edge in _apply(compiled, snapshot, interpreter):
                added += insert(edge)
        logger.debug(f"Naive round {round_number}: {added} new edges")
        if not added:
            return table
    raise ResourceLimitExceeded("naive round", max_rounds)


def naive_answers(
    grammar: MagicGrammar, goal: Query, control: ControlSpec | None = None
) -> list[str]:
    answers, _floundered = collect_answers(
        grammar.signature, naive_fixpoint(grammar, goal, control), goal
    )
    return answers

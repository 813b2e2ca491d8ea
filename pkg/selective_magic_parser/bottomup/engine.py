"""Semi-naive bottom-up evaluation of a magic-compiled grammar.

Edges popped from the agenda are combined with the table through the clauses
whose tabled body literals they fit. Remaining untabled literals, together
with any goals the premises had delayed, go to the top-down interpreter; each
of its solutions becomes a new edge carrying whatever it left delayed.
"""

import logging
from collections import Counter
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

from selective_magic_parser.bottomup.table import Agenda, AgendaDiscipline, Table
from selective_magic_parser.bottomup.trace import Tracer
from selective_magic_parser.errors import ResourceLimitExceeded
from selective_magic_parser.grammar import (
    DefiniteClause,
    Literal,
    Query,
    format_literals,
    freeze_literals,
    list_types,
)
from selective_magic_parser.magic import ClauseRole, CompiledClause, MagicGrammar, make_seed
from selective_magic_parser.models import Edge, FlounderedAnswer, ParseResult, ParseStatistics
from selective_magic_parser.tfl import Path, Signature, Workspace
from selective_magic_parser.topdown import ControlSpec, TopDownInterpreter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineLimits:
    max_edges: int = 100_000
    max_steps: int = 1_000_000
    max_depth: int = 512


def is_contiguous(part: Sequence[str], whole: Sequence[str]) -> bool:
    """True iff ``part`` occurs as an unbroken run inside ``whole``."""
    width = len(part)
    return any(tuple(whole[i : i + width]) == tuple(part) for i in range(len(whole) - width + 1))


def phonology_admits(
    sig: Signature, clause: DefiniteClause, phon: Sequence[str], phon_path: Path
) -> bool:
    """Whether a unit clause may enter the table for input ``phon``.

    Every argument whose phonology is a closed list must find it inside the
    input; arguments without phonology, or with an open list, do not restrict.
    """
    for arg in clause.head.args:
        node = clause.pool.node_at(arg, phon_path)
        if node is None:
            continue
        words = list_types(sig, clause.pool, node)
        if words is not None and not is_contiguous(words, phon):
            return False
    return True


def _load_edge(ws: Workspace, literal: Literal, edge: Edge) -> list[Literal] | None:
    """Unify ``literal`` with the edge's fact; return the edge's delayed goals.

    On a clash the workspace is left unchanged and None is returned.
    """
    start = ws.mark()
    offset = ws.load(edge.pool)
    for mine, theirs in zip(literal.args, edge.fact.args, strict=True):
        if ws.unify(mine, theirs + offset) is not None:
            ws.undo(start)
            return None
    return [d.shifted(offset) for d in edge.delayed]


def collect_answers(
    sig: Signature, table: Table, goal: Query
) -> tuple[list[str], list[FlounderedAnswer]]:
    """Live edges for the goal's relation that unify with it.

    Edges with nothing delayed give answers; the rest give floundered entries.
    """
    ws = Workspace(sig)
    target = goal.literal.shifted(ws.load(goal.pool))
    answers: set[str] = set()
    floundered: dict[tuple[str, ...], FlounderedAnswer] = {}
    for edge in table.live(target.relation):
        if edge.fact.key != target.key:
            continue
        start = ws.mark()
        delayed = _load_edge(ws, target, edge)
        if delayed is None:
            continue
        pool, literals = freeze_literals(ws, [target, *delayed])
        texts = format_literals(sig, pool, literals)
        if delayed:
            floundered[tuple(texts)] = FlounderedAnswer(texts[0], texts[1:])
        else:
            answers.add(texts[0])
        ws.undo(start)
    return sorted(answers), [floundered[k] for k in sorted(floundered)]


class BottomUpEngine:
    """One parse session over a compiled grammar; not shared between threads."""

    def __init__(
        self,
        grammar: MagicGrammar,
        control: ControlSpec | None = None,
        *,
        limits: EngineLimits | None = None,
        agenda: AgendaDiscipline = AgendaDiscipline.FIFO,
        closure: bool = True,
        phon_path: Path = ("phon",),
        tracer: Tracer | None = None,
    ):
        self.grammar = grammar
        self.signature = grammar.signature
        self.limits = limits or EngineLimits()
        self.discipline = AgendaDiscipline(agenda)
        self.phon_path = phon_path
        self.tracer = tracer or Tracer()
        self.topdown = TopDownInterpreter(
            grammar.source, control, closure=closure, max_depth=self.limits.max_depth
        )
        self.reset()

    def reset(self) -> None:
        self.table = Table(self.signature)
        self.agenda = Agenda(self.discipline)
        self.statistics = ParseStatistics()
        self.reductions: Counter[tuple[str, tuple[int, ...]]] = Counter()
        self.active: list[CompiledClause] = list(self.grammar.bottom_up)
        self._processed: dict[int, int] = {}
        self._pending: list[Edge] = []
        self.table_checks = 0
        self.table_violations: list[tuple[int, int]] = []

    def _text(self, edge: Edge):
        return lambda: edge.to_text(self.signature)

    def initialize(self, goal: Query, phon: Sequence[str] | None = None) -> list[Edge]:
        """Seed plus the unit clauses the phonology filter lets through.

        Unit clauses kept out also lose their magic variants, so they cannot
        come back through magic facts. ``phon=None`` switches the filter off.
        """
        self.reset()
        seed = make_seed(goal, self.grammar.policy)
        self.tracer.emit("SEED", self._text(seed))
        initial = [seed]
        excluded = set()
        for clause in self.grammar.source.facts:
            if phon is None or phonology_admits(self.signature, clause, phon, self.phon_path):
                edge = Edge(clause.pool, clause.head)
                self.tracer.emit("INIT-FACT", self._text(edge), clause=clause.label)
                initial.append(edge)
            else:
                excluded.add(clause.label)
                self.tracer.emit(
                    "INIT-SKIP", lambda c=clause: c.to_text(self.signature), clause=clause.label
                )
        self.active = [
            c for c in self.grammar.bottom_up if not (c.unit_source and c.origin in excluded)
        ]
        self._pending = initial
        logger.info(
            f"Initialized: {len(initial)} edges, {len(excluded)} unit clauses filtered out"
        )
        return initial

    def run_fixpoint(self) -> Table:
        """Process the agenda until it is empty.

        Raises:
            ResourceLimitExceeded: If the edge or step cap is hit
        """
        self.agenda.extend(self.store(self._pending))
        self._pending = []
        self.agenda.extend(self.store(self._close_unguarded()))
        stats = self.statistics
        while self.agenda:
            edge = self.agenda.pop()
            if not self.table.is_live(edge.number):
                continue
            stats.agenda_pops += 1
            if stats.agenda_pops > self.limits.max_steps:
                raise ResourceLimitExceeded("agenda step", self.limits.max_steps)
            self._processed[edge.number] = len(self._processed)
            self.tracer.emit("POP", edge=edge.number)
            self.agenda.extend(self.store(self.match(edge)))
        td = self.topdown.statistics
        stats.topdown_steps = td.steps
        stats.choice_points = td.choice_points
        logger.info(
            f"Fixpoint reached: {len(self.table)} live edges, {stats.edges_pruned} pruned, "
            f"{stats.match_calls} match calls"
        )
        return self.table

    def _close_unguarded(self) -> list[Edge]:
        """Clauses with a tabled head but no tabled body literal run wholly top-down, once.

        The compiler guards every such clause; only a hand-written compiled
        file can hold one without a guard.
        """
        derived = []
        for compiled in self.active:
            if compiled.tabled_positions or compiled.role is ClauseRole.PASSTHROUGH:
                continue
            clause = compiled.clause
            ws = Workspace(self.signature)
            offset = ws.load(clause.pool)
            self.reductions[compiled.label, ()] += 1
            goals = [lit.shifted(offset) for lit in clause.body]
            for residue in self.topdown.solve(ws, goals):
                head = clause.head.shifted(offset)
                derived.append(self._derived(ws, compiled, head, residue, {}))
        return derived

    def _derived(
        self,
        ws: Workspace,
        compiled: CompiledClause,
        head: Literal,
        residue: list[Literal],
        premises: dict[int, int],
    ) -> Edge:
        edge = Edge.from_workspace(ws, head, residue)
        self.statistics.derivations += 1
        used = ",".join(str(premises[p]) for p in sorted(premises))
        self.tracer.emit("DERIVE", self._text(edge), clause=compiled.label, premises=used or "-")
        return edge

    def match(self, edge: Edge) -> list[Edge]:
        """Every new edge derivable using ``edge`` once plus already processed edges."""
        self.statistics.match_calls += 1
        derived: list[Edge] = []
        for compiled in self.active:
            for position in compiled.tabled_positions:
                if compiled.clause.body[position].key == edge.fact.key:
                    derived.extend(self._fire(compiled, position, edge))
        return derived

    def _fire(self, compiled: CompiledClause, position: int, edge: Edge) -> list[Edge]:
        clause = compiled.clause
        ws = Workspace(self.signature)
        offset = ws.load(clause.pool)
        body = [lit.shifted(offset) for lit in clause.body]
        head = clause.head.shifted(offset)
        delayed = _load_edge(ws, body[position], edge)
        if delayed is None:
            return []
        tabled = set(compiled.tabled_positions)
        others = [(j, body[j]) for j in compiled.tabled_positions if j != position]
        rest = [lit for j, lit in enumerate(body) if j not in tabled]
        derived = []
        for premises, goals in self.collect_edges(
            ws, others, delayed, rest, position, self._processed[edge.number]
        ):
            premises = {position: edge.number, **premises}
            self.reductions[compiled.label, tuple(premises[p] for p in sorted(premises))] += 1
            for residue in self.topdown.solve(ws, goals):
                derived.append(self._derived(ws, compiled, head, residue, premises))
        return derived

    def collect_edges(
        self,
        ws: Workspace,
        pending: Sequence[tuple[int, Literal]],
        delayed: Sequence[Literal],
        rest: Sequence[Literal],
        popped_position: int,
        popped_order: int,
    ) -> Iterator[tuple[dict[int, int], list[Literal]]]:
        """Bind the remaining tabled literals to processed table edges.

        Literals before the popped edge's position only take edges processed
        before it; literals after it may also take the popped edge itself.
        Yields the premise edge numbers by body position and the goals for
        the top-down interpreter: collected delayed goals, then ``rest``.
        """
        if not pending:
            yield {}, [*delayed, *rest]
            return
        (position, literal), *more = pending
        for candidate in list(self.table.live(literal.relation)):
            order = self._processed.get(candidate.number)
            if order is None or candidate.fact.key != literal.key:
                continue
            if order > popped_order or (position < popped_position and order == popped_order):
                continue
            start = ws.mark()
            extra = _load_edge(ws, literal, candidate)
            if extra is None:
                continue
            for premises, goals in self.collect_edges(
                ws, more, [*delayed, *extra], rest, popped_position, popped_order
            ):
                yield {position: candidate.number, **premises}, goals
            ws.undo(start)

    def store(self, new: Sequence[Edge]) -> list[Edge]:
        """Add the edges no live edge prunes; return them numbered, for the agenda.

        Live edges the new edge prunes are retired.

        Raises:
            ResourceLimitExceeded: If more edges than ``max_edges`` get stored
        """
        kept = []
        stats = self.statistics
        for edge in new:
            pruner = self.table.pruner_of(edge)
            if pruner is not None:
                stats.edges_pruned += 1
                self.tracer.emit("PRUNE", self._text(edge), subsumed_by=pruner.number)
                continue
            stored = self.table.add(edge)
            for old in self.table.pruned_by(stored):
                if old.number == stored.number:
                    continue
                self.table.retire(old.number)
                stats.edges_retired += 1
                self.tracer.emit("RETIRE", edge=old.number, by=stored.number)
            stats.edges_stored += 1
            self.tracer.emit("STORE", self._text(stored), edge=stored.number)
            if stats.edges_stored > self.limits.max_edges:
                raise ResourceLimitExceeded("edge", self.limits.max_edges)
            kept.append(stored)
        if kept and logger.isEnabledFor(logging.DEBUG):
            self._check_table()
        return kept

    def _check_table(self) -> None:
        self.table_checks += 1
        violations = self.table.subsumption_violations()
        if violations:
            logger.warning(f"Live edges prune each other after a store: {violations}")
            self.table_violations.extend(violations)
        else:
            logger.debug(f"Table subsumption-free with {len(self.table)} live edges")

    def answers(self, goal: Query) -> tuple[list[str], list[FlounderedAnswer]]:
        return collect_answers(self.signature, self.table, goal)

    def parse(self, goal: Query, phon: Sequence[str] | None = None) -> ParseResult:
        """Initialize, run to the fixpoint and read off the answers."""
        self.initialize(goal, phon)
        self.run_fixpoint()
        answers, floundered = self.answers(goal)
        return ParseResult(
            strategy=str(self.grammar.policy.mode),
            sentence=list(phon or ()),
            answers=answers,
            floundered=floundered,
            statistics=self.statistics,
        )

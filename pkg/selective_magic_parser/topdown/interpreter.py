"""Depth-first interpreter for untabled goals.

Resolution runs on a Workspace with an explicit stack of choice points, so
deep recursion in the grammar never reaches Python's own stack. Goals held
back by delay patterns are set aside and re-checked whenever the workspace
has changed since they were last looked at; goals still waiting when nothing
else is left are handed back as the residue of the solution.
"""

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from selective_magic_parser.errors import DepthLimitExceeded
from selective_magic_parser.grammar import (
    DefiniteClause,
    Grammar,
    Literal,
    Query,
    format_literals,
    freeze_literals,
)
from selective_magic_parser.tfl import Mark, NodePool, Workspace
from selective_magic_parser.topdown.control import ControlSpec
from selective_magic_parser.topdown.indexing import ClauseIndex

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 512


@dataclass
class TopDownStatistics:
    steps: int = 0
    choice_points: int = 0
    solutions: int = 0
    deepest: int = 0


@dataclass(frozen=True)
class Goal:
    literal: Literal
    depth: int = 0


@dataclass(frozen=True)
class Waiting:
    """A delayed goal and the workspace change count when it was last checked."""

    goal: Goal
    checked_at: int


@dataclass(frozen=True)
class ResolutionState:
    goals: tuple[Goal, ...] = ()
    waiting: tuple[Waiting, ...] = ()


@dataclass(frozen=True)
class Selection:
    position: int
    candidates: tuple[DefiniteClause, ...]


@dataclass
class _Frame:
    mark: Mark
    goal: Goal
    rest: tuple[Goal, ...]
    waiting: tuple[Waiting, ...]
    candidates: Iterator[DefiniteClause] = field(default_factory=lambda: iter(()))


class TopDownInterpreter:
    """Resolves goal lists against a grammar with indexing, delays and closure."""

    def __init__(
        self,
        grammar: Grammar,
        control: ControlSpec | None = None,
        *,
        closure: bool = True,
        max_depth: int = DEFAULT_MAX_DEPTH,
        index: ClauseIndex | None = None,
    ):
        self.grammar = grammar
        self.signature = grammar.signature
        self.control = control or ControlSpec()
        self.closure = closure
        self.max_depth = max_depth
        self.index = index or ClauseIndex(grammar, self.control)
        self.statistics = TopDownStatistics()

    def is_delayed(self, ws: Workspace, literal: Literal) -> bool:
        return any(
            p.holds(self.signature, ws.type_of, ws.arc, literal.args)
            for p in self.control.patterns_for(literal)
        )

    def _resolve_head(self, ws: Workspace, goal: Literal, clause: DefiniteClause):
        """Rename the clause apart and unify its head with ``goal``.

        Returns the renamed body, or None on a clash (the workspace is then
        left as it was).
        """
        start = ws.mark()
        offset = ws.load(clause.pool)
        head = clause.head.shifted(offset)
        for mine, theirs in zip(goal.args, head.args, strict=True):
            if ws.unify(mine, theirs) is not None:
                ws.undo(start)
                return None
        return [lit.shifted(offset) for lit in clause.body]

    def matching_clauses(self, ws: Workspace, goal: Literal) -> tuple[DefiniteClause, ...]:
        """Indexed candidates whose head actually unifies with the goal right now."""
        found = []
        for clause in self.index.candidates(ws, goal):
            start = ws.mark()
            if self._resolve_head(ws, goal, clause) is not None:
                found.append(clause)
            ws.undo(start)
        return tuple(found)

    def select_goal(self, ws: Workspace, state: ResolutionState) -> Selection | None:
        """Pick the next goal; None means every goal is waiting.

        With closure on, the first goal with at most one matching clause wins;
        otherwise (or if there is none) the leftmost goal is taken.
        """
        if not state.goals:
            return None
        if self.closure:
            leftmost = None
            for position, goal in enumerate(state.goals):
                found = self.matching_clauses(ws, goal.literal)
                if len(found) <= 1:
                    return Selection(position, found)
                if leftmost is None:
                    leftmost = Selection(position, found)
            return leftmost
        return Selection(0, self.matching_clauses(ws, state.goals[0].literal))

    def _settle(self, ws: Workspace, state: ResolutionState) -> ResolutionState:
        """Wake waiting goals that can run and set aside new goals that cannot."""
        stamp = ws.changes
        woken: list[Goal] = []
        still: list[Waiting] = []
        for entry in state.waiting:
            if entry.checked_at != stamp and not self.is_delayed(ws, entry.goal.literal):
                woken.append(entry.goal)
            else:
                still.append(Waiting(entry.goal, stamp))
        runnable: list[Goal] = []
        for goal in (*woken, *state.goals):
            if self.is_delayed(ws, goal.literal):
                still.append(Waiting(goal, stamp))
            else:
                runnable.append(goal)
        return ResolutionState(tuple(runnable), tuple(still))

    def solve(
        self, ws: Workspace, goals: Sequence[Literal], delayed: Sequence[Literal] = ()
    ) -> Iterator[list[Literal]]:
        """Enumerate solutions of ``goals`` with ``delayed`` carried along.

        Each yield leaves the bindings of the solution in ``ws`` and gives the
        goals still waiting. Resuming the generator undoes them; when it is
        exhausted the workspace is back where it started.

        Raises:
            DepthLimitExceeded: If resolution goes deeper than ``max_depth``
        """
        origin = ws.mark()
        stats = self.statistics
        state = ResolutionState(
            tuple(Goal(g) for g in goals), tuple(Waiting(Goal(d), -1) for d in delayed)
        )
        stack: list[_Frame] = []
        try:
            while True:
                state = self._settle(ws, state)
                selection = self.select_goal(ws, state)
                if selection is None:
                    stats.solutions += 1
                    yield [w.goal.literal for w in state.waiting]
                elif selection.candidates:
                    goal = state.goals[selection.position]
                    if len(selection.candidates) > 1:
                        stats.choice_points += 1
                        logger.debug(
                            f"Choice point on {goal.literal.relation}: "
                            f"{len(selection.candidates)} clauses"
                        )
                    rest = state.goals[: selection.position] + state.goals[selection.position + 1 :]
                    stack.append(
                        _Frame(ws.mark(), goal, rest, state.waiting, iter(selection.candidates))
                    )
                next_state = self._advance(ws, stack)
                if next_state is None:
                    return
                state = next_state
        finally:
            ws.undo(origin)

    def _advance(self, ws: Workspace, stack: list[_Frame]) -> ResolutionState | None:
        """Apply the next untried clause of the newest choice point, backtracking as needed."""
        stats = self.statistics
        while stack:
            frame = stack[-1]
            ws.undo(frame.mark)
            for clause in frame.candidates:
                stats.steps += 1
                body = self._resolve_head(ws, frame.goal.literal, clause)
                if body is None:
                    continue
                depth = frame.goal.depth + 1
                if body and depth > self.max_depth:
                    raise DepthLimitExceeded(self.max_depth)
                stats.deepest = max(stats.deepest, depth)
                new_goals = tuple(Goal(lit, depth) for lit in body)
                return ResolutionState(new_goals + frame.rest, frame.waiting)
            stack.pop()
        return None


@dataclass(frozen=True)
class TopDownSolution:
    """The instantiated goals of one solution and the goals left waiting."""

    pool: NodePool
    goals: tuple[Literal, ...]
    delayed: tuple[Literal, ...]

    def to_text(self, sig) -> str:
        texts = format_literals(sig, self.pool, (*self.goals, *self.delayed))
        goals, delayed = texts[: len(self.goals)], texts[len(self.goals) :]
        if not delayed:
            return ", ".join(goals)
        return f"{', '.join(goals)} [delayed: {', '.join(delayed)}]"


def td_interpret(
    goals: Query,
    grammar: Grammar,
    control: ControlSpec | None = None,
    delayed_in: Sequence[Literal] = (),
    **options,
) -> Iterator[TopDownSolution]:
    """Solve a standalone goal list; ``delayed_in`` literals live in ``goals.pool``.

    Keyword options are passed on to TopDownInterpreter.
    """
    interpreter = TopDownInterpreter(grammar, control, **options)
    ws = Workspace(grammar.signature)
    offset = ws.load(goals.pool)
    own = [lit.shifted(offset) for lit in goals.literals]
    carried = [lit.shifted(offset) for lit in delayed_in]
    for residue in interpreter.solve(ws, own, carried):
        pool, literals = freeze_literals(ws, [*own, *residue])
        yield TopDownSolution(pool, tuple(literals[: len(own)]), tuple(literals[len(own) :]))

"""Magic compilation.

Clauses defining tabled goals get a magic guard as their first body literal,
and every tabled body literal gets a magic rule that passes the bindings of
the head and of the literals before it down to that literal. Clauses with
untabled heads are left as they are and are run top-down.
"""

import logging
from dataclasses import dataclass
from enum import StrEnum

from selective_magic_parser.errors import MagicError
from selective_magic_parser.grammar import (
    DefiniteClause,
    Grammar,
    Literal,
    Query,
    format_clauses,
    normalize_clause,
)
from selective_magic_parser.magic.parse_types import (
    MAGIC_PREFIX,
    MagicMode,
    ParseTypeSpec,
    TablingPolicy,
    magic_name,
)
from selective_magic_parser.models import Edge

logger = logging.getLogger(__name__)


class ClauseRole(StrEnum):
    VARIANT = "variant"
    MAGIC_RULE = "magic rule"
    PASSTHROUGH = "passthrough"


@dataclass(frozen=True)
class CompiledClause:
    """One clause of the compiled grammar and where it came from."""

    clause: DefiniteClause
    role: ClauseRole
    origin: str
    tabled_positions: tuple[int, ...] = ()
    unit_source: bool = False

    @property
    def label(self) -> str:
        return self.clause.label

    @property
    def note(self) -> str:
        if self.role is ClauseRole.MAGIC_RULE:
            return f"{self.label}: magic rule for {self.origin}"
        return f"{self.label}: {self.role}"


@dataclass(frozen=True)
class MagicGrammar:
    """A grammar after magic compilation."""

    source: Grammar
    policy: TablingPolicy
    compiled: tuple[CompiledClause, ...]

    @property
    def signature(self):
        return self.source.signature

    @property
    def magic_relations(self) -> frozenset[str]:
        return self.policy.magic_relations

    @property
    def clauses(self) -> tuple[DefiniteClause, ...]:
        return tuple(c.clause for c in self.compiled)

    @property
    def bottom_up(self) -> tuple[CompiledClause, ...]:
        return tuple(c for c in self.compiled if c.role is not ClauseRole.PASSTHROUGH)

    def with_role(self, role: ClauseRole) -> tuple[CompiledClause, ...]:
        return tuple(c for c in self.compiled if c.role is role)

    def to_text(self) -> str:
        return format_clauses(self.signature, self.clauses, [c.note for c in self.compiled])


def _guard(head: Literal) -> Literal:
    return Literal(magic_name(head.relation), head.args)


def _require_tabled_head(clause: DefiniteClause, policy: TablingPolicy) -> None:
    head = clause.head
    if head.relation in policy.magic_relations:
        raise MagicError(f"clause {clause.label}: {head.key} is already a magic relation")
    if not policy.matches(clause.pool, head):
        raise MagicError(f"clause {clause.label}: head {head.key} is not a parse type literal")


def magic_variant(clause: DefiniteClause, policy: TablingPolicy) -> DefiniteClause:
    """The clause with a magic guard sharing the head's arguments put first in the body."""
    _require_tabled_head(clause, policy)
    return clause.with_body((_guard(clause.head), *clause.body))


def derive_magic_rules(clause: DefiniteClause, policy: TablingPolicy) -> list[DefiniteClause]:
    """One magic rule per tabled body literal.

    The rule for the literal at body position i is labelled ``<label>.m<i>``
    and has the magic guard of the head followed by every literal before it.
    """
    _require_tabled_head(clause, policy)
    rules = []
    for position, literal in enumerate(clause.body):
        if not policy.matches(clause.pool, literal):
            continue
        rule = DefiniteClause(
            clause.pool,
            _guard(literal),
            (_guard(clause.head), *clause.body[:position]),
            f"{clause.label}.m{position + 1}",
            clause.line,
        )
        rules.append(rule.compacted())
    return rules


def _tabled_positions(clause: DefiniteClause, policy: TablingPolicy) -> tuple[int, ...]:
    return tuple(i for i, lit in enumerate(clause.body) if policy.matches(clause.pool, lit))


def _needed_magic(grammar: Grammar, policy: TablingPolicy) -> frozenset[str]:
    needed = set()
    for clause in grammar.clauses:
        if not policy.matches(clause.pool, clause.head):
            continue
        needed.add(magic_name(clause.head.relation))
        needed.update(
            magic_name(lit.relation) for lit in clause.body if policy.matches(clause.pool, lit)
        )
    return frozenset(needed)


def transform_grammar(
    grammar: Grammar, spec: ParseTypeSpec, mode: MagicMode = MagicMode.SELECTIVE
) -> MagicGrammar:
    """Compile every clause with a tabled head; pass the rest through unchanged.

    Raises:
        MagicError: If a magic relation name is already used by the grammar
    """
    base = TablingPolicy(spec, MagicMode(mode))
    needed = _needed_magic(grammar, base)
    collisions = sorted(needed & grammar.relations())
    if collisions:
        raise MagicError(f"magic relation {collisions[0]!r} collides with a user relation")
    policy = base.with_magic(needed)

    compiled: list[CompiledClause] = []
    for clause in grammar.clauses:
        if not policy.matches(clause.pool, clause.head):
            compiled.append(CompiledClause(clause, ClauseRole.PASSTHROUGH, clause.label))
            continue
        normalized = normalize_clause(clause, policy)
        variant = magic_variant(normalized, policy)
        compiled.append(
            CompiledClause(
                variant,
                ClauseRole.VARIANT,
                clause.label,
                _tabled_positions(variant, policy),
                unit_source=clause.is_fact,
            )
        )
        compiled.extend(
            CompiledClause(
                rule, ClauseRole.MAGIC_RULE, clause.label, _tabled_positions(rule, policy)
            )
            for rule in derive_magic_rules(normalized, policy)
        )
    result = MagicGrammar(grammar, policy, tuple(compiled))
    logger.info(
        f"Magic compilation ({policy.mode}): "
        f"{len(result.with_role(ClauseRole.VARIANT))} variants, "
        f"{len(result.with_role(ClauseRole.MAGIC_RULE))} magic rules, "
        f"{len(result.with_role(ClauseRole.PASSTHROUGH))} passed through"
    )
    return result


def make_seed(goal: Query, policy: TablingPolicy) -> Edge:
    """The magic fact for a tabled goal, as an edge with nothing delayed."""
    literal = goal.literal
    if not policy.matches(goal.pool, literal) or literal.relation in policy.magic_relations:
        raise MagicError(f"goal {literal.key} is not a parse type literal")
    pool, index = goal.pool.compact(literal.args)
    return Edge(pool, _guard(literal).remapped(index))


def restore_magic_grammar(
    grammar: Grammar, spec: ParseTypeSpec, mode: MagicMode = MagicMode.SELECTIVE
) -> MagicGrammar:
    """Rebuild a MagicGrammar from the text ``MagicGrammar.to_text`` wrote.

    A relation is magic when its name is the magic prefix plus another
    relation of the grammar. Guards are stripped again to recover the source.
    """
    relations = grammar.relations()
    magic = frozenset(
        r for r in relations if r.startswith(MAGIC_PREFIX) and r[len(MAGIC_PREFIX) :] in relations
    )
    policy = TablingPolicy(spec, MagicMode(mode), magic)
    compiled: list[CompiledClause] = []
    source: list[DefiniteClause] = []
    for clause in grammar.clauses:
        guarded = bool(clause.body) and clause.body[0] == _guard(clause.head)
        if clause.head.relation in magic:
            role = ClauseRole.MAGIC_RULE
        elif policy.matches(clause.pool, clause.head):
            role = ClauseRole.VARIANT
            body = clause.body[1:] if guarded else clause.body
            source.append(clause.with_body(body).compacted())
        else:
            role = ClauseRole.PASSTHROUGH
            source.append(clause)
        compiled.append(
            CompiledClause(
                clause,
                role,
                clause.label,
                _tabled_positions(clause, policy),
                unit_source=role is ClauseRole.VARIANT and guarded and len(clause.body) == 1,
            )
        )
    logger.info(f"Restored compiled grammar: {len(compiled)} clauses, {len(magic)} magic relations")
    return MagicGrammar(Grammar(grammar.signature, tuple(source)), policy, tuple(compiled))


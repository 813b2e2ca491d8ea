"""Body normalization: tabled literals first, order within each group kept."""

from typing import Protocol

from selective_magic_parser.grammar.models import DefiniteClause, Literal
from selective_magic_parser.tfl import NodePool


class LiteralFilter(Protocol):
    def matches(self, pool: NodePool, literal: Literal) -> bool: ...


def normalize_clause(clause: DefiniteClause, spec: LiteralFilter) -> DefiniteClause:
    """Stable partition of the body by ``spec``; the head is left alone."""
    first = [lit for lit in clause.body if spec.matches(clause.pool, lit)]
    rest = [lit for lit in clause.body if not spec.matches(clause.pool, lit)]
    body = (*first, *rest)
    if body == clause.body:
        return clause
    return clause.with_body(body)

"""Data models for definite clauses over feature structure arguments."""

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

from selective_magic_parser.errors import GrammarError
from selective_magic_parser.tfl import FeatureStructure, NodePool, Signature, Workspace
from selective_magic_parser.tfl.canonical import render_roots


@dataclass(frozen=True)
class Literal:
    """A relation applied to argument nodes of a containing pool.

    Two arguments naming the same node are structure-shared.
    """

    relation: str
    args: tuple[int, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> str:
        return f"{self.relation}/{self.arity}"

    def shifted(self, offset: int) -> "Literal":
        return Literal(self.relation, tuple(a + offset for a in self.args))

    def remapped(self, index: Mapping[int, int]) -> "Literal":
        return Literal(self.relation, tuple(index[a] for a in self.args))

    def renamed(self, relation: str) -> "Literal":
        return Literal(relation, self.args)


def _roots(literals: Iterable[Literal]) -> list[int]:
    return [a for lit in literals for a in lit.args]


def _split(literals: Sequence[Literal], values: Sequence) -> list[tuple]:
    """Cut a flat per-argument sequence back into per-literal tuples."""
    out = []
    position = 0
    for lit in literals:
        out.append(tuple(values[position : position + lit.arity]))
        position += lit.arity
    return out


def freeze_literals(ws: Workspace, literals: Sequence[Literal]) -> tuple[NodePool, list[Literal]]:
    """Export literals living in a workspace into one fresh shared pool."""
    pool, new_roots, _index = ws.export(_roots(literals))
    return pool, [
        Literal(lit.relation, args)
        for lit, args in zip(literals, _split(literals, new_roots), strict=True)
    ]


def format_literals(sig: Signature, pool: NodePool, literals: Sequence[Literal]) -> list[str]:
    """Canonical text of each literal; tags are shared across the whole sequence."""
    texts = render_roots(sig, pool, _roots(literals))
    return [
        lit.relation if not lit.arity else f"{lit.relation}({', '.join(args)})"
        for lit, args in zip(literals, _split(literals, texts), strict=True)
    ]


@dataclass(frozen=True)
class DefiniteClause:
    """A head literal conditioned on an ordered body, all sharing one pool."""

    pool: NodePool
    head: Literal
    body: tuple[Literal, ...] = ()
    label: str = ""
    line: int | None = None

    @property
    def is_fact(self) -> bool:
        return not self.body

    @property
    def literals(self) -> tuple[Literal, ...]:
        return (self.head, *self.body)

    def argument(self, literal: Literal, position: int) -> FeatureStructure:
        return FeatureStructure(self.pool, literal.args[position])

    def with_body(self, body: Sequence[Literal], label: str | None = None) -> "DefiniteClause":
        return DefiniteClause(
            self.pool, self.head, tuple(body), self.label if label is None else label, self.line
        )

    def compacted(self) -> "DefiniteClause":
        """Drop nodes no literal reaches any more and renumber the rest."""
        pool, index = self.pool.compact(_roots(self.literals))
        return DefiniteClause(
            pool,
            self.head.remapped(index),
            tuple(lit.remapped(index) for lit in self.body),
            self.label,
            self.line,
        )

    @classmethod
    def from_workspace(
        cls,
        ws: Workspace,
        head: Literal,
        body: Sequence[Literal],
        label: str = "",
        line: int | None = None,
    ) -> "DefiniteClause":
        pool, literals = freeze_literals(ws, [head, *body])
        return cls(pool, literals[0], tuple(literals[1:]), label, line)

    def to_text(self, sig: Signature) -> str:
        texts = format_literals(sig, self.pool, self.literals)
        if self.is_fact:
            return f"{texts[0]}."
        return f"{texts[0]} :- {', '.join(texts[1:])}."


@dataclass(frozen=True)
class Query:
    """A conjunction of literals over one pool: a goal list or an answer."""

    pool: NodePool
    literals: tuple[Literal, ...]

    @property
    def literal(self) -> Literal:
        """The single literal of a one-goal query."""
        if len(self.literals) != 1:
            raise GrammarError(f"expected a single goal, got {len(self.literals)}")
        return self.literals[0]

    def argument(self, position: int) -> FeatureStructure:
        return FeatureStructure(self.pool, self.literal.args[position])

    @classmethod
    def from_workspace(cls, ws: Workspace, literals: Sequence[Literal]) -> "Query":
        pool, frozen = freeze_literals(ws, literals)
        return cls(pool, tuple(frozen))

    def to_text(self, sig: Signature) -> str:
        return ", ".join(format_literals(sig, self.pool, self.literals))


@dataclass(frozen=True)
class Grammar:
    """A signature plus definite clauses, indexed by relation name."""

    signature: Signature
    clauses: tuple[DefiniteClause, ...]
    definitions: Mapping[str, tuple[DefiniteClause, ...]] = field(init=False, repr=False)
    arities: Mapping[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        definitions: dict[str, list[DefiniteClause]] = {}
        arities: dict[str, int] = {}
        for clause in self.clauses:
            for lit in clause.literals:
                known = arities.setdefault(lit.relation, lit.arity)
                if known != lit.arity:
                    raise GrammarError(
                        f"relation {lit.relation!r} used with arity {lit.arity} "
                        f"and {known}",
                        line=clause.line,
                    )
            definitions.setdefault(clause.head.relation, []).append(clause)
        object.__setattr__(
            self,
            "definitions",
            MappingProxyType({r: tuple(cs) for r, cs in definitions.items()}),
        )
        object.__setattr__(self, "arities", MappingProxyType(arities))

    @property
    def facts(self) -> tuple[DefiniteClause, ...]:
        return tuple(c for c in self.clauses if c.is_fact)

    def relations(self) -> frozenset[str]:
        return frozenset(self.arities)

    def defining(self, relation: str) -> tuple[DefiniteClause, ...]:
        return self.definitions.get(relation, ())

    def to_dict(self) -> dict:
        return {
            "clauses": len(self.clauses),
            "facts": len(self.facts),
            "relations": {r: self.arities[r] for r in sorted(self.arities)},
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

"""Delay patterns and index declarations for the top-down interpreter.

Control files hold lines such as::

    delay append/3 when arg1 at <> is list and arg3 at <> is list.
    index append/3 on arg1 at <>.

A delay pattern holds a goal back while every one of its conditions is
true, i.e. while the value at each named path is still no more specific
than the given type (``general`` names the appropriate type at the path).
Several patterns for one relation are alternatives: a goal waits while any
of them holds. ``#`` starts a comment.
"""

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

from arpeggio import EOF, Optional, ZeroOrMore
from arpeggio import RegExMatch as _

from selective_magic_parser.errors import ControlError
from selective_magic_parser.grammar import Grammar, Literal, Query
from selective_magic_parser.peg import children, location, parse_text, text_of
from selective_magic_parser.tfl import TOP, Path, Signature

logger = logging.getLogger(__name__)

GENERAL = "general"


def comment():
    return _(r"#.*")


def relation():
    return _(r"[a-z][A-Za-z0-9_]*")


def arity():
    return _(r"[0-9]+")


def argument():
    return _(r"arg[0-9]+")


def feature():
    return _(r"[a-z][A-Za-z0-9_\-]*")


def path():
    return "<", Optional(feature, ZeroOrMore(",", feature)), ">"


def bound():
    return _(r"[a-z][A-Za-z0-9_\-]*")


def condition():
    return argument, "at", path, "is", bound


def delay_decl():
    return "delay", relation, "/", arity, "when", condition, ZeroOrMore("and", condition), "."


def index_decl():
    return "index", relation, "/", arity, "on", argument, "at", path, "."


def delays_file():
    return ZeroOrMore(delay_decl), EOF


def index_file():
    return ZeroOrMore(index_decl), EOF


@dataclass(frozen=True)
class Requirement:
    """Restricting information wanted at ``path`` of argument ``argument`` (1-based).

    ``bound`` is None for ``general``: the appropriate type at the path.
    """

    argument: int
    path: Path
    bound: str | None = None

    def describe(self) -> str:
        return f"arg{self.argument} at <{', '.join(self.path)}> is {self.bound or GENERAL}"

    def met(self, sig: Signature, type_of: Callable, arc: Callable, node: int) -> bool:
        """True once the value at the path is not at least as general as the bound."""
        found = _value_type(sig, type_of, arc, node, self.path)
        if found is None:
            return True
        value, appropriate = found
        limit = appropriate if self.bound is None else self.bound
        return not sig.is_subtype(limit, value)


def _value_type(
    sig: Signature, type_of: Callable, arc: Callable, node: int, path: Path
) -> tuple[str, str] | None:
    """Type at ``path`` and the most general type appropriate there.

    None when the path runs into a type that can never bear the feature.
    """
    current: int | None = node
    current_type = type_of(node)
    appropriate = TOP
    for feature_name in path:
        introducer = sig.introduced_at(feature_name)
        appropriate = sig.restriction(introducer, feature_name)
        if current is not None:
            target = arc(current, feature_name)
            if target is not None:
                current, current_type = target, type_of(target)
                continue
        restriction = sig.restriction(current_type, feature_name)
        if restriction is None:
            if sig.meet(current_type, introducer) is None:
                return None
            restriction = appropriate
        current, current_type = None, restriction
    return current_type, appropriate


@dataclass(frozen=True)
class DelayPattern:
    relation: str
    arity: int
    conditions: tuple[Requirement, ...]

    @property
    def key(self) -> str:
        return f"{self.relation}/{self.arity}"

    def holds(self, sig: Signature, type_of: Callable, arc: Callable, args: Sequence[int]) -> bool:
        """True while the goal must still wait."""
        return not any(r.met(sig, type_of, arc, args[r.argument - 1]) for r in self.conditions)


@dataclass(frozen=True)
class IndexKey:
    argument: int = 1
    path: Path = ()


DEFAULT_INDEX = (IndexKey(),)


@dataclass(frozen=True)
class ControlSpec:
    """Delay patterns and index keys, both by ``relation/arity``."""

    delays: Mapping[str, tuple[DelayPattern, ...]] = field(
        default_factory=lambda: MappingProxyType({})
    )
    index: Mapping[str, tuple[IndexKey, ...]] = field(
        default_factory=lambda: MappingProxyType({})
    )

    def patterns_for(self, literal: Literal) -> tuple[DelayPattern, ...]:
        return self.delays.get(literal.key, ())

    def keys_for(self, literal: Literal) -> tuple[IndexKey, ...]:
        return self.index.get(literal.key, DEFAULT_INDEX if literal.arity else ())

    def check_against(self, grammar: Grammar) -> list[str]:
        """Describe declarations whose relation the grammar uses with another arity."""
        problems = []
        declared = [*self.delays, *self.index]
        for key in dict.fromkeys(declared):
            name, _slash, count = key.rpartition("/")
            known = grammar.arities.get(name)
            if known is not None and known != int(count):
                problems.append(f"control declaration for {key} but {name} has arity {known}")
        return problems


def _check_path(sig: Signature, parser, node, feature_path: Path) -> None:
    current = TOP
    for feature_name in feature_path:
        introducer = sig.introduced_at(feature_name)
        if introducer is None or sig.meet(current, introducer) is None:
            line, column = location(parser, node)
            raise ControlError(
                f"invalid path <{', '.join(feature_path)}> at feature {feature_name!r}",
                line=line,
                column=column,
            )
        current = sig.restriction(introducer, feature_name)


def _read_argument(parser, node, relation_arity: int) -> int:
    number = int(text_of(node)[3:])
    if not 1 <= number <= relation_arity:
        line, column = location(parser, node)
        raise ControlError(
            f"argument {number} out of range for arity {relation_arity}", line=line, column=column
        )
    return number


def _read_path(sig: Signature, parser, node) -> Path:
    feature_path = tuple(text_of(f) for f in children(node, frozenset({"feature"})))
    _check_path(sig, parser, node, feature_path)
    return feature_path


_PARTS = frozenset({"relation", "arity", "argument", "path", "bound", "condition"})


def load_delays(text: str, sig: Signature) -> dict[str, tuple[DelayPattern, ...]]:
    """Read ``delay`` declarations.

    Raises:
        ControlError: On syntax errors, unknown types or invalid paths
    """
    parser, tree = parse_text(delays_file, comment, text, ControlError, "delay patterns")
    patterns: dict[str, list[DelayPattern]] = {}
    for decl in children(tree, frozenset({"delay_decl"})):
        parts = list(children(decl, _PARTS))
        name, count = text_of(parts[0]), int(text_of(parts[1]))
        conditions = []
        for cond in parts[2:]:
            arg_node, path_node, bound_node = children(cond, _PARTS)
            bound_name = text_of(bound_node)
            if bound_name != GENERAL and bound_name not in sig:
                line, column = location(parser, bound_node)
                raise ControlError(f"unknown type {bound_name!r}", line=line, column=column)
            conditions.append(
                Requirement(
                    _read_argument(parser, arg_node, count),
                    _read_path(sig, parser, path_node),
                    None if bound_name == GENERAL else bound_name,
                )
            )
        pattern = DelayPattern(name, count, tuple(conditions))
        patterns.setdefault(pattern.key, []).append(pattern)
    logger.info(f"Delay patterns loaded for {len(patterns)} relations")
    return {key: tuple(ps) for key, ps in patterns.items()}


def load_index(text: str, sig: Signature) -> dict[str, tuple[IndexKey, ...]]:
    """Read ``index`` declarations; several keys for one relation are all used."""
    parser, tree = parse_text(index_file, comment, text, ControlError, "index declarations")
    keys: dict[str, list[IndexKey]] = {}
    for decl in children(tree, frozenset({"index_decl"})):
        rel_node, arity_node, arg_node, path_node = children(decl, _PARTS)
        count = int(text_of(arity_node))
        key = IndexKey(_read_argument(parser, arg_node, count), _read_path(sig, parser, path_node))
        keys.setdefault(f"{text_of(rel_node)}/{count}", []).append(key)
    logger.info(f"Index declarations loaded for {len(keys)} relations")
    return {k: tuple(v) for k, v in keys.items()}


def make_control(
    sig: Signature, delays_text: str | None = None, index_text: str | None = None
) -> ControlSpec:
    return ControlSpec(
        MappingProxyType(load_delays(delays_text, sig) if delays_text else {}),
        MappingProxyType(load_index(index_text, sig) if index_text else {}),
    )


def is_delayed(goal: Query, patterns: Sequence[DelayPattern], sig: Signature) -> bool:
    """True iff some pattern for the goal's relation still holds it back."""
    literal = goal.literal
    pool = goal.pool
    return any(
        p.holds(sig, pool.type_of, pool.arc, literal.args)
        for p in patterns
        if p.key == literal.key
    )

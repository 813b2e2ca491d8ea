"""Parse types and the tabling policy derived from them."""

import logging
from dataclasses import dataclass
from enum import StrEnum

from arpeggio import EOF, ZeroOrMore
from arpeggio import RegExMatch as _

from selective_magic_parser.errors import ControlError
from selective_magic_parser.grammar import Literal
from selective_magic_parser.peg import children, location, parse_text, text_of
from selective_magic_parser.tfl import NodePool, Signature

logger = logging.getLogger(__name__)

MAGIC_PREFIX = "magic_"


def comment():
    return _(r"#.*")


def type_name():
    return _(r"[a-z][A-Za-z0-9_\-]*")


def parse_type_file():
    return ZeroOrMore(type_name, ZeroOrMore(","), ZeroOrMore(".")), EOF


class MagicMode(StrEnum):
    SELECTIVE = "selective"
    FULL = "full"


@dataclass(frozen=True)
class ParseTypeSpec:
    """Declared parse types and their closure under subtypes."""

    declared: tuple[str, ...]
    closed: frozenset[str]

    @classmethod
    def from_names(cls, names, sig: Signature) -> "ParseTypeSpec":
        declared = tuple(dict.fromkeys(names))
        closed: set[str] = set()
        for name in declared:
            if name not in sig:
                raise ControlError(f"unknown parse type {name!r}")
            closed |= sig.subtypes(name)
        return cls(declared, frozenset(closed))

    def matches(self, pool: NodePool, literal: Literal) -> bool:
        return is_parse_type_literal(literal, pool, self)


def is_parse_type_literal(literal: Literal, pool: NodePool, spec: ParseTypeSpec) -> bool:
    """Single-argument literal whose argument's root type is a parse type."""
    return literal.arity == 1 and pool.types[literal.args[0]] in spec.closed


def load_parse_types(text: str, sig: Signature) -> ParseTypeSpec:
    """Read type names, one per line or comma-separated; ``#`` starts a comment."""
    parser, tree = parse_text(parse_type_file, comment, text, ControlError, "parse types")
    names = []
    for node in children(tree, frozenset({"type_name"})):
        name = text_of(node)
        if name not in sig:
            line, column = location(parser, node)
            raise ControlError(f"unknown parse type {name!r}", line=line, column=column)
        names.append(name)
    spec = ParseTypeSpec.from_names(names, sig)
    logger.info(f"Parse types: {', '.join(spec.declared) or '(none)'}")
    return spec


def magic_name(relation: str) -> str:
    return MAGIC_PREFIX + relation


@dataclass(frozen=True)
class TablingPolicy:
    """Decides which literals are evaluated bottom-up with tabling.

    In full mode every literal is tabled. Magic literals always are.
    """

    spec: ParseTypeSpec
    mode: MagicMode = MagicMode.SELECTIVE
    magic_relations: frozenset[str] = frozenset()

    def matches(self, pool: NodePool, literal: Literal) -> bool:
        if self.mode is MagicMode.FULL or literal.relation in self.magic_relations:
            return True
        return is_parse_type_literal(literal, pool, self.spec)

    def with_magic(self, relations) -> "TablingPolicy":
        return TablingPolicy(self.spec, self.mode, self.magic_relations | frozenset(relations))

"""Selective magic compilation driven by parse types."""

from selective_magic_parser.magic.compiler import (
    ClauseRole,
    CompiledClause,
    MagicGrammar,
    derive_magic_rules,
    magic_variant,
    make_seed,
    restore_magic_grammar,
    transform_grammar,
)
from selective_magic_parser.magic.parse_types import (
    MAGIC_PREFIX,
    MagicMode,
    ParseTypeSpec,
    TablingPolicy,
    is_parse_type_literal,
    load_parse_types,
    magic_name,
)

__all__ = [
    "MAGIC_PREFIX",
    "ClauseRole",
    "CompiledClause",
    "MagicGrammar",
    "MagicMode",
    "ParseTypeSpec",
    "TablingPolicy",
    "derive_magic_rules",
    "is_parse_type_literal",
    "load_parse_types",
    "magic_name",
    "magic_variant",
    "make_seed",
    "restore_magic_grammar",
    "transform_grammar",
]

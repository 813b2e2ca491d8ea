"""Clause language, clause models and sectioned grammar documents."""

from selective_magic_parser.grammar.documents import SECTIONS, read_section, split_sections
from selective_magic_parser.grammar.dsl import parse_grammar, parse_query
from selective_magic_parser.grammar.lists import (
    build_list,
    decode_list,
    list_to_fs,
    list_types,
    words_to_fs,
)
from selective_magic_parser.grammar.models import (
    DefiniteClause,
    Grammar,
    Literal,
    Query,
    format_literals,
    freeze_literals,
)
from selective_magic_parser.grammar.normalize import LiteralFilter, normalize_clause
from selective_magic_parser.grammar.printer import format_clause, format_clauses, format_grammar

__all__ = [
    "SECTIONS",
    "DefiniteClause",
    "Grammar",
    "Literal",
    "LiteralFilter",
    "Query",
    "build_list",
    "decode_list",
    "format_clause",
    "format_clauses",
    "format_grammar",
    "format_literals",
    "freeze_literals",
    "list_to_fs",
    "list_types",
    "normalize_clause",
    "parse_grammar",
    "parse_query",
    "read_section",
    "split_sections",
    "words_to_fs",
]

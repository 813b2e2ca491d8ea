"""Pretty printing of clauses in the clause language; output reads back with parse_grammar."""

from collections.abc import Iterable

from selective_magic_parser.grammar.models import DefiniteClause, Grammar
from selective_magic_parser.tfl import Signature


def format_clause(sig: Signature, clause: DefiniteClause) -> str:
    return clause.to_text(sig)


def format_clauses(
    sig: Signature, clauses: Iterable[DefiniteClause], notes: Iterable[str] | None = None
) -> str:
    """One clause per line, each preceded by a ``%`` comment when notes are given."""
    lines = []
    note_list = list(notes) if notes is not None else None
    for position, clause in enumerate(clauses):
        if note_list is not None and note_list[position]:
            lines.append(f"% {note_list[position]}")
        lines.append(format_clause(sig, clause))
    return "\n".join(lines) + "\n" if lines else ""


def format_grammar(grammar: Grammar) -> str:
    return format_clauses(grammar.signature, grammar.clauses)

"""Small helpers around arpeggio shared by the DSL readers."""

import logging
from collections.abc import Callable, Iterator

from arpeggio import NoMatch, NonTerminal, ParserPython, Terminal

from selective_magic_parser.errors import TfgError

logger = logging.getLogger(__name__)


def parse_text(
    language: Callable,
    comment: Callable | None,
    text: str,
    error_class: type[TfgError],
    what: str,
):
    """Parse ``text`` with a fresh parser, mapping failures to ``error_class``.

    A parser is built per call so concurrent sessions never share parser state.
    """
    parser = ParserPython(language, comment)
    try:
        return parser, parser.parse(text)
    except NoMatch as e:
        line, column = parser.pos_to_linecol(e.position)
        logger.debug(f"No match in {what} at {line}:{column}: {e}")
        expected = ", ".join(sorted({str(rule) for rule in e.rules}))
        raise error_class(
            f"syntax error in {what}: expected {expected}",
            line=line,
            column=column,
        ) from e


def children(node, names: frozenset[str]) -> Iterator:
    """Yield the descendants of ``node`` belonging to a named rule, in order.

    Anonymous sequences and repetitions are looked through; punctuation is skipped.
    """
    for child in node:
        if child.rule_name in names:
            yield child
        elif isinstance(child, NonTerminal):
            yield from children(child, names)


def text_of(node) -> str:
    """Return the matched text of a terminal rule node."""
    if isinstance(node, Terminal):
        return node.value
    return "".join(text_of(child) for child in node)


def location(parser, node) -> tuple[int, int]:
    """Line and column of a parse tree node."""
    return parser.pos_to_linecol(node.position)

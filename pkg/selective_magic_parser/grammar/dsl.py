"""Reader for the clause language.

A clause is ``rel(term, ...) :- lit, ... .`` (``:=`` is accepted as the neck)
and a fact is ``rel(term, ...).``. Terms conjoin atoms with ``&``; an atom is
a type name, a ``#Tag``, ``feature:atom``, a parenthesized term or a list
``<a, b | rest>``. A body may also contain ``term = term`` equations, which are
solved while reading and never reach the engines. ``%`` starts a comment.
"""

import logging

from arpeggio import EOF, Optional, ZeroOrMore
from arpeggio import RegExMatch as _

from selective_magic_parser.errors import GrammarError, GrammarSyntaxError, TfgError
from selective_magic_parser.grammar.lists import build_list
from selective_magic_parser.grammar.models import DefiniteClause, Grammar, Literal, Query
from selective_magic_parser.peg import children, location, parse_text, text_of
from selective_magic_parser.tfl import Clash, Signature, Workspace

logger = logging.getLogger(__name__)


def comment():
    return _(r"%.*")


def relation():
    return _(r"[a-z][A-Za-z0-9_]*")


def feature():
    return _(r"[a-z][A-Za-z0-9_\-]*")


def type_name():
    return _(r"[a-z][A-Za-z0-9_\-]*")


def tag():
    return _(r"#[A-Za-z0-9_]+")


def feature_value():
    return feature, ":", atom


def empty_list():
    return "<", ">"


def list_tail():
    return "|", conj


def list_term():
    return "<", conj, ZeroOrMore(",", conj), Optional(list_tail), ">"


def group():
    return "(", conj, ")"


def atom():
    return [feature_value, tag, empty_list, list_term, group, type_name]


def conj():
    return atom, ZeroOrMore("&", atom)


def literal():
    return relation, Optional("(", Optional(conj, ZeroOrMore(",", conj)), ")")


def equation():
    return conj, "=", conj


def body():
    return [equation, literal], ZeroOrMore(",", [equation, literal])


def clause():
    return literal, Optional([":-", ":="], body), "."


def grammar_file():
    return ZeroOrMore(clause), EOF


def goal_list():
    return body, Optional("."), EOF


_ATOMS = frozenset({"feature_value", "tag", "empty_list", "list_term", "group", "type_name"})
_LITERAL_PARTS = frozenset({"literal", "equation"})


class _TermBuilder:
    """Builds the nodes of one clause in a workspace; tags are clause-scoped."""

    def __init__(self, sig: Signature, parser):
        self.sig = sig
        self.parser = parser
        self.ws = Workspace(sig)
        self.tags: dict[str, int] = {}

    def fail(self, node, message: str) -> GrammarError:
        line, column = location(self.parser, node)
        return GrammarError(message, line=line, column=column)

    def clash(self, node, clash: Clash) -> GrammarError:
        return self.fail(node, f"ill-typed term: {clash}")

    def conj(self, node) -> int:
        parts = [self.atom(a) for a in children(node, _ATOMS)]
        first = parts[0]
        for part in parts[1:]:
            clash = self.ws.unify(first, part)
            if clash is not None:
                raise self.clash(node, clash)
        return first

    def atom(self, node) -> int:
        kind = node.rule_name
        if kind == "type_name":
            name = text_of(node)
            if name not in self.sig:
                raise self.fail(node, f"unknown type {name!r}")
            return self.ws.new_node(name)
        if kind == "tag":
            name = text_of(node)
            if name not in self.tags:
                self.tags[name] = self.ws.new_node()
            return self.tags[name]
        if kind == "feature_value":
            return self.feature_value(node)
        if kind == "group":
            return self.conj(next(children(node, frozenset({"conj"}))))
        if not self.sig.has_lists():
            raise self.fail(node, "list syntax needs e_list and ne_list with hd and tl")
        if kind == "empty_list":
            return self.ws.new_node("e_list")
        items = []
        tail = None
        for part in children(node, frozenset({"conj", "list_tail"})):
            if part.rule_name == "conj":
                items.append(self.conj(part))
            else:
                tail = self.conj(next(children(part, frozenset({"conj"}))))
        result = build_list(self.ws, items, tail)
        if isinstance(result, Clash):
            raise self.clash(node, result)
        return result

    def feature_value(self, node) -> int:
        name = text_of(next(children(node, frozenset({"feature"}))))
        introducer = self.sig.introduced_at(name)
        if introducer is None:
            raise self.fail(node, f"unknown feature {name!r}")
        value = self.atom(next(children(node, _ATOMS)))
        source = self.ws.new_node(introducer)
        clash = self.ws.attach(source, name, value)
        if clash is not None:
            raise self.clash(node, clash)
        return source

    def literal(self, node) -> Literal:
        name = text_of(next(children(node, frozenset({"relation"}))))
        return Literal(name, tuple(self.conj(c) for c in children(node, frozenset({"conj"}))))

    def equation(self, node) -> None:
        left, right = (self.conj(c) for c in children(node, frozenset({"conj"})))
        clash = self.ws.unify(left, right)
        if clash is not None:
            raise self.clash(node, clash)

    def literals(self, nodes) -> list[Literal]:
        out = []
        for node in nodes:
            if node.rule_name == "equation":
                self.equation(node)
            else:
                out.append(self.literal(node))
        return out


def parse_grammar(text: str, sig: Signature, source: str | None = None) -> Grammar:
    """Read clause text into a Grammar over ``sig``.

    Args:
        text: Clause language source
        sig: Signature every type and feature must come from
        source: File name used in error locations

    Returns:
        The Grammar; clause labels are ``c1``, ``c2``, ... in file order

    Raises:
        GrammarError: On syntax errors, unknown types or features, ill-typed
            terms and arity conflicts
    """
    try:
        parser, tree = parse_text(grammar_file, comment, text, GrammarSyntaxError, "grammar")
        clauses = []
        for index, node in enumerate(children(tree, frozenset({"clause"})), start=1):
            builder = _TermBuilder(sig, parser)
            head, *rest = children(node, _LITERAL_PARTS)
            head_lit = builder.literal(head)
            body_lits = builder.literals(rest)
            line, _column = location(parser, node)
            clauses.append(
                DefiniteClause.from_workspace(builder.ws, head_lit, body_lits, f"c{index}", line)
            )
        grammar = Grammar(sig, tuple(clauses))
    except TfgError as e:
        if e.source is None:
            e.source = source
        raise
    logger.info(f"Grammar parsed: {len(clauses)} clauses, {len(grammar.facts)} facts")
    return grammar


def parse_query(text: str, sig: Signature) -> Query:
    """Read a comma-separated goal list; equations are solved as in clause bodies."""
    parser, tree = parse_text(goal_list, comment, text, GrammarSyntaxError, "goal")
    builder = _TermBuilder(sig, parser)
    body_node = next(children(tree, frozenset({"body"})))
    literals = builder.literals(children(body_node, _LITERAL_PARTS))
    return Query.from_workspace(builder.ws, literals)

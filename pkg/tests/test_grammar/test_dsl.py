"""Tests for reading and printing the clause language."""

import logging
from pathlib import Path

import pytest

from selective_magic_parser.errors import GrammarError, GrammarSyntaxError
from selective_magic_parser.grammar import (
    format_grammar,
    parse_grammar,
    parse_query,
    read_section,
)
from selective_magic_parser.tfl import canonical, load_signature

FIXTURES = Path(__file__).parent.parent / "fixtures" / "grammars"


@pytest.fixture
def sig():
    return load_signature((FIXTURES / "toy.sig").read_text())


@pytest.fixture
def toy(sig):
    return parse_grammar(read_section(FIXTURES / "toy.tfg", "grammar"), sig, "toy.tfg")


class TestToyGrammar:
    def test_clauses_are_labelled_in_file_order(self, toy):
        """Clauses get c1..c5 labels."""
        assert [c.label for c in toy.clauses] == ["c1", "c2", "c3", "c4", "c5"]

    def test_facts(self, toy):
        """The lexical entries and the base append clause are facts."""
        assert [c.label for c in toy.facts] == ["c2", "c3", "c4"]

    def test_relations_and_arities(self, toy):
        """Both relations are collected with their arities."""
        assert dict(toy.arities) == {"constituent": 1, "append": 3}
        assert [c.label for c in toy.defining("append")] == ["c4", "c5"]
        assert toy.defining("missing") == ()

    def test_tag_shares_agreement_between_subject_and_verb(self, toy):
        """#4 names one node under both body constituents."""
        clause = toy.clauses[0]
        np, v, _append = clause.body
        np_agr = clause.pool.node_at(np.args[0], ("agr",))
        v_agr = clause.pool.node_at(v.args[0], ("agr",))
        assert np_agr is not None
        assert np_agr == v_agr

    def test_tag_shares_phonology_with_append(self, toy):
        """The mother's phon is the third append argument."""
        clause = toy.clauses[0]
        assert clause.pool.node_at(clause.head.args[0], ("phon",)) == clause.body[2].args[2]

    def test_tag_is_coerced_by_its_feature(self, toy):
        """A tag under subj makes its owner a sleep and itself a sem."""
        clause = toy.clauses[0]
        v_sem = clause.pool.node_at(clause.body[1].args[0], ("sem",))
        assert clause.pool.types[v_sem] == "sleep"
        assert clause.pool.types[clause.pool.arc(v_sem, "subj")] == "sem"

    def test_lexical_entry_prints_canonically(self, sig, toy):
        """The mary entry reads back as written, features sorted."""
        assert toy.clauses[1].to_text(sig) == (
            "constituent(sign & agr:third-sing & cat:np & phon:<mary> & sem:mary_lf)."
        )

    def test_lines_are_recorded(self, toy):
        """Each clause remembers the line it starts on."""
        lines = [c.line for c in toy.clauses]
        assert lines == sorted(lines)
        assert all(line is not None and line > 1 for line in lines)

    def test_summary(self, toy):
        """to_dict reports counts and arities."""
        assert toy.to_dict() == {
            "clauses": 5,
            "facts": 3,
            "relations": {"append": 3, "constituent": 1},
        }


class TestPrintedGrammarReadsBack:
    def test_format_round_trip(self, sig, toy):
        """Printing then reading gives the same text again."""
        printed = format_grammar(toy)
        again = parse_grammar(printed, sig)
        assert format_grammar(again) == printed
        assert len(again.clauses) == 5


class TestClauseSyntax:
    def test_alternative_neck(self, sig):
        """:= is read like :-."""
        grammar = parse_grammar("p(sign) := q(sign).", sig)
        assert len(grammar.clauses[0].body) == 1

    def test_zero_arity_literals(self, sig):
        """A relation may appear without arguments."""
        grammar = parse_grammar("go :- stop.\nstop.", sig)
        assert grammar.arities["go"] == 0
        assert grammar.clauses[0].to_text(sig) == "go :- stop."

    def test_comments_are_ignored(self, sig):
        """% comments may appear anywhere."""
        grammar = parse_grammar("% header\np(sign). % trailing\n", sig)
        assert len(grammar.clauses) == 1

    def test_equations_are_solved_away(self, sig):
        """An equation constrains its terms and leaves the body."""
        grammar = parse_grammar("p(#X) :- #X = sign & cat:s, q(#X).", sig)
        clause = grammar.clauses[0]
        assert [lit.relation for lit in clause.body] == ["q"]
        assert canonical(sig, clause.argument(clause.head, 0)) == "sign & cat:s"
        assert clause.head.args[0] == clause.body[0].args[0]


class TestGrammarErrors:
    def when_parsed(self, sig, text):
        with pytest.raises(GrammarError) as info:
            parse_grammar(text, sig, "bad.tfg")
        self.error = info.value

    def then_message_contains(self, fragment):
        assert fragment in self.error.message

    def then_line_is(self, line):
        assert self.error.line == line

    def test_unknown_type(self, sig):
        """Types must be declared."""
        self.when_parsed(sig, "p(sign).\np(verb).")
        self.then_message_contains("unknown type 'verb'")
        self.then_line_is(2)

    def test_unknown_feature(self, sig):
        """Features must be declared."""
        self.when_parsed(sig, "p(sign & colour:s).")
        self.then_message_contains("unknown feature 'colour'")

    def test_feature_on_incompatible_type(self, sig):
        """subj cannot be put on mary_lf."""
        self.when_parsed(sig, "p(mary_lf & subj:mary_lf).")
        self.then_message_contains("ill-typed")

    def test_value_outside_restriction(self, sig):
        """cat values must be categories."""
        self.when_parsed(sig, "p(sign & cat:mary).")
        self.then_message_contains("ill-typed")

    def test_syntax_error_is_located(self, sig):
        """A missing parenthesis is reported on its line."""
        with pytest.raises(GrammarSyntaxError) as info:
            parse_grammar("p(sign).\np(sign", sig, "bad.tfg")
        assert info.value.line == 2
        assert info.value.located().startswith("bad.tfg:2:")

    def test_syntax_error_is_logged(self, sig, caplog):
        """The raw parser failure is kept in the debug log."""
        caplog.set_level(logging.DEBUG, logger="selective_magic_parser.peg")
        with pytest.raises(GrammarSyntaxError):
            parse_grammar("p(sign).\np(sign", sig, "bad.tfg")
        assert "No match in grammar at 2:" in caplog.text

    def test_arity_conflict(self, sig):
        """A relation keeps one arity throughout the grammar."""
        self.when_parsed(sig, "p(sign).\np(sign, sign).")
        self.then_message_contains("arity")

    def test_list_syntax_needs_list_types(self):
        """Angle brackets are refused when the signature has no lists."""
        bare = load_signature("type a sub [b].")
        with pytest.raises(GrammarError, match="list syntax"):
            parse_grammar("p(<a>).", bare)


class TestParseQuery:
    def test_goal_list(self, sig):
        """Several goals share one pool."""
        query = parse_query("constituent(sign & phon:#P), append(#P, <>, #P)", sig)
        assert [lit.relation for lit in query.literals] == ["constituent", "append"]
        constituent, append = query.literals
        assert query.pool.node_at(constituent.args[0], ("phon",)) == append.args[0]

    def test_trailing_full_stop_is_optional(self, sig):
        """A goal may end with a full stop."""
        assert parse_query("constituent(sign).", sig).literal.relation == "constituent"

    def test_single_goal_accessor_rejects_conjunctions(self, sig):
        """literal is only defined for one-goal queries."""
        query = parse_query("p(sign), q(sign)", sig)
        with pytest.raises(GrammarError, match="single goal"):
            _ = query.literal

    def test_query_text(self, sig):
        """Queries print with shared tags."""
        query = parse_query("p(#A & mary), q(#A)", sig)
        assert query.to_text(sig) == "p(#1 & mary), q(#1)"

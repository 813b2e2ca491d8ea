"""Tests for delay patterns and index declarations."""

from pathlib import Path

import pytest

from selective_magic_parser.errors import ControlError
from selective_magic_parser.grammar import Literal, parse_grammar, parse_query, read_section
from selective_magic_parser.tfl import load_signature
from selective_magic_parser.topdown import (
    DEFAULT_INDEX,
    IndexKey,
    Requirement,
    is_delayed,
    load_delays,
    load_index,
    make_control,
)

FIXTURES = Path(__file__).parent.parent / "fixtures" / "grammars"


@pytest.fixture
def sig():
    return load_signature((FIXTURES / "toy.sig").read_text())


@pytest.fixture
def append_delays(sig):
    return load_delays((FIXTURES / "append.delays").read_text(), sig)


class TestLoadDelays:
    def test_append_pattern(self, append_delays):
        """One pattern with two conditions."""
        (pattern,) = append_delays["append/3"]
        assert pattern.conditions == (
            Requirement(1, (), "list"),
            Requirement(3, (), "list"),
        )
        assert [c.describe() for c in pattern.conditions] == [
            "arg1 at <> is list",
            "arg3 at <> is list",
        ]

    def test_patterns_for_one_relation_accumulate(self, sig):
        """Several declarations for a relation are all kept."""
        patterns = load_delays(
            "delay c/1 when arg1 at <phon> is list.\ndelay c/1 when arg1 at <sem> is general.",
            sig,
        )
        assert len(patterns["c/1"]) == 2
        assert patterns["c/1"][1].conditions[0].bound is None

    def test_unknown_bound(self, sig):
        """Bounds must be declared types or general."""
        with pytest.raises(ControlError, match="unknown type 'lst'") as info:
            load_delays("\ndelay append/3 when arg1 at <> is lst.", sig)
        assert info.value.line == 2

    def test_argument_out_of_range(self, sig):
        """Argument numbers are checked against the arity."""
        with pytest.raises(ControlError, match="out of range"):
            load_delays("delay append/3 when arg4 at <> is list.", sig)

    def test_argument_zero_is_out_of_range(self, sig):
        """Arguments count from one."""
        with pytest.raises(ControlError, match="out of range"):
            load_delays("delay append/3 when arg0 at <> is list.", sig)

    def test_path_through_incompatible_types(self, sig):
        """A cat value can never bear subj."""
        with pytest.raises(ControlError, match="invalid path"):
            load_delays("delay c/1 when arg1 at <cat, subj> is general.", sig)

    def test_unknown_feature_in_path(self, sig):
        """Path features must be declared."""
        with pytest.raises(ControlError, match="invalid path"):
            load_delays("delay c/1 when arg1 at <colour> is general.", sig)

    def test_syntax_error(self, sig):
        """Malformed declarations are syntax errors."""
        with pytest.raises(ControlError, match="syntax error"):
            load_delays("delay append/3 arg1 is list.", sig)


class TestIsDelayed:
    def given_goal(self, sig, text):
        self.sig = sig
        self.goal = parse_query(text, sig)

    def then_delayed(self, patterns, expected):
        assert is_delayed(self.goal, patterns, self.sig) is expected

    def test_append_with_open_ends_waits(self, sig, append_delays):
        """Neither the first nor the last list is known."""
        self.given_goal(sig, "append(#X, #Y, #Z)")
        self.then_delayed(append_delays["append/3"], True)

    def test_append_with_list_typed_ends_waits(self, sig, append_delays):
        """list itself is no more specific than the bound."""
        self.given_goal(sig, "append(#X & list, #Y, #Z & list)")
        self.then_delayed(append_delays["append/3"], True)

    def test_known_first_list_runs(self, sig, append_delays):
        """A cons cell in arg1 meets its condition."""
        self.given_goal(sig, "append(<mary>, #Y, #Z)")
        self.then_delayed(append_delays["append/3"], False)

    def test_known_last_list_runs(self, sig, append_delays):
        """An empty list in arg3 meets its condition."""
        self.given_goal(sig, "append(#X, #Y, <>)")
        self.then_delayed(append_delays["append/3"], False)

    def test_patterns_of_other_relations_are_ignored(self, sig, append_delays):
        """A pattern only applies to its own relation and arity."""
        self.given_goal(sig, "constituent(sign)")
        self.then_delayed(append_delays["append/3"], False)

    def test_feature_path_reads_implicit_values(self, sig):
        """A missing arc reads as its appropriate type."""
        patterns = load_delays("delay c/1 when arg1 at <phon> is list.", sig)["c/1"]
        self.given_goal(sig, "c(sign)")
        self.then_delayed(patterns, True)
        self.given_goal(sig, "c(sign & phon:<mary>)")
        self.then_delayed(patterns, False)

    def test_path_the_value_can_never_have(self, sig):
        """A mary_lf can never bear phon, so nothing is waited for."""
        patterns = load_delays("delay c/1 when arg1 at <phon> is list.", sig)["c/1"]
        self.given_goal(sig, "c(mary_lf)")
        self.then_delayed(patterns, False)

    def test_general_bound(self, sig):
        """general waits for anything more specific than the appropriate type."""
        patterns = load_delays("delay c/1 when arg1 at <sem> is general.", sig)["c/1"]
        self.given_goal(sig, "c(sign & sem:sem)")
        self.then_delayed(patterns, True)
        self.given_goal(sig, "c(sign & sem:mary_lf)")
        self.then_delayed(patterns, False)

    def test_alternative_patterns(self, sig):
        """A goal waits while any one pattern holds."""
        patterns = load_delays(
            "delay p/2 when arg1 at <> is agr.\ndelay p/2 when arg2 at <> is agr.", sig
        )["p/2"]
        self.given_goal(sig, "p(third-sing, agr)")
        self.then_delayed(patterns, True)
        self.given_goal(sig, "p(third-sing, third-sing)")
        self.then_delayed(patterns, False)


class TestLoadIndex:
    def test_append_index(self, sig):
        """The declared key is read with its argument and path."""
        index = load_index((FIXTURES / "append.index").read_text(), sig)
        assert index == {"append/3": (IndexKey(1, ()),)}

    def test_several_keys(self, sig):
        """All keys declared for a relation are kept in order."""
        index = load_index(
            "index constituent/1 on arg1 at <cat>.\nindex constituent/1 on arg1 at <phon>.", sig
        )
        assert index["constituent/1"] == (IndexKey(1, ("cat",)), IndexKey(1, ("phon",)))

    def test_bad_path(self, sig):
        """Index paths are checked like delay paths."""
        with pytest.raises(ControlError, match="invalid path"):
            load_index("index constituent/1 on arg1 at <hd, cat, subj>.", sig)


class TestControlSpec:
    def test_empty_control(self, sig):
        """Missing texts give no delays and default indexing."""
        control = make_control(sig)
        assert control.patterns_for(Literal("append", (0, 1, 2))) == ()
        assert control.keys_for(Literal("append", (0, 1, 2))) == DEFAULT_INDEX
        assert control.keys_for(Literal("go")) == ()

    def test_declared_keys_replace_the_default(self, sig):
        """An index declaration overrides arg1 at <>."""
        control = make_control(sig, index_text="index append/3 on arg3 at <>.")
        assert control.keys_for(Literal("append", (0, 1, 2))) == (IndexKey(3, ()),)

    def test_check_against_grammar(self, sig):
        """Declarations for a relation used with another arity are reported."""
        # Given: The toy grammar
        grammar = parse_grammar(read_section(FIXTURES / "toy.tfg", "grammar"), sig)

        # When: Declaring a delay for append with two arguments
        control = make_control(
            sig,
            delays_text="delay append/2 when arg1 at <> is list.",
            index_text="index constituent/1 on arg1 at <cat>.",
        )

        # Then: The append mismatch is reported
        assert control.check_against(grammar) == [
            "control declaration for append/2 but append has arity 3"
        ]

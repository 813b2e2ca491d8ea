"""Tests for sectioned input files."""

import pytest

from selective_magic_parser.errors import TfgError
from selective_magic_parser.grammar import read_section, split_sections

SECTIONED = """\
# leading text belongs to no section
signature:
type a sub [b].
grammar:
p(a).
parse_types:
a
"""


class TestSplitSections:
    def test_headerless_text_is_the_default_section(self):
        """Without headers the whole text is one section."""
        assert split_sections("p(a).\n", "grammar") == {"grammar": "p(a).\n"}

    def test_sections_keep_line_numbers(self):
        """Foreign lines are blanked, not removed."""
        # When: Splitting a sectioned text for its grammar
        sections = split_sections(SECTIONED, "grammar")

        # Then: The grammar keeps its line numbers
        assert set(sections) == {"signature", "grammar", "parse_types"}
        grammar_lines = sections["grammar"].splitlines()
        assert len(grammar_lines) == len(SECTIONED.splitlines())
        assert grammar_lines[4] == "p(a)."
        assert [line for line in grammar_lines if line] == ["p(a)."]

    def test_text_before_first_header_is_dropped(self):
        """The leading comment appears in no section."""
        sections = split_sections(SECTIONED, "grammar")
        assert all("leading" not in body for body in sections.values())

    def test_repeated_header_continues_the_section(self):
        """A section may be split across the file."""
        text = "grammar:\np(a).\nsignature:\ntype a sub [b].\ngrammar:\nq(a).\n"
        grammar = split_sections(text, "grammar")["grammar"]
        assert [line for line in grammar.splitlines() if line] == ["p(a).", "q(a)."]

    def test_header_allows_surrounding_space(self):
        """Headers may be indented or padded."""
        sections = split_sections("  delays :  \ndelay p/1 when arg1 is a.\n", "grammar")
        assert set(sections) == {"delays"}


class TestReadSection:
    def test_section_of_sectioned_file(self, tmp_path):
        """A named section is returned."""
        path = tmp_path / "all.tfg"
        path.write_text(SECTIONED)
        assert "type a sub [b]." in read_section(path, "signature")

    def test_missing_section(self, tmp_path):
        """A section the file lacks is None."""
        path = tmp_path / "all.tfg"
        path.write_text(SECTIONED)
        assert read_section(path, "delays") is None

    def test_headerless_file(self, tmp_path):
        """A headerless file is read whole unless headers are required."""
        path = tmp_path / "plain.tfg"
        path.write_text("p(a).\n")
        assert read_section(path, "grammar") == "p(a).\n"
        assert read_section(path, "grammar", headerless=False) is None

    def test_unreadable_file(self, tmp_path):
        """OS failures become located errors."""
        missing = tmp_path / "missing.tfg"
        with pytest.raises(TfgError, match="cannot read file") as info:
            read_section(missing, "grammar")
        assert info.value.source == str(missing)

    def test_file_that_is_not_utf8(self, tmp_path):
        """Undecodable bytes become located errors."""
        # Given: A grammar file with an invalid byte
        path = tmp_path / "latin1.tfg"
        path.write_bytes(b"p(a).\n\xff\n")

        # When: The file is read
        # Then: Reading fails with the file named
        with pytest.raises(TfgError, match="not UTF-8 text: byte 0xff at offset 6") as info:
            read_section(path, "grammar")
        assert info.value.source == str(path)

"""Tests for CLI interface."""

import json
from pathlib import Path

import pytest

from selective_magic_parser.cli import (
    EXIT_LOAD_ERROR,
    EXIT_NO_RESULT,
    EXIT_OK,
    EXIT_RESOURCE_LIMIT,
    run_cli,
)

MARY_SLEEPS = "constituent(sign & cat:s & phon:<mary, sleeps> & sem:(sleep & subj:mary_lf))"


@pytest.fixture
def fixtures_path():
    return Path(__file__).parent / "fixtures" / "grammars"


class TestCLI:
    def given_args(self, *args):
        self.args = list(args)

    async def when_cli_is_run(self, capsys):
        self.exit_code = await run_cli(self.args)
        self.captured = capsys.readouterr()

    def then_exit_code_is(self, expected):
        assert self.exit_code == expected

    def then_stdout_lines_are(self, expected):
        assert self.captured.out.splitlines() == expected

    def then_stderr_contains(self, fragment):
        assert fragment in self.captured.err

    @pytest.mark.asyncio
    async def test_parse_prints_answers(self, fixtures_path, capsys):
        """A grammatical sentence exits 0 and prints its reading."""
        # Given: The toy grammar and a sentence it covers
        self.given_args("parse", "--grammar", str(fixtures_path / "toy.tfg"), "mary sleeps")

        # When: The sentence is parsed
        await self.when_cli_is_run(capsys)

        # Then: The single reading is printed
        self.then_exit_code_is(EXIT_OK)
        self.then_stdout_lines_are(["answers: 1", f"  {MARY_SLEEPS}"])

    @pytest.mark.asyncio
    async def test_parse_without_answers(self, fixtures_path, capsys):
        """An ungrammatical sentence exits 1."""
        self.given_args("parse", "--grammar", str(fixtures_path / "toy.tfg"), "sleeps mary")
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_NO_RESULT)
        self.then_stdout_lines_are(["answers: 0"])

    @pytest.mark.asyncio
    @pytest.mark.parametrize("strategy_args", [["--magic-mode", "full"], ["--agenda", "lifo"]])
    async def test_parse_options(self, fixtures_path, capsys, strategy_args):
        """Mode and agenda options do not change the answers."""
        self.given_args(
            "parse", "--grammar", str(fixtures_path / "toy.tfg"), *strategy_args, "mary sleeps"
        )
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_OK)
        self.then_stdout_lines_are(["answers: 1", f"  {MARY_SLEEPS}"])

    @pytest.mark.asyncio
    async def test_parse_floundered(self, fixtures_path, capsys):
        """Floundered answers are listed with their delayed goals."""
        # Given: A grammar whose agreement check is never instantiated
        self.given_args("parse", "--grammar", str(fixtures_path / "flounder.tfg"), "sleeps")

        # When: The sentence is parsed
        await self.when_cli_is_run(capsys)

        # Then: No answer, one floundered edge with its delayed goal
        self.then_exit_code_is(EXIT_NO_RESULT)
        self.then_stdout_lines_are(
            [
                "answers: 0",
                "floundered: 1",
                "  constituent(sign & cat:s & phon:<sleeps> & sem:sleep)",
                "    delayed: agree(agr)",
            ]
        )

    @pytest.mark.asyncio
    async def test_parse_records(self, fixtures_path, capsys):
        """Records output is one JSON object."""
        self.given_args(
            "parse",
            "--grammar",
            str(fixtures_path / "toy.tfg"),
            "--format",
            "records",
            "mary sleeps",
        )
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_OK)
        record = json.loads(self.captured.out)
        assert record["strategy"] == "selective"
        assert record["sentence"] == ["mary", "sleeps"]
        assert record["answers"] == [MARY_SLEEPS]
        assert record["statistics"]["edges_stored"] == 7

    @pytest.mark.asyncio
    async def test_parse_trace_goes_to_stderr(self, fixtures_path, capsys):
        """Trace events do not mix with the answers."""
        # Given: Tracing is switched on
        self.given_args(
            "parse", "--grammar", str(fixtures_path / "toy.tfg"), "--trace", "mary sleeps"
        )

        # When: The sentence is parsed
        await self.when_cli_is_run(capsys)

        # Then: Events are on stderr only
        self.then_exit_code_is(EXIT_OK)
        self.then_stderr_contains("SEED\t")
        self.then_stderr_contains("INIT-FACT\tclause=c2\t")
        assert "SEED" not in self.captured.out

    @pytest.mark.asyncio
    async def test_missing_grammar_file(self, tmp_path, capsys):
        """Unreadable inputs exit 2."""
        self.given_args("parse", "--grammar", str(tmp_path / "missing.tfg"), "mary")
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_LOAD_ERROR)
        self.then_stderr_contains("cannot read file")

    @pytest.mark.asyncio
    async def test_grammar_file_that_is_not_utf8(self, tmp_path, capsys):
        """Undecodable input exits 2 with the file named."""
        # Given: A grammar file with an invalid byte
        grammar = tmp_path / "bad.tfg"
        grammar.write_bytes(b"\xff\n")
        self.given_args("parse", "--grammar", str(grammar), "mary")

        # When: The sentence is parsed
        await self.when_cli_is_run(capsys)

        # Then: Loading fails cleanly
        self.then_exit_code_is(EXIT_LOAD_ERROR)
        self.then_stderr_contains(f"{grammar}: not UTF-8 text")

    @pytest.mark.asyncio
    async def test_check_grammar_file_that_is_not_utf8(self, tmp_path, capsys):
        """check reports undecodable input as a problem."""
        grammar = tmp_path / "bad.tfg"
        grammar.write_bytes(b"\xff\n")
        self.given_args("check", "--grammar", str(grammar))
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_NO_RESULT)
        assert self.captured.out.startswith(f"{grammar}: not UTF-8 text")

    @pytest.mark.asyncio
    async def test_resource_limit(self, fixtures_path, capsys):
        """Hitting a cap exits 3."""
        self.given_args(
            "parse", "--grammar", str(fixtures_path / "toy.tfg"), "--max-edges", "1", "mary sleeps"
        )
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_RESOURCE_LIMIT)
        self.then_stderr_contains("edge limit of 1 exceeded")

    @pytest.mark.asyncio
    async def test_non_positive_limit(self, fixtures_path, capsys):
        """Invalid caps are a configuration error."""
        self.given_args(
            "parse", "--grammar", str(fixtures_path / "toy.tfg"), "--max-depth", "0", "mary"
        )
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_LOAD_ERROR)
        self.then_stderr_contains("max-depth must be positive")

    @pytest.mark.asyncio
    async def test_no_command(self, capsys):
        """Without a command the usage is shown."""
        self.given_args()
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(1)
        self.then_stderr_contains("usage")

    @pytest.mark.asyncio
    async def test_grammar_is_required(self, capsys):
        """Every command needs a grammar."""
        self.given_args("parse", "mary sleeps")
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(2)
        self.then_stderr_contains("required")

    @pytest.mark.asyncio
    async def test_check_clean_grammar(self, fixtures_path, capsys):
        """A valid grammar has no problems."""
        self.given_args("check", "--grammar", str(fixtures_path / "toy.tfg"))
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_OK)
        self.then_stderr_contains("0 problem(s) found")

    @pytest.mark.asyncio
    async def test_check_reports_problems(self, fixtures_path, tmp_path, capsys):
        """Problems are printed one per line and exit 1."""
        # Given: A grammar using an undeclared type on line 2
        grammar = tmp_path / "bad.tfg"
        grammar.write_text("p(sign).\np(verb).\n")
        self.given_args(
            "check", "--grammar", str(grammar), "--signature", str(fixtures_path / "toy.sig")
        )

        # When: The inputs are checked
        await self.when_cli_is_run(capsys)

        # Then: One located problem is printed
        self.then_exit_code_is(EXIT_NO_RESULT)
        self.then_stdout_lines_are([f"{grammar}:2: unknown type 'verb'"])
        self.then_stderr_contains("1 problem(s) found")

    @pytest.mark.asyncio
    async def test_compile_to_file_and_parse_it(self, fixtures_path, tmp_path, capsys):
        """A written compilation can be parsed with --compiled."""
        # Given: The toy grammar compiled to a file
        output = tmp_path / "toy.compiled.tfg"
        self.given_args("compile", "--grammar", str(fixtures_path / "toy.tfg"), "-o", str(output))
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_OK)
        self.then_stderr_contains(f"Compiled grammar written to: {output}")
        assert "magic_constituent" in output.read_text()
        assert "magic_append" not in output.read_text()

        # When: The compiled file is parsed
        self.given_args("parse", "--grammar", str(output), "--compiled", "mary sleeps")
        await self.when_cli_is_run(capsys)

        # Then: The answer is the same as from the source grammar
        self.then_exit_code_is(EXIT_OK)
        self.then_stdout_lines_are(["answers: 1", f"  {MARY_SLEEPS}"])

    @pytest.mark.asyncio
    async def test_compile_full_mode_to_stdout(self, fixtures_path, capsys):
        """Full mode magics append too."""
        self.given_args(
            "compile", "--grammar", str(fixtures_path / "toy.tfg"), "--magic-mode", "full"
        )
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_OK)
        assert "% c1.m3: magic rule for c1" in self.captured.out
        assert "magic_append(" in self.captured.out

    @pytest.mark.asyncio
    async def test_bench(self, fixtures_path, capsys):
        """Every sentence is run under every strategy."""
        # Given: A corpus of three sentences
        self.given_args(
            "bench",
            "--grammar",
            str(fixtures_path / "toy.tfg"),
            str(fixtures_path / "corpus.txt"),
        )

        # When: The corpus is benchmarked
        await self.when_cli_is_run(capsys)

        # Then: Nine rows agree on the answer counts
        self.then_exit_code_is(EXIT_OK)
        header, *rows = self.captured.out.splitlines()
        assert header.split("\t")[:3] == ["sentence", "strategy", "answers"]
        cells = [row.split("\t") for row in rows]
        assert len(cells) == 9
        answers = {(c[0], c[1]): c[2] for c in cells}
        for strategy in ("selective", "full", "topdown"):
            assert answers["mary sleeps", strategy] == "1"
            assert answers["sleeps mary", strategy] == "0"
            assert answers["mary", strategy] == "0"

    @pytest.mark.asyncio
    async def test_bench_records_with_limit(self, fixtures_path, capsys):
        """A cell hitting a cap records the error and the run goes on."""
        self.given_args(
            "bench",
            "--grammar",
            str(fixtures_path / "toy.tfg"),
            "--format",
            "records",
            "--max-edges",
            "5",
            str(fixtures_path / "corpus.txt"),
        )
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_OK)
        records = [json.loads(line) for line in self.captured.out.splitlines()]
        assert len(records) == 9
        assert any("edge limit of 5" in r.get("error", "") for r in records)

    @pytest.mark.asyncio
    async def test_bench_sentence_with_unknown_word(self, fixtures_path, tmp_path, capsys):
        """A sentence that cannot become a goal gets error rows and the run goes on."""
        # Given: A corpus whose second sentence uses an undeclared word
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("mary sleeps\njohn sleeps\n")
        self.given_args("bench", "--grammar", str(fixtures_path / "toy.tfg"), str(corpus))

        # When: The corpus is benchmarked
        await self.when_cli_is_run(capsys)

        # Then: Every cell has a row; the failing ones carry the error and no answers
        self.then_exit_code_is(EXIT_OK)
        cells = [row.split("\t") for row in self.captured.out.splitlines()[1:]]
        assert len(cells) == 6
        failed = [c for c in cells if c[0] == "john sleeps"]
        assert len(failed) == 3
        assert all(c[2] == "0" and "unknown type 'john'" in c[-1] for c in failed)
        assert all(c[2] == "1" for c in cells if c[0] == "mary sleeps")

    @pytest.mark.asyncio
    async def test_bench_missing_corpus(self, fixtures_path, tmp_path, capsys):
        """An unreadable corpus exits 2."""
        self.given_args(
            "bench", "--grammar", str(fixtures_path / "toy.tfg"), str(tmp_path / "none.txt")
        )
        await self.when_cli_is_run(capsys)
        self.then_exit_code_is(EXIT_LOAD_ERROR)
        self.then_stderr_contains("cannot read corpus")

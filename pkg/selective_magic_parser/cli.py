"""Command-line interface for selective-magic-parser."""

import argparse
import asyncio
import logging
import sys
from pathlib import Path

from selective_magic_parser.bottomup import AgendaDiscipline, Tracer
from selective_magic_parser.errors import ResourceLimitExceeded, TfgError
from selective_magic_parser.magic import MagicMode
from selective_magic_parser.models import ParseResult
from selective_magic_parser.session import DEFAULT_GOAL, ParserSession, SessionConfig, Strategy

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NO_RESULT = 1
EXIT_LOAD_ERROR = 2
EXIT_RESOURCE_LIMIT = 3


def setup_logging(verbose: bool = False):
    """Configure logging to stderr."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _session_options() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--grammar",
        "-g",
        required=True,
        help="Grammar file (.tfg); may also hold signature and control sections",
    )
    common.add_argument("--signature", "-s", help="Signature file, if not in the grammar file")
    common.add_argument(
        "--parse-types",
        "-p",
        help="Parse type file or comma-separated type names (e.g. 'sign')",
    )
    common.add_argument("--delays", help="Delay pattern file")
    common.add_argument("--index", help="Index declaration file")
    common.add_argument(
        "--magic-mode",
        choices=[m.value for m in MagicMode],
        default=MagicMode.SELECTIVE.value,
        help="Compile only parse type constraints, or all (default: selective)",
    )
    common.add_argument(
        "--agenda",
        choices=[a.value for a in AgendaDiscipline],
        default=AgendaDiscipline.FIFO.value,
        help="Agenda discipline (default: fifo)",
    )
    common.add_argument("--max-edges", type=int, default=100_000, help="Edge cap (default: 100000)")
    common.add_argument(
        "--max-steps", type=int, default=1_000_000, help="Agenda step cap (default: 1000000)"
    )
    common.add_argument(
        "--max-depth", type=int, default=512, help="Top-down depth cap (default: 512)"
    )
    common.add_argument(
        "--phon-path", default="phon", help="Feature path to phonology (default: phon)"
    )
    common.add_argument(
        "--goal",
        default=DEFAULT_GOAL,
        help="Goal template; $PHON stands for the sentence as a list",
    )
    common.add_argument(
        "--trace", action="store_true", help="Write bottom-up trace events to stderr"
    )
    common.add_argument(
        "--format",
        choices=["text", "records"],
        default="text",
        help="Output format (default: text)",
    )
    common.add_argument(
        "--no-closure",
        action="store_true",
        help="Always select the leftmost goal instead of deterministic ones first",
    )
    common.add_argument(
        "--compiled",
        action="store_true",
        help="The grammar file is output of the compile command",
    )
    common.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")
    return common


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser with subcommands."""
    parser = argparse.ArgumentParser(
        prog="tfg",
        description="Parse with typed feature grammars using selective magic compilation",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    common = _session_options()

    subparsers.add_parser(
        "check", parents=[common], help="Validate signature, grammar and control files"
    )

    compile_parser = subparsers.add_parser(
        "compile", parents=[common], help="Write the magic-compiled grammar"
    )
    compile_parser.add_argument("--output", "-o", help="Output path (default: stdout)")

    parse_parser = subparsers.add_parser("parse", parents=[common], help="Parse one sentence")
    parse_parser.add_argument("sentence", help="Words separated by spaces (may be empty)")

    bench_parser = subparsers.add_parser(
        "bench", parents=[common], help="Compare strategies over a corpus"
    )
    bench_parser.add_argument("corpus", help="File with one sentence per line")

    return parser


def config_from_args(parsed: argparse.Namespace) -> SessionConfig:
    return SessionConfig(
        grammar=parsed.grammar,
        signature=parsed.signature,
        parse_types=parsed.parse_types,
        delays=parsed.delays,
        index=parsed.index,
        magic_mode=MagicMode(parsed.magic_mode),
        agenda=AgendaDiscipline(parsed.agenda),
        max_edges=parsed.max_edges,
        max_steps=parsed.max_steps,
        max_depth=parsed.max_depth,
        phon_path=parsed.phon_path,
        goal=parsed.goal,
        trace=parsed.trace,
        output_format=parsed.format,
        closure=not parsed.no_closure,
        compiled=parsed.compiled,
    )


def _report_load_error(error: TfgError) -> int:
    logger.error(f"Loading failed: {error.message}")
    print(f"Error: {error.located()}", file=sys.stderr)
    return EXIT_LOAD_ERROR


async def run_check(config: SessionConfig) -> int:
    """Run the check command."""
    problems = ParserSession(config).diagnostics()
    for problem in problems:
        print(problem)
    print(f"{len(problems)} problem(s) found", file=sys.stderr)
    return EXIT_OK if not problems else EXIT_NO_RESULT


async def run_compile(config: SessionConfig, output: str | None) -> int:
    """Run the compile command.

    Args:
        config: Session configuration
        output: Output path, or None for stdout

    Returns:
        Exit code
    """
    try:
        session = ParserSession(config).load()
        document = session.compiled_document()
    except TfgError as e:
        return _report_load_error(e)
    if output is None:
        sys.stdout.write(document)
    else:
        Path(output).write_text(document, encoding="utf-8")
        print(f"Compiled grammar written to: {output}", file=sys.stderr)
    return EXIT_OK


def format_result(result: ParseResult, output_format: str) -> str:
    if output_format == "records":
        return result.to_json(indent=None)
    lines = [f"answers: {len(result.answers)}"]
    lines.extend(f"  {answer}" for answer in result.answers)
    if result.floundered:
        lines.append(f"floundered: {len(result.floundered)}")
        for entry in result.floundered:
            lines.append(f"  {entry.fact}")
            lines.extend(f"    delayed: {goal}" for goal in entry.delayed)
    if result.error:
        lines.append(f"error: {result.error}")
    return "\n".join(lines)


async def run_parse(config: SessionConfig, sentence: str) -> int:
    """Run the parse command.

    Args:
        config: Session configuration
        sentence: Words separated by whitespace

    Returns:
        Exit code (0 iff at least one answer was found)
    """
    try:
        session = ParserSession(config).load()
        tracer = Tracer(sys.stderr if config.trace else None)
        result = session.parse(sentence.split(), tracer=tracer)
    except ResourceLimitExceeded as e:
        logger.error(f"Parse aborted: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_RESOURCE_LIMIT
    except TfgError as e:
        return _report_load_error(e)
    print(format_result(result, config.output_format))
    return EXIT_OK if result.answers else EXIT_NO_RESULT


def _parse_cell(session: ParserSession, words: list[str], strategy: Strategy) -> ParseResult:
    try:
        return session.parse(words, strategy)
    except TfgError as e:
        logger.warning(f"{strategy} on '{' '.join(words)}': {e.located()}")
        return ParseResult(
            strategy=str(strategy), sentence=words, answers=[], error=e.located()
        )


async def run_bench(config: SessionConfig, corpus: str) -> int:
    """Run the bench command: every sentence under every strategy, in parallel sessions."""
    try:
        lines = Path(corpus).read_text(encoding="utf-8").splitlines()
        sentences = [line.split() for line in lines if line.strip() and not line.startswith("#")]
        session = ParserSession(config).load()
        strategies = session.strategies
        for strategy in strategies:
            if strategy is not Strategy.TOPDOWN:
                session.compile(MagicMode(str(strategy)))
    except OSError as e:
        print(f"Error: cannot read corpus: {e.strerror}", file=sys.stderr)
        return EXIT_LOAD_ERROR
    except TfgError as e:
        return _report_load_error(e)

    cells = [(words, strategy) for words in sentences for strategy in strategies]
    results = await asyncio.gather(
        *(asyncio.to_thread(_parse_cell, session, words, strategy) for words, strategy in cells)
    )
    if config.output_format == "records":
        for result in results:
            print(result.to_json(indent=None))
        return EXIT_OK
    print("sentence\tstrategy\tanswers\tstored\tpruned\tmatches\ttopdown_steps\terror")
    for result in results:
        stats = result.statistics
        print(
            "\t".join(
                [
                    " ".join(result.sentence),
                    result.strategy,
                    str(len(result.answers)),
                    str(stats.edges_stored),
                    str(stats.edges_pruned),
                    str(stats.match_calls),
                    str(stats.topdown_steps),
                    result.error or "",
                ]
            )
        )
    return EXIT_OK


async def run_cli(args: list[str]) -> int:
    """Run the CLI with the given arguments.

    Args:
        args: Command-line arguments (without program name)

    Returns:
        Exit code
    """
    try:
        parsed = create_parser().parse_args(args)
    except SystemExit as e:
        return e.code if e.code else 1

    if parsed.command is None:
        create_parser().print_help(sys.stderr)
        return 1

    setup_logging(parsed.verbose)
    try:
        config = config_from_args(parsed)
    except TfgError as e:
        return _report_load_error(e)

    if parsed.command == "check":
        return await run_check(config)
    elif parsed.command == "compile":
        return await run_compile(config, parsed.output)
    elif parsed.command == "parse":
        return await run_parse(config, parsed.sentence)
    elif parsed.command == "bench":
        return await run_bench(config, parsed.corpus)

    return 1


def main():
    """Entry point for the CLI."""
    exit_code = asyncio.run(run_cli(sys.argv[1:]))
    sys.exit(exit_code)


if __name__ == "__main__":
    main()

"""Parser session: loads the inputs once and parses sentences with a chosen strategy."""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from types import MappingProxyType
from typing import TypeVar

from selective_magic_parser.bottomup import (
    AgendaDiscipline,
    BottomUpEngine,
    EngineLimits,
    Tracer,
)
from selective_magic_parser.errors import ControlError, TfgError
from selective_magic_parser.grammar import (
    Grammar,
    Query,
    format_literals,
    freeze_literals,
    parse_grammar,
    parse_query,
    read_section,
)
from selective_magic_parser.magic import (
    MagicGrammar,
    MagicMode,
    ParseTypeSpec,
    load_parse_types,
    restore_magic_grammar,
    transform_grammar,
)
from selective_magic_parser.models import FlounderedAnswer, ParseResult, ParseStatistics
from selective_magic_parser.tfl import Signature, Workspace, format_signature, load_signature
from selective_magic_parser.topdown import ControlSpec, TopDownInterpreter, load_delays, load_index

logger = logging.getLogger(__name__)

DEFAULT_GOAL = "constituent(sign & cat:s & phon:$PHON & sem:sem)"
PHON_PLACEHOLDER = "$PHON"

T = TypeVar("T")


class Strategy(StrEnum):
    SELECTIVE = "selective"
    FULL = "full"
    TOPDOWN = "topdown"


@dataclass
class SessionConfig:
    """Everything one session needs, as given on the command line."""

    grammar: str
    signature: str | None = None
    parse_types: str | None = None
    delays: str | None = None
    index: str | None = None
    magic_mode: MagicMode = MagicMode.SELECTIVE
    agenda: AgendaDiscipline = AgendaDiscipline.FIFO
    max_edges: int = 100_000
    max_steps: int = 1_000_000
    max_depth: int = 512
    phon_path: str = "phon"
    goal: str = DEFAULT_GOAL
    trace: bool = False
    output_format: str = "text"
    closure: bool = True
    compiled: bool = False

    def __post_init__(self):
        self.magic_mode = MagicMode(self.magic_mode)
        self.agenda = AgendaDiscipline(self.agenda)
        for name in ("max_edges", "max_steps", "max_depth"):
            if getattr(self, name) <= 0:
                raise ControlError(f"{name.replace('_', '-')} must be positive")

    @property
    def limits(self) -> EngineLimits:
        return EngineLimits(self.max_edges, self.max_steps, self.max_depth)

    @property
    def phon_features(self) -> tuple[str, ...]:
        return tuple(f for f in self.phon_path.replace(",", ".").split(".") if f)

    @property
    def default_strategy(self) -> Strategy:
        return Strategy(str(self.magic_mode))


def _from(source: str | Path, load: Callable[[], T]) -> T:
    """Run a loader, stamping the file name onto any error it raises."""
    try:
        return load()
    except TfgError as e:
        if e.source is None:
            e.source = str(source)
        raise


@dataclass
class ParserSession:
    """Loaded signature, grammar and control configuration for one config.

    Compiled grammars are cached per mode; engines are created per parse so
    parses may run in parallel threads.
    """

    config: SessionConfig
    signature: Signature | None = field(default=None, init=False)
    grammar: Grammar | None = field(default=None, init=False)
    spec: ParseTypeSpec | None = field(default=None, init=False)
    control: ControlSpec = field(default_factory=ControlSpec, init=False)
    control_texts: dict[str, str] = field(default_factory=dict, init=False, repr=False)
    _compiled: dict[MagicMode, MagicGrammar] = field(default_factory=dict, init=False, repr=False)

    def load(self) -> "ParserSession":
        """Read every input file.

        Raises:
            TfgError: On the first unreadable or invalid input, with its file name
        """
        self.signature = self._load_signature()
        self.grammar = self._load_grammar()
        self.spec = self._load_parse_types()
        self.control = self._load_control()
        return self

    def _load_signature(self) -> Signature:
        config = self.config
        source = config.signature or config.grammar
        headerless = config.signature is not None
        text = _from(source, lambda: read_section(source, "signature", headerless))
        if text is None:
            raise TfgError("no signature given", source=config.grammar)
        return _from(source, lambda: load_signature(text))

    def _load_grammar(self) -> Grammar:
        path = self.config.grammar
        text = _from(path, lambda: read_section(path, "grammar")) or ""
        return _from(path, lambda: parse_grammar(text, self.signature, path))

    def _section(self, option: str | None, section: str) -> tuple[str, str] | None:
        """Text and source of a control section from its own file or the grammar file."""
        if option is not None:
            text = _from(option, lambda: read_section(option, section))
            return (text or "", option)
        path = self.config.grammar
        text = _from(path, lambda: read_section(path, section, headerless=False))
        return None if text is None else (text, path)

    def _load_parse_types(self) -> ParseTypeSpec:
        option = self.config.parse_types
        if option is not None and not Path(option).exists():
            names = [n.strip() for n in option.split(",") if n.strip()]
            return _from("--parse-types", lambda: ParseTypeSpec.from_names(names, self.signature))
        found = self._section(option, "parse_types")
        if found is None:
            return ParseTypeSpec((), frozenset())
        text, source = found
        return _from(source, lambda: load_parse_types(text, self.signature))

    def _load_control(self) -> ControlSpec:
        delays = self._section(self.config.delays, "delays")
        index = self._section(self.config.index, "index")
        self.control_texts = {
            name: found[0] for name, found in (("delays", delays), ("index", index)) if found
        }
        delay_map, index_map = {}, {}
        if delays:
            delay_map = _from(delays[1], lambda: load_delays(delays[0], self.signature))
        if index:
            index_map = _from(index[1], lambda: load_index(index[0], self.signature))
        return ControlSpec(MappingProxyType(delay_map), MappingProxyType(index_map))

    def diagnostics(self) -> list[str]:
        """Every problem found in the inputs, as ``file:line: message`` lines."""
        problems: list[str] = []

        def attempt(step: Callable[[], T]) -> T | None:
            try:
                return step()
            except TfgError as e:
                problems.append(e.located())
                return None

        self.signature = attempt(self._load_signature)
        if self.signature is None:
            return problems
        self.grammar = attempt(self._load_grammar)
        self.spec = attempt(self._load_parse_types)
        self.control = attempt(self._load_control) or ControlSpec()
        if self.grammar is not None:
            problems.extend(
                f"{self.config.grammar}: {p}" for p in self.control.check_against(self.grammar)
            )
            if self.spec is not None:
                attempt(lambda: self.compile())
        return problems

    def compile(self, mode: MagicMode | None = None) -> MagicGrammar:
        """The magic grammar for ``mode`` (the configured one by default)."""
        mode = MagicMode(mode or self.config.magic_mode)
        if mode not in self._compiled:
            if self.config.compiled:
                magic = restore_magic_grammar(self.grammar, self.spec, mode)
            else:
                magic = _from(
                    self.config.grammar,
                    lambda: transform_grammar(self.grammar, self.spec, mode),
                )
            self._compiled[mode] = magic
        return self._compiled[mode]

    @property
    def source_grammar(self) -> Grammar:
        """The grammar before compilation, even when a compiled file was loaded."""
        if self.config.compiled:
            return self.compile().source
        return self.grammar

    @property
    def strategies(self) -> tuple[Strategy, ...]:
        """Strategies this session can run; a compiled file fixes the magic mode."""
        if self.config.compiled:
            return (self.config.default_strategy, Strategy.TOPDOWN)
        return tuple(Strategy)

    def goal_for(self, words: Sequence[str]) -> Query:
        """The goal template with the sentence filled in as a list."""
        phon = "<" + ", ".join(words) + ">"
        text = self.config.goal.replace(PHON_PLACEHOLDER, phon)
        return _from("--goal", lambda: parse_query(text, self.signature))

    def parse(
        self,
        words: Sequence[str],
        strategy: Strategy | None = None,
        tracer: Tracer | None = None,
    ) -> ParseResult:
        """Parse one sentence.

        Raises:
            TfgError: If the goal cannot be built from the sentence
            ResourceLimitExceeded: If a cap is hit
        """
        strategy = Strategy(strategy or self.config.default_strategy)
        goal = self.goal_for(words)
        logger.info(f"Parsing {' '.join(words) or '(empty)'} with {strategy} strategy")
        if strategy is Strategy.TOPDOWN:
            return self._parse_topdown(goal, words)
        magic = self.compile(MagicMode(str(strategy)))
        if not magic.policy.matches(goal.pool, goal.literal):
            logger.info("Goal is not a parse type literal; solving it top-down")
            result = self._parse_topdown(goal, words)
            result.strategy = str(strategy)
            return result
        engine = BottomUpEngine(
            magic,
            self.control,
            limits=self.config.limits,
            agenda=self.config.agenda,
            closure=self.config.closure,
            phon_path=self.config.phon_features,
            tracer=tracer,
        )
        return engine.parse(goal, list(words))

    def _parse_topdown(self, goal: Query, words: Sequence[str]) -> ParseResult:
        grammar = self.source_grammar
        interpreter = TopDownInterpreter(
            grammar, self.control, closure=self.config.closure, max_depth=self.config.max_depth
        )
        ws = Workspace(grammar.signature)
        literals = [lit.shifted(ws.load(goal.pool)) for lit in goal.literals]
        answers: set[str] = set()
        floundered: dict[tuple[str, ...], FlounderedAnswer] = {}
        for residue in interpreter.solve(ws, literals):
            pool, frozen = freeze_literals(ws, [*literals, *residue])
            texts = format_literals(grammar.signature, pool, frozen)
            if residue:
                floundered[tuple(texts)] = FlounderedAnswer(texts[0], texts[len(literals) :])
            else:
                answers.add(texts[0])
        td = interpreter.statistics
        return ParseResult(
            strategy=str(Strategy.TOPDOWN),
            sentence=list(words),
            answers=sorted(answers),
            floundered=[floundered[k] for k in sorted(floundered)],
            statistics=ParseStatistics(topdown_steps=td.steps, choice_points=td.choice_points),
        )

    def compiled_document(self, mode: MagicMode | None = None) -> str:
        """A sectioned file holding the signature, control sections and compiled clauses.

        Loading it again with ``compiled=True`` gives the same parses.
        """
        magic = self.compile(mode)
        parts = ["signature:", format_signature(self.signature), "parse_types:"]
        parts.extend(self.spec.declared)
        parts.append("")
        for name, text in self.control_texts.items():
            lines = [line for line in text.splitlines() if line.strip()]
            parts.extend([f"{name}:", *lines, ""])
        parts.extend(["grammar:", magic.to_text()])
        return "\n".join(parts)

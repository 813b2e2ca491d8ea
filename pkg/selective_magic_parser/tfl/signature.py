"""Signatures: type hierarchy plus appropriateness conditions."""

import logging
from collections.abc import Iterable, Mapping
from types import MappingProxyType

from arpeggio import EOF, Optional, ZeroOrMore
from arpeggio import RegExMatch as _

from selective_magic_parser.errors import SignatureError, UnknownTypeError
from selective_magic_parser.peg import children, location, parse_text, text_of

logger = logging.getLogger(__name__)

TOP = "top"


def comment():
    return _(r"#.*")


def type_name():
    return _(r"[a-z][A-Za-z0-9_\-]*")


def child_list():
    return "[", Optional(type_name, ZeroOrMore(",", type_name)), "]"


def feature_decl():
    return type_name, ":", type_name


def intro_list():
    return "[", Optional(feature_decl, ZeroOrMore(",", feature_decl)), "]"


def sub_decl():
    return "type", type_name, "sub", child_list, "."


def intro_decl():
    return "type", type_name, "intro", intro_list, "."


def signature_file():
    return ZeroOrMore([sub_decl, intro_decl]), EOF


_RULES = frozenset({"type_name", "feature_decl", "sub_decl", "intro_decl"})


class Signature:
    """An immutable type hierarchy with appropriateness conditions.

    Meets are precomputed at construction; the hierarchy is small enough that
    the full table is cheaper than computing greatest lower bounds on demand.
    """

    def __init__(
        self,
        types: Iterable[str],
        subtype_edges: Mapping[str, Iterable[str]],
        introductions: Mapping[str, Iterable[tuple[str, str]]],
    ):
        self.types: tuple[str, ...] = tuple(dict.fromkeys([TOP, *types]))
        known = set(self.types)
        edges = {t: tuple(dict.fromkeys(subtype_edges.get(t, ()))) for t in self.types}
        for parent, kids in edges.items():
            for kid in kids:
                if kid not in known:
                    raise UnknownTypeError(f"unknown type {kid!r} below {parent!r}")
        parents: dict[str, list[str]] = {t: [] for t in self.types}
        for parent, kids in edges.items():
            for kid in kids:
                parents[kid].append(parent)
        for t in self.types:
            if t != TOP and not parents[t]:
                parents[t].append(TOP)
                edges[TOP] = (*edges[TOP], t)
        if parents[TOP]:
            raise SignatureError(f"{TOP!r} cannot be a subtype of {parents[TOP][0]!r}")

        order = _topological_order(self.types, edges)
        self.subtype_edges: Mapping[str, tuple[str, ...]] = MappingProxyType(edges)
        self._parents = {t: tuple(ps) for t, ps in parents.items()}
        self._below = _downsets(order, edges)
        self._meets = self._meet_table()
        self.appropriateness: Mapping[str, tuple[tuple[str, str], ...]] = (
            MappingProxyType(self._inherit(order, introductions))
        )
        self._features = {
            t: dict(pairs) for t, pairs in self.appropriateness.items()
        }
        self._introduced = self._introduction_sites(introductions)
        logger.info(
            f"Signature loaded: {len(self.types)} types, "
            f"{len(self.feature_bearing_types())} feature-bearing"
        )

    def __contains__(self, t: str) -> bool:
        return t in self._below

    def check(self, t: str) -> str:
        """Return ``t`` if it is declared, else raise UnknownTypeError."""
        if t not in self._below:
            raise UnknownTypeError(f"unknown type {t!r}")
        return t

    def is_subtype(self, t1: str, t2: str) -> bool:
        """True iff t1 is t2 or lies below it."""
        self.check(t1)
        return t1 in self._below[self.check(t2)]

    def meet(self, t1: str, t2: str) -> str | None:
        """Greatest lower bound of two types, or None if they have no common subtype."""
        self.check(t1)
        self.check(t2)
        return self._meets[t1, t2]

    def subtypes(self, t: str) -> frozenset[str]:
        """Every type equal to or below ``t``."""
        return self._below[self.check(t)]

    def features(self, t: str) -> Mapping[str, str]:
        """Appropriate features of ``t`` mapped to their value restrictions."""
        return self._features[self.check(t)]

    def restriction(self, t: str, feature: str) -> str | None:
        """Value restriction of ``feature`` at ``t``; None if not appropriate."""
        return self._features[self.check(t)].get(feature)

    def introduced_at(self, feature: str) -> str | None:
        """The unique most general type bearing ``feature``."""
        return self._introduced.get(feature)

    def feature_bearing_types(self) -> tuple[str, ...]:
        """Types whose own declaration introduces or refines a feature."""
        return tuple(t for t in self.types if t in self._declared_intro)

    def has_lists(self) -> bool:
        return (
            "e_list" in self
            and "ne_list" in self
            and self.restriction("ne_list", "hd") is not None
            and self.restriction("ne_list", "tl") is not None
        )

    def _meet_table(self) -> dict[tuple[str, str], str | None]:
        table: dict[tuple[str, str], str | None] = {}
        for i, a in enumerate(self.types):
            for b in self.types[i:]:
                common = self._below[a] & self._below[b]
                result = None
                if common:
                    glbs = sorted(c for c in common if common <= self._below[c])
                    if len(glbs) != 1:
                        raise SignatureError(
                            f"types {a!r} and {b!r} have no unique greatest lower bound"
                        )
                    result = glbs[0]
                table[a, b] = table[b, a] = result
        return table

    def _inherit(
        self,
        order: list[str],
        introductions: Mapping[str, Iterable[tuple[str, str]]],
    ) -> dict[str, tuple[tuple[str, str], ...]]:
        declared = {t: list(pairs) for t, pairs in introductions.items()}
        self._declared_intro = frozenset(t for t, pairs in declared.items() if pairs)
        result: dict[str, dict[str, str]] = {}
        for t in order:
            inherited: dict[str, str] = {}
            for parent in self._parents[t]:
                for feature, value in result[parent].items():
                    if feature in inherited and inherited[feature] != value:
                        merged = self._meets[inherited[feature], value]
                        if merged is None:
                            raise SignatureError(
                                f"type {t!r} inherits incompatible restrictions "
                                f"for feature {feature!r}"
                            )
                        value = merged
                    inherited[feature] = value
            for feature, value in declared.get(t, ()):
                if value not in self._below:
                    raise UnknownTypeError(
                        f"unknown type {value!r} restricting {t}:{feature}"
                    )
                if feature in inherited and value not in self._below[inherited[feature]]:
                    raise SignatureError(
                        f"type {t!r} weakens the restriction of feature {feature!r}"
                    )
                inherited[feature] = value
            result[t] = inherited
        return {t: tuple(result[t].items()) for t in self.types}

    def _introduction_sites(
        self, introductions: Mapping[str, Iterable[tuple[str, str]]]
    ) -> dict[str, str]:
        declaring: dict[str, list[str]] = {}
        for t, pairs in introductions.items():
            for feature, _value in pairs:
                declaring.setdefault(feature, []).append(t)
        sites: dict[str, str] = {}
        for feature, ts in declaring.items():
            most_general = sorted(
                {
                    t
                    for t in ts
                    if not any(t in self._below[o] and o != t for o in ts)
                }
            )
            if len(most_general) != 1:
                raise SignatureError(
                    f"feature {feature!r} is introduced at incomparable types "
                    f"{', '.join(most_general)}"
                )
            sites[feature] = most_general[0]
        return sites


def _topological_order(types: tuple[str, ...], edges: Mapping[str, tuple[str, ...]]) -> list[str]:
    """Parents before children; raises on cycles."""
    state: dict[str, int] = {}
    order: list[str] = []
    for start in types:
        if start in state:
            continue
        stack = [(start, iter(edges[start]))]
        state[start] = 1
        while stack:
            node, kids = stack[-1]
            kid = next(kids, None)
            if kid is None:
                stack.pop()
                state[node] = 2
                order.append(node)
            elif state.get(kid) == 1:
                raise SignatureError(f"cycle in type hierarchy through {kid!r}")
            elif kid not in state:
                state[kid] = 1
                stack.append((kid, iter(edges[kid])))
    order.reverse()
    return order


def _downsets(order: list[str], edges: Mapping[str, tuple[str, ...]]) -> dict[str, frozenset[str]]:
    below: dict[str, frozenset[str]] = {}
    for t in reversed(order):
        acc = {t}
        for kid in edges[t]:
            acc |= below[kid]
        below[t] = frozenset(acc)
    return below


def load_signature(text: str) -> Signature:
    """Read the signature DSL.

    Args:
        text: Lines of ``type <name> sub [...]`` and ``type <name> intro [...]``

    Returns:
        The checked Signature

    Raises:
        SignatureError: On syntax errors, cycles, meet-closure or feature
            introduction violations
    """
    parser, tree = parse_text(signature_file, comment, text, SignatureError, "signature")
    types: list[str] = []
    edges: dict[str, list[str]] = {}
    introductions: dict[str, list[tuple[str, str]]] = {}
    for decl in children(tree, frozenset({"sub_decl", "intro_decl"})):
        parts = list(children(decl, _RULES))
        name = text_of(parts[0])
        types.append(name)
        line, column = location(parser, decl)
        if decl.rule_name == "sub_decl":
            kids = [text_of(p) for p in parts[1:]]
            types.extend(kids)
            edges.setdefault(name, []).extend(kids)
        else:
            pairs = []
            for feature_node in parts[1:]:
                feature, value = (text_of(p) for p in children(feature_node, _RULES))
                if any(feature == f for f, _v in introductions.get(name, ())):
                    raise SignatureError(
                        f"feature {feature!r} declared twice on {name!r}",
                        line=line,
                        column=column,
                    )
                pairs.append((feature, value))
            introductions.setdefault(name, []).extend(pairs)
    return Signature(types, edges, introductions)


def meet(sig: Signature, t1: str, t2: str) -> str | None:
    """Type-level unification."""
    return sig.meet(t1, t2)


def subtype(sig: Signature, t1: str, t2: str) -> bool:
    """Reflexive-transitive subtype test."""
    return sig.is_subtype(t1, t2)


def format_signature(sig: Signature) -> str:
    """Render the signature in its DSL; `load_signature` reads it back."""
    lines = []
    for t in sig.types:
        kids = sig.subtype_edges[t]
        if kids:
            lines.append(f"type {t} sub [{', '.join(kids)}].")
    for t in sig.types:
        own = _own_features(sig, t)
        if own:
            decls = ", ".join(f"{f}:{v}" for f, v in own)
            lines.append(f"type {t} intro [{decls}].")
    return "\n".join(lines) + "\n"


def _own_features(sig: Signature, t: str) -> list[tuple[str, str]]:
    if t not in sig.feature_bearing_types():
        return []
    inherited: dict[str, str] = {}
    for parent in sig._parents[t]:
        inherited.update(sig.features(parent))
    return [(f, v) for f, v in sig.appropriateness[t] if inherited.get(f) != v]

"""Immutable typed feature structures and the operations that need no workspace."""

from __future__ import annotations

from collections import deque
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass

from selective_magic_parser.tfl.signature import Signature


Path = tuple[str, ...]


@dataclass(frozen=True)
class NodePool:
    """A set of typed nodes with deterministic feature arcs.

    Several literals (or a whole clause) share one pool so that node identity
    expresses structure sharing across arguments.
    """

    types: tuple[str, ...]
    arcs: tuple[tuple[tuple[str, int], ...], ...]

    def __len__(self) -> int:
        return len(self.types)

    def type_of(self, node: int) -> str:
        return self.types[node]

    def features(self, node: int) -> dict[str, int]:
        return dict(self.arcs[node])

    def arc(self, node: int, feature: str) -> int | None:
        for f, target in self.arcs[node]:
            if f == feature:
                return target
        return None

    def node_at(self, node: int, path: Path) -> int | None:
        """Follow ``path`` along explicit arcs only."""
        for feature in path:
            target = self.arc(node, feature)
            if target is None:
                return None
            node = target
        return node

    def type_at(self, signature: Signature, node: int, path: Path) -> str | None:
        """Type found at ``path``; missing arcs read as their appropriate restriction."""
        return _type_at(signature, self.type_of, self.arc, node, path)

    def reachable(self, roots: Iterable[int]) -> list[int]:
        seen: dict[int, None] = {}
        queue = deque(roots)
        while queue:
            node = queue.popleft()
            if node in seen:
                continue
            seen[node] = None
            queue.extend(target for _f, target in self.arcs[node])
        return list(seen)

    def compact(self, roots: Sequence[int]) -> tuple[NodePool, dict[int, int]]:
        """Drop unreachable nodes, renumbering in breadth-first order from ``roots``."""
        return reindex(self.type_of, self.features, roots)


@dataclass(frozen=True)
class FeatureStructure:
    """A rooted view into a node pool."""

    pool: NodePool
    root: int = 0

    @property
    def type(self) -> str:
        return self.pool.types[self.root]

    def node_at(self, path: Path) -> int | None:
        return self.pool.node_at(self.root, path)

    def type_at(self, signature: Signature, path: Path) -> str | None:
        return self.pool.type_at(signature, self.root, path)

    def node_count(self) -> int:
        return len(self.pool.reachable([self.root]))


class PoolBuilder:
    """Mutable scratch space for assembling a NodePool."""

    def __init__(self):
        self._types: list[str] = []
        self._arcs: list[dict[str, int]] = []

    def add(self, type_name: str) -> int:
        self._types.append(type_name)
        self._arcs.append({})
        return len(self._types) - 1

    def link(self, source: int, feature: str, target: int) -> None:
        self._arcs[source][feature] = target

    def freeze(self) -> NodePool:
        return NodePool(
            types=tuple(self._types),
            arcs=tuple(tuple(sorted(a.items())) for a in self._arcs),
        )


def reindex(
    type_of: Callable[[int], str],
    features: Callable[[int], Mapping[str, int]],
    roots: Sequence[int],
) -> tuple[NodePool, dict[int, int]]:
    """Copy the nodes reachable from ``roots`` into a fresh pool.

    Returns the pool and the old-to-new node mapping. Numbering is breadth-first
    with features visited in sorted order, so equal inputs give equal pools.
    """
    index: dict[int, int] = {}
    order: list[int] = []
    queue = deque(roots)
    while queue:
        node = queue.popleft()
        if node in index:
            continue
        index[node] = len(order)
        order.append(node)
        for _feature, target in sorted(features(node).items()):
            queue.append(target)
    pool = NodePool(
        types=tuple(type_of(n) for n in order),
        arcs=tuple(
            tuple((f, index[t]) for f, t in sorted(features(n).items())) for n in order
        ),
    )
    return pool, index


def _type_at(
    signature: Signature,
    type_of: Callable[[int], str],
    arc: Callable[[int, str], int | None],
    node: int,
    path: Path,
) -> str | None:
    current: int | None = node
    current_type = type_of(node)
    for feature in path:
        if current is not None:
            target = arc(current, feature)
            if target is not None:
                current = target
                current_type = type_of(target)
                continue
        restriction = signature.restriction(current_type, feature)
        if restriction is None:
            return None
        current = None
        current_type = restriction
    return current_type


def mgsat(signature: Signature, type_name: str) -> FeatureStructure:
    """Most general satisfier of ``type_name``.

    Every appropriate feature is filled with the most general satisfier of its
    restriction. A type already being expanded further up is left as a bare
    node, which keeps recursive types such as lists finite.
    """
    signature.check(type_name)
    builder = PoolBuilder()

    def expand(t: str, active: frozenset[str]) -> int:
        node = builder.add(t)
        if t in active:
            return node
        for feature, restriction in signature.features(t).items():
            builder.link(node, feature, expand(restriction, active | {t}))
        return node

    expand(type_name, frozenset())
    return FeatureStructure(builder.freeze(), 0)


def well_typed_violations(signature: Signature, pool: NodePool) -> list[str]:
    """Describe every arc that breaks appropriateness; empty when well-typed."""
    problems = []
    for node, node_type in enumerate(pool.types):
        if node_type not in signature:
            problems.append(f"node {node}: unknown type {node_type!r}")
            continue
        for feature, target in pool.arcs[node]:
            restriction = signature.restriction(node_type, feature)
            if restriction is None:
                problems.append(f"node {node}: {feature} not appropriate for {node_type}")
            elif not signature.is_subtype(pool.types[target], restriction):
                problems.append(
                    f"node {node}: {feature} value {pool.types[target]} "
                    f"not below {restriction}"
                )
    return problems


def is_well_typed(signature: Signature, pool: NodePool) -> bool:
    return not well_typed_violations(signature, pool)


def subsumes_roots(
    signature: Signature,
    general: NodePool,
    general_roots: Sequence[int],
    specific: NodePool,
    specific_roots: Sequence[int],
) -> bool:
    """Multi-rooted subsumption with structure sharing.

    An arc missing in ``specific`` behaves like a fresh node of the appropriate
    type, so leaving out uninformative features never changes the answer.
    """
    if len(general_roots) != len(specific_roots):
        return False
    implicit: dict[tuple, str] = {}

    def type_of(node) -> str:
        return implicit[node] if isinstance(node, tuple) else specific.types[node]

    def arc(node, feature: str):
        if not isinstance(node, tuple):
            target = specific.arc(node, feature)
            if target is not None:
                return target
        restriction = signature.restriction(type_of(node), feature)
        if restriction is None:
            return None
        key = (node, feature)
        implicit[key] = restriction
        return key

    mapping: dict[int, object] = {}
    stack = list(zip(general_roots, specific_roots, strict=True))
    while stack:
        g, s = stack.pop()
        if g in mapping:
            if mapping[g] != s:
                return False
            continue
        mapping[g] = s
        if not signature.is_subtype(type_of(s), general.types[g]):
            return False
        for feature, g_target in general.arcs[g]:
            s_target = arc(s, feature)
            if s_target is None:
                return False
            stack.append((g_target, s_target))
    return True


def subsumes(
    signature: Signature, general: FeatureStructure, specific: FeatureStructure
) -> bool:
    """True iff ``general`` is at least as general as ``specific``."""
    return subsumes_roots(
        signature, general.pool, [general.root], specific.pool, [specific.root]
    )

"""Mutable unification workspace with an undo trail.

All destructive work happens here. Callers copy frozen pools in with ``load``,
unify, read the result back with ``export`` and roll back with ``undo``; the
frozen inputs are never touched.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from selective_magic_parser.tfl.signature import TOP, Signature
from selective_magic_parser.tfl.structure import (
    FeatureStructure,
    NodePool,
    Path,
    _type_at,
    reindex,
)


@dataclass(frozen=True)
class Clash:
    """Two types without a meet met at ``path``."""

    path: Path
    left: str
    right: str

    def __str__(self) -> str:
        where = "<" + ", ".join(self.path) + ">"
        return f"type clash at {where}: {self.left} vs {self.right}"


@dataclass(frozen=True)
class Mark:
    trail: int
    nodes: int


class Workspace:
    """Union-find node store for graph unification under a signature."""

    def __init__(self, signature: Signature):
        self.signature = signature
        self._types: list[str] = []
        self._arcs: list[dict[str, int]] = []
        self._parent: list[int] = []
        self._trail: list[tuple] = []
        # Bumped on every merge; lets suspended goals skip rechecks when nothing changed.
        self.changes = 0

    def __len__(self) -> int:
        return len(self._types)

    def new_node(self, type_name: str = TOP) -> int:
        node = len(self._types)
        self._types.append(type_name)
        self._arcs.append({})
        self._parent.append(node)
        return node

    def load(self, pool: NodePool) -> int:
        """Copy a frozen pool in; returns the offset to add to its node ids."""
        offset = len(self._types)
        for node_type, arcs in zip(pool.types, pool.arcs, strict=True):
            node = len(self._types)
            self._types.append(node_type)
            self._arcs.append({f: t + offset for f, t in arcs})
            self._parent.append(node)
        return offset

    def find(self, node: int) -> int:
        while self._parent[node] != node:
            node = self._parent[node]
        return node

    def type_of(self, node: int) -> str:
        return self._types[self.find(node)]

    def features(self, node: int) -> dict[str, int]:
        return {f: self.find(t) for f, t in self._arcs[self.find(node)].items()}

    def arc(self, node: int, feature: str) -> int | None:
        target = self._arcs[self.find(node)].get(feature)
        return None if target is None else self.find(target)

    def node_at(self, node: int, path: Path) -> int | None:
        for feature in path:
            target = self.arc(node, feature)
            if target is None:
                return None
            node = target
        return self.find(node)

    def type_at(self, node: int, path: Path) -> str | None:
        return _type_at(self.signature, self.type_of, self.arc, self.find(node), path)

    def mark(self) -> Mark:
        return Mark(len(self._trail), len(self._types))

    def undo(self, mark: Mark) -> None:
        trail = self._trail
        while len(trail) > mark.trail:
            entry = trail.pop()
            kind = entry[0]
            if kind == "parent":
                self._parent[entry[1]] = entry[1]
            elif kind == "type":
                self._types[entry[1]] = entry[2]
            else:
                del self._arcs[entry[1]][entry[2]]
        del self._types[mark.nodes :]
        del self._arcs[mark.nodes :]
        del self._parent[mark.nodes :]

    def unify(self, a: int, b: int) -> Clash | None:
        """Merge the graphs under ``a`` and ``b``; on a clash nothing changes."""
        start = self.mark()
        pending: list[tuple[int, int, Path]] = [(a, b, ())]
        sig = self.signature
        while pending:
            x, y, path = pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            tx, ty = self._types[x], self._types[y]
            merged = sig.meet(tx, ty)
            if merged is None:
                self.undo(start)
                return Clash(path, tx, ty)
            self._parent[y] = x
            self._trail.append(("parent", y))
            if merged != tx:
                self._trail.append(("type", x, tx))
                self._types[x] = merged
            x_arcs = self._arcs[x]
            for feature, target in self._arcs[y].items():
                existing = x_arcs.get(feature)
                if existing is None:
                    x_arcs[feature] = target
                    self._trail.append(("arc", x, feature))
                else:
                    pending.append((existing, target, (*path, feature)))
            if merged != tx or merged != ty:
                for feature, target in list(x_arcs.items()):
                    restriction = sig.restriction(merged, feature)
                    if not sig.is_subtype(self._types[self.find(target)], restriction):
                        pending.append(
                            (target, self.new_node(restriction), (*path, feature))
                        )
            self.changes += 1
        return None

    def attach(self, source: int, feature: str, target: int) -> Clash | None:
        """Add an arc from a node lacking ``feature`` and coerce the value type."""
        source = self.find(source)
        restriction = self.signature.restriction(self._types[source], feature)
        if restriction is None:
            return Clash((feature,), self._types[source], "<no such feature>")
        start = self.mark()
        self._arcs[source][feature] = target
        self._trail.append(("arc", source, feature))
        self.changes += 1
        clash = self.unify(target, self.new_node(restriction))
        if clash is not None:
            self.undo(start)
            return Clash((feature, *clash.path), clash.left, clash.right)
        return None

    def export(self, roots: Sequence[int]) -> tuple[NodePool, list[int], dict[int, int]]:
        """Freeze the structure under ``roots``.

        Returns the pool, the new ids of the roots and the mapping from
        workspace representatives to pool nodes.
        """
        reps = [self.find(r) for r in roots]
        pool, index = reindex(lambda n: self._types[n], self.features, reps)
        return pool, [index[r] for r in reps], index

    def structure(self, root: int) -> FeatureStructure:
        pool, roots, _index = self.export([root])
        return FeatureStructure(pool, roots[0])

"""Canonical text for feature structures.

Output is in the clause DSL term syntax, so it can be read back. Tags are
numbered by first visit in a depth-first walk with features in sorted order,
which makes equal text the test for isomorphism. Feature specifications that
carry no information (an unshared value of exactly the appropriate type with
nothing informative below it) are left out.
"""

from collections.abc import Sequence

from selective_magic_parser.tfl.signature import TOP, Signature
from selective_magic_parser.tfl.structure import FeatureStructure, NodePool

LIST_CELL_FEATURES = frozenset({"hd", "tl"})


class _Renderer:
    def __init__(self, sig: Signature, pool: NodePool, roots: Sequence[int]):
        self.sig = sig
        self.pool = pool
        self.refs = [0] * len(pool)
        for root in roots:
            self.refs[root] += 1
        for node in pool.reachable(roots):
            for _f, target in pool.arcs[node]:
                self.refs[target] += 1
        self.tags: dict[int, int] = {}
        self._quiet: dict[tuple[int, str], bool] = {}
        self.lists = sig.has_lists()

    def uninformative(self, node: int, restriction: str) -> bool:
        key = (node, restriction)
        if key not in self._quiet:
            self._quiet[key] = False
            node_type = self.pool.types[node]
            self._quiet[key] = (
                self.refs[node] == 1
                and node_type == restriction
                and all(
                    self.uninformative(t, self.sig.restriction(node_type, f))
                    for f, t in self.pool.arcs[node]
                )
            )
        return self._quiet[key]

    def visible_arcs(self, node: int) -> list[tuple[str, int]]:
        node_type = self.pool.types[node]
        return [
            (f, t)
            for f, t in self.pool.arcs[node]
            if not self.uninformative(t, self.sig.restriction(node_type, f))
        ]

    def render(self, node: int, nested: bool) -> str:
        if node in self.tags:
            return f"#{self.tags[node]}"
        parts = []
        if self.refs[node] > 1:
            self.tags[node] = len(self.tags) + 1
            parts.append(f"#{self.tags[node]}")
        sugar = self.list_sugar(node) if self.lists else None
        if sugar is not None:
            parts.append(sugar)
        else:
            arcs = self.visible_arcs(node)
            node_type = self.pool.types[node]
            if node_type != TOP or not (parts or arcs):
                parts.append(node_type)
            parts.extend(f"{f}:{self.render(t, True)}" for f, t in arcs)
        text = " & ".join(parts)
        if nested and len(parts) > 1:
            return f"({text})"
        return text

    def is_cell(self, node: int) -> bool:
        pool = self.pool
        return (
            pool.types[node] == "ne_list"
            and {f for f, _t in pool.arcs[node]} <= LIST_CELL_FEATURES
        )

    def list_sugar(self, node: int) -> str | None:
        pool = self.pool
        if pool.types[node] == "e_list" and not pool.arcs[node]:
            return "<>"
        if not self.is_cell(node):
            return None
        items: list[str] = []
        current = node
        while True:
            head = pool.arc(current, "hd")
            if head is None or self.uninformative(head, self.sig.restriction("ne_list", "hd")):
                items.append(self.sig.restriction("ne_list", "hd"))
            else:
                items.append(self.render(head, False))
            tail = pool.arc(current, "tl")
            if tail is None or self.uninformative(tail, self.sig.restriction("ne_list", "tl")):
                return f"<{', '.join(items)} | {self.sig.restriction('ne_list', 'tl')}>"
            if self.refs[tail] == 1 and pool.types[tail] == "e_list" and not pool.arcs[tail]:
                return f"<{', '.join(items)}>"
            if self.refs[tail] == 1 and self.is_cell(tail):
                current = tail
                continue
            return f"<{', '.join(items)} | {self.render(tail, False)}>"


def render_roots(sig: Signature, pool: NodePool, roots: Sequence[int]) -> list[str]:
    """Canonical text for each root, with tags shared across all of them."""
    renderer = _Renderer(sig, pool, roots)
    return [renderer.render(root, False) for root in roots]


def canonical(sig: Signature, fs: FeatureStructure) -> str:
    """Canonical text of a single feature structure."""
    return render_roots(sig, fs.pool, [fs.root])[0]

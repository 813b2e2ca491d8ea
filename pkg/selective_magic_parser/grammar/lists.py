"""Encoding of angle-bracket lists as e_list / ne_list feature structures."""

from collections.abc import Sequence

from selective_magic_parser.errors import SignatureError
from selective_magic_parser.tfl import Clash, FeatureStructure, NodePool, Signature, Workspace

EMPTY = "e_list"
CONS = "ne_list"


def require_lists(sig: Signature) -> None:
    if not sig.has_lists():
        raise SignatureError("list syntax needs e_list and ne_list with hd and tl")


def build_list(ws: Workspace, items: Sequence[int], tail: int | None = None) -> int | Clash:
    """Chain workspace nodes into a list; ``tail`` defaults to the empty list."""
    require_lists(ws.signature)
    current = ws.new_node(EMPTY) if tail is None else tail
    for item in reversed(items):
        cell = ws.new_node(CONS)
        for feature, target in (("hd", item), ("tl", current)):
            clash = ws.attach(cell, feature, target)
            if clash is not None:
                return clash
        current = cell
    return current


def list_to_fs(
    items: Sequence[FeatureStructure], sig: Signature, tail: FeatureStructure | None = None
) -> FeatureStructure:
    """⟨⟩ becomes an e_list node; ⟨x|rest⟩ an ne_list with hd x and tl rest."""
    ws = Workspace(sig)
    nodes = [ws.load(item.pool) + item.root for item in items]
    tail_node = None if tail is None else ws.load(tail.pool) + tail.root
    result = build_list(ws, nodes, tail_node)
    if isinstance(result, Clash):
        raise SignatureError(f"cannot build list: {result}")
    return ws.structure(result)


def words_to_fs(words: Sequence[str], sig: Signature) -> FeatureStructure:
    return list_to_fs([_atom(sig, w) for w in words], sig)


def _atom(sig: Signature, type_name: str) -> FeatureStructure:
    sig.check(type_name)
    return FeatureStructure(NodePool((type_name,), ((),)), 0)


def decode_list(pool: NodePool, node: int) -> tuple[list[int | None], bool]:
    """Item nodes of a list and whether it ends in e_list.

    An item is None where the cell leaves ``hd`` out. A cell missing ``tl`` or
    a tail of any other type leaves the list open.
    """
    items: list[int | None] = []
    seen: set[int] = set()
    while pool.types[node] == CONS and node not in seen:
        seen.add(node)
        items.append(pool.arc(node, "hd"))
        tail = pool.arc(node, "tl")
        if tail is None:
            return items, False
        node = tail
    return items, pool.types[node] == EMPTY


def list_types(sig: Signature, pool: NodePool, node: int) -> tuple[str, ...] | None:
    """Types of the items of a closed list; None for open lists."""
    items, closed = decode_list(pool, node)
    if not closed:
        return None
    fallback = sig.restriction(CONS, "hd")
    return tuple(fallback if item is None else pool.types[item] for item in items)

"""Non-destructive unification of feature structures."""

import logging
from dataclasses import dataclass

from selective_magic_parser.tfl.signature import Signature
from selective_magic_parser.tfl.structure import FeatureStructure
from selective_magic_parser.tfl.workspace import Clash, Workspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Unified:
    """Successful unification plus where each input node ended up."""

    structure: FeatureStructure
    left_map: dict[int, int]
    right_map: dict[int, int]


UnificationOutcome = Unified | Clash


def unify(sig: Signature, a: FeatureStructure, b: FeatureStructure) -> UnificationOutcome:
    """Most general structure subsumed by both inputs, or the clash that prevents it."""
    ws = Workspace(sig)
    left = ws.load(a.pool)
    right = ws.load(b.pool)
    clash = ws.unify(left + a.root, right + b.root)
    if clash is not None:
        logger.debug(f"Unification failed: {clash}")
        return clash
    pool, roots, index = ws.export([left + a.root])
    return Unified(
        structure=FeatureStructure(pool, roots[0]),
        left_map={n: index[ws.find(left + n)] for n in a.pool.reachable([a.root])},
        right_map={n: index[ws.find(right + n)] for n in b.pool.reachable([b.root])},
    )

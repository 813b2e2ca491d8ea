"""Typed feature logic: signatures, feature structures and their lattice operations."""

from selective_magic_parser.tfl.canonical import canonical, render_roots
from selective_magic_parser.tfl.signature import (
    TOP,
    Signature,
    format_signature,
    load_signature,
    meet,
    subtype,
)
from selective_magic_parser.tfl.structure import (
    FeatureStructure,
    NodePool,
    Path,
    PoolBuilder,
    is_well_typed,
    mgsat,
    subsumes,
    subsumes_roots,
    well_typed_violations,
)
from selective_magic_parser.tfl.unification import Unified, UnificationOutcome, unify
from selective_magic_parser.tfl.workspace import Clash, Mark, Workspace

__all__ = [
    "TOP",
    "Clash",
    "FeatureStructure",
    "Mark",
    "NodePool",
    "Path",
    "PoolBuilder",
    "Signature",
    "Unified",
    "UnificationOutcome",
    "Workspace",
    "canonical",
    "format_signature",
    "is_well_typed",
    "load_signature",
    "meet",
    "mgsat",
    "render_roots",
    "subsumes",
    "subsumes_roots",
    "subtype",
    "unify",
    "well_typed_violations",
]

"""Symplectic fillings of Seifert 3-manifolds and rational blowdown reachability."""

from plumbfill.seifert_core import (
    PlumbingGraph,
    SeifertData,
    cf_dual,
    cf_evaluate,
    cf_expand,
    intersection_matrix,
    is_negative_definite,
    parse_seifert,
    plumbing_graph,
)

__version__ = "0.1.0"

__all__ = [
    "PlumbingGraph",
    "SeifertData",
    "cf_dual",
    "cf_evaluate",
    "cf_expand",
    "intersection_matrix",
    "is_negative_definite",
    "parse_seifert",
    "plumbing_graph",
]

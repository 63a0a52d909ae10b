"""Thin wrapper over nauty for coloured simple graphs."""

from __future__ import annotations

import pynauty


def _graph(n: int, adjacency: dict, parts: list) -> pynauty.Graph:
    # skip pynauty's per-vertex validation; callers build well-formed input
    g = pynauty.Graph.__new__(pynauty.Graph)
    g.number_of_vertices = n
    g.directed = False
    g._adjacency_dict = adjacency
    g._vertex_coloring = parts if len(parts) > 1 else []
    return g


def partition(labels) -> tuple[tuple, list[set[int]]]:
    """Group vertices by label; returns the label census and the ordered parts."""
    order = sorted(set(labels))
    index = {lab: i for i, lab in enumerate(order)}
    parts = [set() for _ in order]
    for v, lab in enumerate(labels):
        parts[index[lab]].add(v)
    return tuple((lab, len(p)) for lab, p in zip(order, parts)), parts


def certificate(labels, edges) -> tuple:
    """Isomorphism invariant of a vertex-labelled graph (complete for simple graphs)."""
    n = len(labels)
    census, parts = partition(labels)
    adjacency = {v: [] for v in range(n)}
    for u, v in edges:
        adjacency[u].append(v)
    return census, pynauty.certificate(_graph(n, adjacency, parts))


def canonical_labelling(labels, edges) -> list[int]:
    """``lab[i]`` is the vertex placed at canonical position i."""
    n = len(labels)
    _, parts = partition(labels)
    adjacency = {v: [] for v in range(n)}
    for u, v in edges:
        adjacency[u].append(v)
    return pynauty.canon_label(_graph(n, adjacency, parts))

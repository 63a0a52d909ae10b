"""Seifert invariants, Hirzebruch-Jung continued fractions and star-shaped plumbings.

All arithmetic is exact. Rationals are carried as :class:`fractions.Fraction`,
which is always stored in lowest terms with a positive denominator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from plumbfill.errors import DomainError

Rational = Fraction


@dataclass(frozen=True)
class SeifertData:
    """Invariants ``Y(-b; (a1, b1), ..., (an, bn))`` of a Seifert fibered manifold over S^2."""

    b: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(c)) for a, c in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.b < 1:
            raise DomainError(f"central multiplicity must be positive, got {self.b}")
        if not pairs:
            raise DomainError("at least one singular fiber is required")
        for alpha, beta in pairs:
            if not 0 < beta < alpha or gcd(alpha, beta) != 1:
                raise DomainError(f"invalid fiber ({alpha}, {beta}): need 0 < beta < alpha, coprime")

    @property
    def n(self) -> int:
        return len(self.pairs)

    def euler_number(self) -> Fraction:
        """``b - sum(beta/alpha)``; positive exactly when the plumbing is negative definite."""
        return self.b - sum((Fraction(beta, alpha) for alpha, beta in self.pairs), Fraction(0))

    def __str__(self) -> str:
        body = ", ".join(f"{a}/{c}" for a, c in self.pairs)
        return f"Y(-{self.b}; {body})"


@dataclass(frozen=True)
class PlumbingGraph:
    """Star-shaped plumbing: a central vertex and linear arms read root-to-leaf."""

    central_weight: int
    arms: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(tuple(int(w) for w in arm) for arm in self.arms))

    @property
    def vertex_count(self) -> int:
        return 1 + sum(len(arm) for arm in self.arms)

    def weights(self) -> list[int]:
        """Vertex weights in canonical order: central, then arms root-to-leaf."""
        out = [self.central_weight]
        for arm in self.arms:
            out.extend(arm)
        return out

    def edges(self) -> list[tuple[int, int]]:
        edges = []
        idx = 1
        for arm in self.arms:
            prev = 0
            for _ in arm:
                edges.append((prev, idx))
                prev = idx
                idx += 1
        return edges

    def is_linear(self) -> bool:
        return sum(1 for arm in self.arms if arm) <= 2


def _check_entries(entries) -> list[int]:
    entries = [int(x) for x in entries]
    if not entries:
        raise DomainError("continued fraction needs at least one entry")
    if any(x < 2 for x in entries):
        raise DomainError(f"continued fraction entries must be >= 2, got {entries}")
    return entries


def cf_expand(alpha: int, beta: int) -> list[int]:
    """Expand ``alpha/beta`` as ``[b1, ..., br]`` with ``b1 - 1/(b2 - ...)`` and all ``bi >= 2``."""
    if not 0 < beta < alpha or gcd(alpha, beta) != 1:
        raise DomainError(f"cf_expand needs coprime 0 < beta < alpha, got ({alpha}, {beta})")
    out = []
    p, q = alpha, beta
    while q:
        # ceiling division keeps every entry >= 2
        c = -(-p // q)
        out.append(c)
        p, q = q, c * q - p
    return out


def cf_evaluate(entries) -> Fraction:
    entries = _check_entries(entries)
    # p/q = c - 1/(p'/q') = (c p' - q')/p'; numerator and denominator stay coprime
    p, q = entries[-1], 1
    for c in reversed(entries[:-1]):
        p, q = c * p - q, p
    return Fraction(p, q)


def cf_dual(entries) -> list[int]:
    """Expansion of ``alpha/(alpha-beta)`` given the expansion of ``alpha/beta``."""
    value = cf_evaluate(entries)
    alpha, beta = value.numerator, value.denominator
    return cf_expand(alpha, alpha - beta)


def plumbing_graph(data: SeifertData) -> PlumbingGraph:
    arms = tuple(tuple(-c for c in cf_expand(alpha, beta)) for alpha, beta in data.pairs)
    return PlumbingGraph(-data.b, arms)


def intersection_matrix(graph: PlumbingGraph) -> list[list[int]]:
    weights = graph.weights()
    size = len(weights)
    mat = [[0] * size for _ in range(size)]
    for i, w in enumerate(weights):
        mat[i][i] = w
    for u, v in graph.edges():
        mat[u][v] = mat[v][u] = 1
    return mat


def leading_minors(matrix) -> list[int]:
    """Exact leading principal minors via fraction-free (Bareiss) elimination."""
    size = len(matrix)
    a = [list(map(int, row)) for row in matrix]
    minors = []
    prev = 1
    for k in range(size):
        if a[k][k] == 0:
            # a zero pivot here means the k-th leading minor vanishes
            minors.append(0)
            minors.extend(_slow_minor(matrix, j) for j in range(k + 2, size + 1))
            return minors
        minors.append(a[k][k])
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return minors


def _slow_minor(matrix, k: int) -> int:
    sub = [[Fraction(x) for x in row[:k]] for row in matrix[:k]]
    det = Fraction(1)
    for col in range(k):
        pivot = next((r for r in range(col, k) if sub[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            sub[col], sub[pivot] = sub[pivot], sub[col]
            det = -det
        det *= sub[col][col]
        for r in range(col + 1, k):
            factor = sub[r][col] / sub[col][col]
            for c in range(col, k):
                sub[r][c] -= factor * sub[col][c]
    return int(det)


def is_negative_definite(matrix) -> bool:
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise DomainError("matrix must be square")
    for i in range(size):
        for j in range(i + 1, size):
            if matrix[i][j] != matrix[j][i]:
                raise DomainError("matrix must be symmetric")
    return all((m < 0) if k % 2 == 0 else (m > 0) for k, m in enumerate(leading_minors(matrix)))


_TEXT_RE = re.compile(r"^\s*Y\s*\(\s*-\s*(\d+)\s*;(.*)\)\s*$")


def parse_seifert(text: str) -> SeifertData:
    """Parse ``Y(-5; 2/1, 2/1, 2/1)``."""
    m = _TEXT_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse Seifert data {text!r}")
    pairs = []
    for chunk in m.group(2).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            num, den = chunk.split("/")
            pairs.append((int(num), int(den)))
        except ValueError:
            raise DomainError(f"bad fiber {chunk!r} in {text!r}") from None
    return SeifertData(int(m.group(1)), tuple(pairs))


def seifert_from_arms(b: int, arms) -> SeifertData:
    """Build Seifert data from a central weight and arm continued fractions (positive entries)."""
    pairs = []
    for arm in arms:
        value = cf_evaluate(arm)
        pairs.append((value.numerator, value.denominator))
    return SeifertData(b, tuple(pairs))

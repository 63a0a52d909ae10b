"""Symplectic line arrangements as incidence structures.

Line 0 is the complex line; lines ``1..n`` are the symplectic lines.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from plumbfill.errors import DomainError, InconsistentArrangement
from plumbfill.homology import adjunction_check


def _sort_points(points) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(p)) for p in points))


@dataclass(frozen=True)
class LineArrangement:
    n_lines: int
    points: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        pts = _sort_points(self.points)
        object.__setattr__(self, "points", pts)
        n = self.n_lines
        if n < 1:
            raise InconsistentArrangement("an arrangement needs at least one symplectic line")
        seen = {}
        for p in pts:
            if len(p) < 2 or len(set(p)) != len(p):
                raise InconsistentArrangement(f"point {p} must hold at least two distinct lines")
            if any(not 0 <= i <= n for i in p):
                raise InconsistentArrangement(f"point {p} names a line outside 0..{n}")
            if 0 in p and len(p) > 2:
                raise InconsistentArrangement(f"complex line passes through multi-point {p}")
            for pair in combinations(p, 2):
                if pair in seen:
                    raise InconsistentArrangement(f"lines {pair} meet at {seen[pair]} and at {p}")
                seen[pair] = p
        for pair in combinations(range(n + 1), 2):
            if pair not in seen:
                raise InconsistentArrangement(f"lines {pair} never meet")

    def multi_points(self) -> list[tuple[int, ...]]:
        return [p for p in self.points if len(p) >= 3]

    def line_points(self) -> list[tuple[int, ...]]:
        """Points where at least two symplectic lines meet."""
        return [p for p in self.points if 0 not in p]

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, p)) + "}" for p in self.points) + "}"


@dataclass(frozen=True)
class ArrangementClass:
    kind: str
    n: int
    m: int = 0

    def __post_init__(self):
        if self.kind == "Concurrent" and not 3 <= self.m <= self.n:
            raise DomainError(f"Concurrent({self.n},{self.m}) needs 3 <= m <= n")
        if self.kind not in ("Concurrent", "Generic", "NotNormalForm"):
            raise DomainError(f"unknown arrangement class {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "Concurrent":
            return f"Concurrent({self.n},{self.m})"
        return f"{self.kind}({self.n})"


def multi_point_count(arrangement: LineArrangement) -> int:
    return len(arrangement.multi_points())


def make_snm(n: int, m: int) -> LineArrangement:
    """``n`` lines, the first ``m`` through one point, everything else in double points."""
    if n < 1:
        raise DomainError("need at least one line")
    if m != 0 and not 3 <= m <= n:
        raise DomainError(f"S_(n,m) needs m = 0 or 3 <= m <= n, got n={n}, m={m}")
    points = [(0, i) for i in range(1, n + 1)]
    if m:
        points.append(tuple(range(1, m + 1)))
    for i, j in combinations(range(1, n + 1), 2):
        if m and j <= m:
            continue
        points.append((i, j))
    return LineArrangement(n, tuple(points))


def classify_arrangement(arrangement: LineArrangement) -> ArrangementClass:
    multi = arrangement.multi_points()
    n = arrangement.n_lines
    if not multi:
        return ArrangementClass("Generic", n)
    if len(multi) == 1:
        return ArrangementClass("Concurrent", n, len(multi[0]))
    return ArrangementClass("NotNormalForm", n)


def arrangement_of_filling(first_arm_classes) -> LineArrangement:
    """Read the arrangement off the classes of the heads of the cap arms.

    Two lines pass through the point labelled ``k`` when both classes carry
    ``e_k``; each pair of lines must share exactly one such label.
    """
    classes = list(first_arm_classes)
    if not classes:
        raise InconsistentArrangement("no lines given")
    for x in classes:
        if x.l_coeff != 1 or not adjunction_check(x):
            raise InconsistentArrangement(f"class {x} is not a line class")
    n = len(classes)
    members: dict[int, set[int]] = {}
    for i, x in enumerate(classes, start=1):
        for k, c in x.e_coeffs:
            members.setdefault(k, set()).add(i)
    points = [frozenset(s) for s in members.values() if len(s) >= 2]
    points = sorted(set(points), key=lambda p: sorted(p))
    for i, j in combinations(range(1, n + 1), 2):
        shared = [p for p in points if i in p and j in p]
        if len(shared) != 1:
            raise InconsistentArrangement(f"lines {i} and {j} share {len(shared)} points")
    pts = [tuple(sorted(p)) for p in points] + [(0, i) for i in range(1, n + 1)]
    return LineArrangement(n, tuple(pts))

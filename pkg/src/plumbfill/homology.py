"""Homology classes in CP^2 # N (-CP^2) and the blow-up / blow-down calculus on strands.

A class is stored as ``a*l - sum(c_i * e_i)``: ``l_coeff`` is ``a`` and ``e_coeffs``
maps ``i`` to ``c_i``.  Note the sign: the exceptional class ``e_k`` itself has
``c_k = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

from plumbfill.errors import DomainError


@dataclass(frozen=True)
class HomologyClass:
    l_coeff: int = 0
    e_coeffs: tuple[tuple[int, int], ...] = ()
    ambient_N: int = 0

    def __post_init__(self):
        coeffs = self.e_coeffs
        if isinstance(coeffs, dict):
            coeffs = coeffs.items()
        cleaned = tuple(sorted((int(k), int(v)) for k, v in coeffs if v))
        for k, _ in cleaned:
            if not 1 <= k <= self.ambient_N:
                raise DomainError(f"exceptional index {k} outside 1..{self.ambient_N}")
        object.__setattr__(self, "e_coeffs", cleaned)

    @classmethod
    def line(cls, N: int = 0) -> HomologyClass:
        return cls(1, (), N)

    @classmethod
    def exceptional(cls, k: int, N: int) -> HomologyClass:
        return cls(0, ((k, -1),), N)

    def coeff(self, k: int) -> int:
        return dict(self.e_coeffs).get(k, 0)

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self.e_coeffs)

    def square(self) -> int:
        return pair(self, self)

    def with_ambient(self, N: int) -> HomologyClass:
        return HomologyClass(self.l_coeff, self.e_coeffs, N)

    def __add__(self, other: HomologyClass) -> HomologyClass:
        _same_ambient(self, other)
        merged = dict(self.e_coeffs)
        for k, v in other.e_coeffs:
            merged[k] = merged.get(k, 0) + v
        return HomologyClass(self.l_coeff + other.l_coeff, merged, self.ambient_N)

    def __neg__(self) -> HomologyClass:
        return HomologyClass(-self.l_coeff, {k: -v for k, v in self.e_coeffs}, self.ambient_N)

    def __sub__(self, other: HomologyClass) -> HomologyClass:
        return self + (-other)

    def __rmul__(self, scalar: int) -> HomologyClass:
        return HomologyClass(scalar * self.l_coeff, {k: scalar * v for k, v in self.e_coeffs}, self.ambient_N)

    def __str__(self) -> str:
        parts = []
        if self.l_coeff:
            parts.append(f"{self.l_coeff}l" if self.l_coeff != 1 else "l")
        for k, c in self.e_coeffs:
            sign = "-" if c > 0 else "+"
            mag = abs(c)
            parts.append(f"{sign}{'' if mag == 1 else mag}e{k}")
        text = "".join(parts) or "0"
        return text.lstrip("+")


def _same_ambient(x: HomologyClass, y: HomologyClass) -> None:
    if x.ambient_N != y.ambient_N:
        raise DomainError(f"ambient mismatch: N={x.ambient_N} vs N={y.ambient_N}")


def pair(x: HomologyClass, y: HomologyClass) -> int:
    """Intersection form of CP^2 # N(-CP^2): ``a a' - sum c_i c_i'``."""
    _same_ambient(x, y)
    yc = dict(y.e_coeffs)
    return x.l_coeff * y.l_coeff - sum(c * yc.get(k, 0) for k, c in x.e_coeffs)


def adjunction_check(x: HomologyClass) -> bool:
    """Whether ``x`` satisfies the adjunction formula for an embedded sphere.

    Uses the canonical class ``-3l + sum e_i``: ``K.x = -2 - x.x``.
    """
    k_dot_x = -3 * x.l_coeff + sum(c for _, c in x.e_coeffs)
    return k_dot_x == -2 - x.square()


class Role(NamedTuple):
    kind: str
    arm: int | None = None
    pos: int | None = None

    def __str__(self) -> str:
        if self.kind == "CapArm":
            return f"CapArm({self.arm},{self.pos})"
        return self.kind


CAP_CENTRAL = Role("CapCentral")
EXCEPTIONAL = Role("Exceptional")
AUXILIARY = Role("Auxiliary")


def cap_arm(i: int, j: int) -> Role:
    return Role("CapArm", i, j)


@dataclass(frozen=True)
class Strand:
    id: str
    cls: HomologyClass
    role: Role = field(default=AUXILIARY)

    @property
    def degree(self) -> int:
        return self.cls.square()


def blow_up(strands, point, N: int, new_id: str | None = None):
    """Blow up a point lying on the strands named in ``point``.

    Returns ``(strands, N + 1)``; the new exceptional strand is appended last.
    Incidence is the caller's responsibility: the listed strands must pass through
    a common point.
    """
    point = set(point)
    if not point:
        raise DomainError("blow-up point must lie on at least one strand")
    known = {s.id for s in strands}
    missing = point - known
    if missing:
        raise DomainError(f"unknown strand ids {sorted(missing)}")
    k = N + 1
    out = []
    for s in strands:
        cls = s.cls.with_ambient(k)
        if s.id in point:
            cls = cls + HomologyClass(0, ((k, 1),), k)
        out.append(replace(s, cls=cls))
    sid = new_id if new_id is not None else f"e{k}"
    if sid in known:
        raise DomainError(f"strand id {sid!r} already in use")
    out.append(Strand(sid, HomologyClass.exceptional(k, k), EXCEPTIONAL))
    return out, k


def blow_down(strands, exceptional_id: str):
    """Blow down the strand ``exceptional_id``, whose class must be a unit ``e_k``.

    Returns ``(strands, N - 1, reindex)`` where ``reindex`` maps old indices to new ones.
    """
    target = next((s for s in strands if s.id == exceptional_id), None)
    if target is None:
        raise DomainError(f"unknown strand id {exceptional_id!r}")
    cls = target.cls
    if cls.l_coeff != 0 or len(cls.e_coeffs) != 1 or cls.e_coeffs[0][1] != -1:
        raise DomainError(f"strand {exceptional_id!r} has class {cls}, not a unit exceptional class")
    k = cls.e_coeffs[0][0]
    N = cls.ambient_N
    reindex = {i: (i if i < k else i - 1) for i in range(1, N + 1) if i != k}
    out = []
    for s in strands:
        if s.id == exceptional_id:
            continue
        # x + (x.e_k) e_k removes the e_k component
        coeffs = {reindex[i]: c for i, c in s.cls.e_coeffs if i != k}
        out.append(replace(s, cls=HomologyClass(s.cls.l_coeff, coeffs, N - 1)))
    return out, N - 1, reindex

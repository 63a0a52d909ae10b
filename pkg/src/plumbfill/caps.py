"""Concave caps of star-shaped plumbings and the rational-blowdown graph alphabet."""

from __future__ import annotations

from dataclasses import dataclass, field

from plumbfill.errors import CapUnavailable, DomainError
from plumbfill.seifert_core import (
    PlumbingGraph,
    SeifertData,
    cf_dual,
    cf_expand,
    intersection_matrix,
    is_negative_definite,
)


@dataclass(frozen=True)
class ConcaveCap:
    """A +1 sphere with linear arms plugged in.

    ``essential_arms`` hold weights <= -2, ``minus_one_arm_count`` single (-1)
    spheres.  ``extra_arms`` carries (-1)-headed chains ``[-1, -2, ..., -2]``, which
    only show up in caps of rational-blowdown graphs.
    """

    essential_arms: tuple[tuple[int, ...], ...]
    minus_one_arm_count: int = 0
    extra_arms: tuple[tuple[int, ...], ...] = ()
    central_weight: int = field(default=1)

    def __post_init__(self):
        object.__setattr__(self, "essential_arms", tuple(tuple(int(w) for w in a) for a in self.essential_arms))
        object.__setattr__(self, "extra_arms", tuple(tuple(int(w) for w in a) for a in self.extra_arms))
        if self.central_weight != 1:
            raise DomainError("cap central sphere must have weight +1")
        if self.minus_one_arm_count < 0:
            raise DomainError("negative count of (-1) arms")
        for arm in self.essential_arms:
            if not arm or any(w > -1 for w in arm):
                raise DomainError(f"essential arm {arm} must be non-empty with weights <= -1")
        for arm in self.extra_arms:
            if len(arm) < 1 or arm[0] != -1 or any(w != -2 for w in arm[1:]):
                raise DomainError(f"extra arm {arm} must look like [-1, -2, ..., -2]")

    def arms(self) -> list[tuple[int, ...]]:
        """All arms in canonical order: essential, extra chains, then single (-1)s."""
        return list(self.essential_arms) + list(self.extra_arms) + [(-1,)] * self.minus_one_arm_count

    def positive_arms(self) -> list[tuple[int, ...]]:
        return [tuple(-w for w in arm) for arm in self.arms()]

    @property
    def arm_count(self) -> int:
        return len(self.essential_arms) + len(self.extra_arms) + self.minus_one_arm_count

    @property
    def vertex_count(self) -> int:
        return 1 + sum(len(a) for a in self.arms())

    @classmethod
    def from_arms(cls, arms) -> ConcaveCap:
        """Sort a list of arms (negative weights) into the three families."""
        essential, extra, singles = [], [], 0
        for arm in arms:
            arm = tuple(int(w) for w in arm)
            if arm == (-1,):
                singles += 1
            elif arm[0] == -1:
                extra.append(arm)
            else:
                essential.append(arm)
        return cls(tuple(essential), singles, tuple(extra))

    def dual_graph(self) -> PlumbingGraph:
        """The negative definite plumbing this cap caps off.

        Essential arms dualise arm by arm; every (-1)-headed arm of length t+1
        adds t+1 to the central multiplicity.
        """
        ess = [tuple(-w for w in arm) for arm in self.essential_arms]
        for arm in ess:
            if any(w < 2 for w in arm):
                raise DomainError(f"arm {arm} is not dualisable")
        b = len(ess) + 1 + sum(len(a) for a in self.extra_arms) + self.minus_one_arm_count
        arms = tuple(tuple(-c for c in cf_dual(arm)) for arm in ess)
        return PlumbingGraph(-b, arms)


def build_cap(data: SeifertData) -> ConcaveCap:
    if data.b < data.n + 1:
        raise CapUnavailable(data.b, data.n)
    arms = tuple(tuple(-c for c in cf_dual(cf_expand(alpha, beta))) for alpha, beta in data.pairs)
    return ConcaveCap(arms, data.b - (data.n + 1))


@dataclass(frozen=True)
class RbdGraph:
    """A graph that can be rationally blown down: a linear chain or Gamma_{p,q,r}."""

    kind: str
    weights: tuple[int, ...] = ()
    pqr: tuple[int, int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if self.kind == "Linear":
            if not self.weights or any(w > -2 for w in self.weights):
                raise DomainError(f"linear chain {self.weights} needs weights <= -2")
            if not is_negative_definite(intersection_matrix(linear_graph(self.weights))):
                raise DomainError(f"linear chain {self.weights} is not negative definite")
        elif self.kind == "GammaPQR":
            if self.pqr is None or any(x < 0 for x in self.pqr):
                raise DomainError("GammaPQR needs non-negative p, q, r")
        else:
            raise DomainError(f"unknown graph kind {self.kind!r}")

    @classmethod
    def linear(cls, weights) -> RbdGraph:
        return cls("Linear", tuple(weights))

    @classmethod
    def gamma(cls, p: int, q: int, r: int) -> RbdGraph:
        return cls("GammaPQR", pqr=(p, q, r))

    def plumbing(self) -> PlumbingGraph:
        if self.kind == "Linear":
            return linear_graph(self.weights)
        return gamma_pqr_graph(*self.pqr)

    @property
    def vertex_count(self) -> int:
        return self.plumbing().vertex_count

    def __str__(self) -> str:
        if self.kind == "Linear":
            return "Linear[" + ",".join(str(w) for w in self.weights) + "]"
        return "Gamma(%d,%d,%d)" % self.pqr


def linear_graph(weights) -> PlumbingGraph:
    weights = tuple(weights)
    if len(weights) == 1:
        return PlumbingGraph(weights[0], ())
    return PlumbingGraph(weights[0], (weights[1:],))


def gamma_pqr_graph(p: int, q: int, r: int) -> PlumbingGraph:
    """Central -4 with chains ``q*(-2), -(p+3)``; ``r*(-2), -(q+3)``; ``p*(-2), -(r+3)``."""
    if min(p, q, r) < 0:
        raise DomainError("p, q, r must be non-negative")
    arms = (
        (-2,) * q + (-(p + 3),),
        (-2,) * r + (-(q + 3),),
        (-2,) * p + (-(r + 3),),
    )
    return PlumbingGraph(-4, arms)


def cap_of_gamma_pqr(p: int, q: int, r: int) -> ConcaveCap:
    """Cap with arms ``[-(r+2), (-2)^(p+1)]``, ``[-(p+2), (-2)^(q+1)]``, ``[-(q+2), (-2)^(r+1)]``.

    This is the cap of ``gamma_pqr_graph(p, r, q)``: the labelling of the two
    pictures differs by exchanging q and r.
    """
    if min(p, q, r) < 0:
        raise DomainError("p, q, r must be non-negative")
    arms = (
        (-(r + 2),) + (-2,) * (p + 1),
        (-(p + 2),) + (-2,) * (q + 1),
        (-(q + 2),) + (-2,) * (r + 1),
    )
    return ConcaveCap(arms, 0)


def star_presentations(weights):
    """Ways to read a linear chain as a star around one of its vertices.

    Yields ``(center_index, PlumbingGraph)`` with arms listed left then right,
    each read outward from the center.
    """
    weights = tuple(weights)
    for j, w in enumerate(weights):
        left = tuple(reversed(weights[:j]))
        right = weights[j + 1 :]
        arms = tuple(a for a in (left, right) if a)
        yield j, PlumbingGraph(w, arms)


def cap_of_star(graph: PlumbingGraph) -> ConcaveCap:
    """Cap of a star-shaped negative definite plumbing, when the center is heavy enough."""
    b = -graph.central_weight
    arms = [a for a in graph.arms if a]
    if b < len(arms) + 1:
        raise CapUnavailable(b, len(arms))
    cap_arms = tuple(tuple(-c for c in cf_dual([-w for w in arm])) for arm in arms)
    return ConcaveCap(cap_arms, b - (len(arms) + 1))


def cap_of_linear(graph: RbdGraph) -> ConcaveCap:
    """Cap K_G of a linear chain, as realized by blowing up a single intersection point.

    The center of the star presentation is the first vertex (left to right) for
    which the realization oracle finds a rational-ball configuration.
    """
    if graph.kind != "Linear":
        raise DomainError("cap_of_linear needs a linear chain")
    from plumbfill.rbd import ball_configurations

    for _, star in star_presentations(graph.weights):
        try:
            cap = cap_of_star(star)
        except CapUnavailable:
            continue
        if ball_configurations(cap):
            return cap
    raise DomainError(f"chain {graph.weights} has no rational-ball realization from a single point")


def wahl_chains(max_length: int) -> list[tuple[int, ...]]:
    """Chains (positive entries) bounding rational balls, grown from [4]."""
    seen = {(4,)}
    frontier = [(4,)]
    while frontier:
        nxt = []
        for chain in frontier:
            for child in ((2,) + chain[:-1] + (chain[-1] + 1,), (chain[0] + 1,) + chain[1:] + (2,)):
                if len(child) <= max_length and child not in seen:
                    seen.add(child)
                    nxt.append(child)
        frontier = nxt
    return sorted(seen, key=lambda c: (len(c), c))

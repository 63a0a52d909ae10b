"""Curve configurations over line arrangements and the fillings they describe."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations

import pynauty

from plumbfill import search as _search
from plumbfill.canon import canonical_labelling
from plumbfill.arrangements import (
    ArrangementClass,
    LineArrangement,
    arrangement_of_filling,
    classify_arrangement,
)
from plumbfill.caps import ConcaveCap, build_cap
from plumbfill.errors import DomainError
from plumbfill.homology import (
    CAP_CENTRAL,
    EXCEPTIONAL,
    HomologyClass,
    Strand,
    blow_up,
    cap_arm,
    pair,
)
from plumbfill.seifert_core import SeifertData


@dataclass(frozen=True)
class CurveConfiguration:
    """Strands with exact classes in CP^2 # N(-CP^2), together with which of them meet.

    ``incidence`` lists points as tuples of strand ids; a point on a single strand
    is never recorded.
    """

    strands: tuple[Strand, ...]
    ambient_N: int
    cap: ConcaveCap
    incidence: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "strands", tuple(self.strands))
        object.__setattr__(self, "incidence", tuple(sorted(tuple(sorted(p)) for p in self.incidence)))
        central = [s for s in self.strands if s.role == CAP_CENTRAL]
        if len(central) != 1 or central[0].cls != HomologyClass.line(self.ambient_N):
            raise DomainError("a configuration needs exactly one central strand of class l")
        for s in self.strands:
            if s.cls.ambient_N != self.ambient_N:
                raise DomainError(f"strand {s.id} lives in N={s.cls.ambient_N}, expected {self.ambient_N}")

    def strand(self, sid: str) -> Strand:
        for s in self.strands:
            if s.id == sid:
                return s
        raise KeyError(sid)

    def arm_strands(self) -> dict[int, list[Strand]]:
        arms: dict[int, list[Strand]] = {}
        for s in self.strands:
            if s.role.kind == "CapArm":
                arms.setdefault(s.role.arm, []).append(s)
        return {i: sorted(v, key=lambda s: s.role.pos) for i, v in sorted(arms.items())}

    def cap_strands(self) -> list[Strand]:
        return [s for s in self.strands if s.role.kind in ("CapCentral", "CapArm")]

    def first_arm_classes(self) -> list[HomologyClass]:
        return [arm[0].cls for arm in self.arm_strands().values()]

    def is_complete(self) -> bool:
        """Cap strands carry the cap weights and every other strand is a (-1) sphere."""
        arms = self.arm_strands()
        cap_arms = self.cap.arms()
        if sorted(arms) != list(range(len(cap_arms))):
            return False
        for i, arm in arms.items():
            if tuple(s.degree for s in arm) != cap_arms[i]:
                return False
        return all(s.degree == -1 for s in self.strands if s.role.kind not in ("CapCentral", "CapArm"))


@dataclass(frozen=True)
class FillingDescriptor:
    seifert: SeifertData
    config: CurveConfiguration
    arrangement: LineArrangement
    b2: int
    type_tag: str
    minimal_resolution: bool = False
    history: tuple[tuple[str, ...], ...] = field(default=(), compare=False)

    def key(self):
        return canonical_key(self.config)

    @property
    def arrangement_class(self) -> ArrangementClass:
        return classify_arrangement(self.arrangement)


# ---------------------------------------------------------------- construction


def _base_strands(n_lines: int) -> list[Strand]:
    strands = [Strand("c0", HomologyClass.line(), CAP_CENTRAL)]
    strands += [Strand(f"L{i}", HomologyClass.line(), cap_arm(i - 1, 1)) for i in range(1, n_lines + 1)]
    return strands


def _replay(state: _search.State, n_lines: int):
    """Turn a search state into strands; vertex ``L + k`` becomes ``e{k}``."""
    strands = _base_strands(n_lines)
    ids = [s.id for s in strands]
    N = 0
    for point in state.history:
        strands, N = blow_up(strands, [ids[v] for v in point], N)
        ids.append(strands[-1].id)
    incidence = tuple((ids[u], ids[v]) for u, v in state.edges)
    return strands, N, ids, incidence


def _assign_roles(strands, ids, arms_vertices, cap: ConcaveCap):
    """Match the arms found by the search to cap arm indices, lines in order."""
    cap_arms = cap.arms()
    free = {}
    for i, arm in enumerate(cap_arms):
        free.setdefault(arm, []).append(i)
    roles = {}
    for path in sorted(arms_vertices, key=lambda p: p[0]):
        weights = tuple(strands[v].degree for v in path)
        i = free[weights].pop(0)
        for j, v in enumerate(path, start=1):
            roles[ids[v]] = cap_arm(i, j)
    out = []
    for s in strands:
        if s.role == CAP_CENTRAL:
            out.append(s)
        else:
            out.append(replace(s, role=roles.get(s.id, EXCEPTIONAL)))
    return out


def config_from_state(state: _search.State, n_lines: int, cap: ConcaveCap, arms_vertices) -> CurveConfiguration:
    strands, N, ids, incidence = _replay(state, n_lines)
    strands = _assign_roles(strands, ids, arms_vertices, cap)
    return CurveConfiguration(tuple(strands), N, cap, incidence)


def config_from_cap_classes(cap: ConcaveCap, arm_classes, N: int) -> CurveConfiguration:
    """Complete configuration from the classes of the arm components alone.

    The (-1) spheres are the unit classes ``e_k`` whose index is not the own
    index (coefficient -1) of any exceptional cap component.
    """
    strands = [Strand("c0", HomologyClass.line(N), CAP_CENTRAL)]
    own = set()
    for i, arm in enumerate(arm_classes):
        for j, cls in enumerate(arm, start=1):
            strands.append(Strand(f"K{i}.{j}", cls.with_ambient(N), cap_arm(i, j)))
            own.update(k for k, c in cls.e_coeffs if c == -1)
    for k in range(1, N + 1):
        if k not in own:
            strands.append(Strand(f"e{k}", HomologyClass.exceptional(k, N), EXCEPTIONAL))
    incidence = []
    for x, y in combinations(strands, 2):
        if pair(x.cls, y.cls) > 0:
            incidence.append((x.id, y.id))
    return CurveConfiguration(tuple(strands), N, cap, tuple(incidence))


# ---------------------------------------------------------------- canonical form


def canonical_key(config: CurveConfiguration):
    """Invariant of the strand classes under relabelling exceptional indices and equal arms.

    Strands become vertices coloured by role data; column vertices stand for
    exceptional indices; a coefficient ``c`` of strand x at index k becomes a
    path x - [c] - k (or a direct edge when c = 1).
    """
    N = config.ambient_N
    vertices = []
    edges = []

    def add(colour):
        vertices.append(colour)
        return len(vertices) - 1

    columns = [add(("col",)) for _ in range(N)]
    arms = config.arm_strands()
    for i, arm in arms.items():
        signature = tuple(s.degree for s in arm)
        hub = add(("arm", signature))
        for s in arm:
            v = add(("comp", signature, s.role.pos, s.cls.l_coeff))
            edges.append((hub, v))
            _attach(s.cls, v, columns, add, edges)
    for s in config.strands:
        if s.role.kind == "CapArm":
            continue
        v = add((s.role.kind, s.degree, s.cls.l_coeff))
        _attach(s.cls, v, columns, add, edges)
    labels = sorted(set(vertices))
    index = {lab: i for i, lab in enumerate(labels)}
    parts = [set() for _ in labels]
    for v, lab in enumerate(vertices):
        parts[index[lab]].add(v)
    adj = {v: [] for v in range(len(vertices))}
    for u, v in edges:
        adj[u].append(v)
    g = pynauty.Graph(len(vertices), directed=False, adjacency_dict=adj, vertex_coloring=parts)
    return (N, tuple((lab, len(p)) for lab, p in zip(labels, parts)), pynauty.certificate(g))


def _attach(cls: HomologyClass, v: int, columns, add, edges):
    for k, c in cls.e_coeffs:
        if c == 1:
            edges.append((v, columns[k - 1]))
        else:
            mid = add(("coef", c))
            edges.append((v, mid))
            edges.append((mid, columns[k - 1]))


def config_equivalent(c1: CurveConfiguration, c2: CurveConfiguration) -> bool:
    return canonical_key(c1) == canonical_key(c2)


# ---------------------------------------------------------------- partial order


def cap_leq(k1, k2: ConcaveCap) -> bool:
    """``k1 <= k2`` arm by arm: shorter arms must end strictly below the matching weight."""
    a1 = _positive_arms(k1)
    a2 = _positive_arms(k2)
    if len(a1) != len(a2):
        return False
    for arm1, arm2 in zip(a1, a2):
        if len(arm1) > len(arm2):
            return False
        if any(x > y for x, y in zip(arm1, arm2)):
            return False
        if len(arm1) < len(arm2) and arm1 and arm1[-1] >= arm2[len(arm1) - 1]:
            return False
    return True


def _positive_arms(k) -> list[tuple[int, ...]]:
    arms = k.arms() if isinstance(k, ConcaveCap) else list(k)
    return [tuple(abs(w) for w in arm) for arm in arms]


# ---------------------------------------------------------------- starting configurations


def initial_configurations(cap: ConcaveCap) -> list[CurveConfiguration]:
    """The three starting configurations: (a) concurrent lines, (b) = (a) with the
    multi-point sphere blown up at all but the last line, (c) near-pencil.

    Line i gets the provisional role of the head of arm i-1.  For caps without
    (-1) arms only (a) and (c) are starting points; (b) is still returned, it is
    one of the extra blow-ups at e.
    """
    L = cap.arm_count
    if L < 2:
        raise DomainError("a cap with fewer than two arms has no starting configuration")
    a = _from_state(_search.initial_state(L, L), L, cap)
    out = [a]
    e = a.strands[-1].id
    strands, N = list(a.strands), a.ambient_N
    incidence = set(a.incidence)
    for i in range(1, L):
        line = f"L{i}"
        strands, N = blow_up(strands, [e, line], N)
        new = strands[-1].id
        incidence.discard(tuple(sorted((e, line))))
        incidence |= {tuple(sorted((e, new))), tuple(sorted((line, new)))}
    out.append(CurveConfiguration(tuple(strands), N, cap, tuple(incidence)))
    if L >= 3:
        out.append(_from_state(_search.initial_state(L, L - 1), L, cap))
    return out


def _from_state(state, L, cap) -> CurveConfiguration:
    strands, N, _, incidence = _replay(state, L)
    return CurveConfiguration(tuple(strands), N, cap, incidence)


def standard_blowups(cprime: CurveConfiguration, cap: ConcaveCap) -> CurveConfiguration:
    """Extend a sub-cap to ``cap`` by blowing up free points only.

    Arm i of ``cprime`` is read off the CapArm(i, j) roles.  First each arm is
    lengthened from its last component, then every component is lowered to its
    target weight.
    """
    arms = cprime.arm_strands()
    target = cap.arms()
    current = [tuple(s.degree for s in arms.get(i, [])) for i in range(len(target))]
    if any(not c for c in current) or len(arms) != len(target):
        raise DomainError("every cap arm needs at least its head in the sub-configuration")
    if not cap_leq(current, target):
        raise DomainError(f"sub-cap {current} is not below {target}")
    for s in cprime.strands:
        if s.role.kind not in ("CapCentral", "CapArm") and s.degree != -1:
            raise DomainError(f"strand {s.id} outside the sub-cap is not a (-1) sphere")
    strands, N = list(cprime.strands), cprime.ambient_N
    incidence = set(cprime.incidence)

    def free_blow_up(sid, role):
        nonlocal strands, N
        strands, N = blow_up(strands, [sid], N)
        new = strands[-1]
        strands[-1] = replace(new, role=role)
        incidence.add(tuple(sorted((sid, new.id))))
        return new.id

    for i, arm in enumerate(target):
        ids = [s.id for s in arms[i]]
        while len(ids) < len(arm):
            ids.append(free_blow_up(ids[-1], cap_arm(i, len(ids) + 1)))
        for j, w in enumerate(arm):
            while _degree(strands, ids[j]) > w:
                free_blow_up(ids[j], EXCEPTIONAL)
    return CurveConfiguration(tuple(strands), N, cap, tuple(incidence))


def _degree(strands, sid) -> int:
    return next(s.degree for s in strands if s.id == sid)


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Provenance:
    """What the classes reveal about the starting configuration."""

    origin: str
    multi_index: int | None
    outside_line: int | None
    marked: tuple[int, ...]
    promoted: tuple[int, ...]


def _line_strands(config: CurveConfiguration) -> list[Strand]:
    return [s for s in config.strands if s.cls.l_coeff == 1 and s.role != CAP_CENTRAL]


def _own_index(config: CurveConfiguration) -> dict[int, Strand]:
    """Exceptional index -> the strand carrying it with coefficient -1."""
    out = {}
    for s in config.strands:
        if s.cls.l_coeff == 0:
            for k, c in s.cls.e_coeffs:
                if c == -1:
                    out[k] = s
    return out


def provenance(config: CurveConfiguration) -> list[Provenance]:
    """Readings of the configuration as coming from (a)/(b) or from (c).

    A generic three-line arrangement is a near-pencil in three ways, so a list
    is returned.
    """
    lines = _line_strands(config)
    L = len(lines)
    members: dict[int, set[int]] = {}
    for i, s in enumerate(lines):
        for k, c in s.cls.e_coeffs:
            if c == 1:
                members.setdefault(k, set()).add(i)
    own = _own_index(config)
    shared = {k: m for k, m in members.items() if len(m) >= 2}
    out = []
    full = [k for k, m in shared.items() if len(m) == L]
    if full:
        k0 = full[0]
        e0 = own.get(k0)
        if e0 is None or e0.degree >= -1:
            return [Provenance("a", k0, None, (), ())]
        marked = tuple(sorted(k for k, c in e0.cls.e_coeffs if c == 1 and k in members))
        return [Provenance("b", k0, None, marked, _promoted(marked, own))]
    if L >= 4:
        pencils = [k for k, m in shared.items() if len(m) == L - 1]
        if len(pencils) == 1 and len(shared) == 1 + (L - 1):
            k0 = pencils[0]
            (c,) = set(range(L)) - members[k0]
            marked = tuple(sorted(k for k, m in shared.items() if c in m))
            out.append(Provenance("c", k0, c, marked, _promoted(marked, own)))
    elif L == 3 and len(shared) == 3:
        for c in range(3):
            marked = tuple(sorted(k for k, m in shared.items() if c in m))
            (k0,) = [k for k, m in shared.items() if c not in m]
            out.append(Provenance("c", k0, c, marked, _promoted(marked, own)))
    return out


def _promoted(marked, own) -> tuple[int, ...]:
    return tuple(k for k in marked if k in own and own[k].degree <= -2)


def classify_type(config: CurveConfiguration) -> str:
    readings = provenance(config)
    if not readings:
        raise DomainError("configuration does not come from one of the starting arrangements")
    best = min(readings, key=lambda p: len(p.promoted))
    if best.origin == "a":
        return "A"
    return "B" if len(best.promoted) <= 1 else "C"


def type_tag(data: SeifertData, config: CurveConfiguration) -> str:
    if data.b == data.n + 1:
        return "BoundaryCase"
    return classify_type(config)


# ---------------------------------------------------------------- descriptors


def b2_of(config: CurveConfiguration) -> int:
    return config.ambient_N + 1 - len(config.cap_strands())


def describe(data: SeifertData, config: CurveConfiguration, minimal: bool = False, history=()) -> FillingDescriptor:
    arrangement = arrangement_of_filling(config.first_arm_classes())
    return FillingDescriptor(data, config, arrangement, b2_of(config), type_tag(data, config), minimal, tuple(history))


def minimal_resolution_config(cap: ConcaveCap) -> CurveConfiguration:
    """Standard blow-ups of configuration (a): lines become the arm heads in order."""
    a = initial_configurations(cap)[0]
    return standard_blowups(a, cap)


def minimal_resolution(data: SeifertData) -> FillingDescriptor:
    return describe(data, minimal_resolution_config(build_cap(data)), minimal=True)


def arrangement_shapes(n_lines: int) -> list[int]:
    """Pencil sizes of the two starting arrangements S_(L,L) and S_(L,L-1)."""
    return [n_lines] if n_lines < 3 else [n_lines, n_lines - 1]


def configurations_for_cap(cap: ConcaveCap, pencils=None, total_blowups=None, max_multi_blowups=None,
                           max_nodes=None) -> list[CurveConfiguration]:
    """All complete configurations of ``cap`` over the given pencil sizes, one per class."""
    L = cap.arm_count
    target = _search.CapTarget(cap.positive_arms())
    if pencils is None:
        pencils = arrangement_shapes(L)
    found = {}
    for m in pencils:
        finals, _ = _search.search(L, m, target, total_blowups, max_multi_blowups, max_nodes)
        for state in finals:
            config = config_from_state(state, L, cap, _search.final_arms(state, target))
            found.setdefault(canonical_key(config), config)
    return [found[k] for k in sorted(found)]


def enumerate_fillings(data: SeifertData, max_extra: int = 4, max_nodes=None) -> list[FillingDescriptor]:
    """Minimal symplectic fillings of ``data`` over the two starting arrangements.

    Returned largest b2 first; the minimal resolution is flagged.  For b = n+1 the
    sphere over the multi-point is blown up at most ``max_extra`` times.
    """
    cap = build_cap(data)
    boundary = data.b == data.n + 1
    configs = configurations_for_cap(cap, max_multi_blowups=max_extra if boundary else None, max_nodes=max_nodes)
    minimal = minimal_resolution_config(cap)
    minimal_key = canonical_key(minimal)
    # the minimal resolution is reported in its standard indexing, which is the
    # start of every blowdown sequence
    out = [describe(data, minimal, True) if canonical_key(c) == minimal_key else describe(data, c) for c in configs]
    out.sort(key=lambda d: (-d.b2, not d.minimal_resolution))
    return out


# ---------------------------------------------------------------- realizability


def pencil_of(config: CurveConfiguration):
    """``(m, pencil lines)`` of the arrangement read from the heads, None if N_S >= 2."""
    arrangement = arrangement_of_filling(config.first_arm_classes())
    cls = classify_arrangement(arrangement)
    if cls.kind == "Concurrent":
        return cls.m, set(arrangement.multi_points()[0])
    if cls.kind == "Generic":
        return 0, set()
    return None


def realize(config: CurveConfiguration) -> CurveConfiguration | None:
    """A configuration built by actual blow-ups of the arrangement with the same classes.

    Works backwards: the dual graph of the strands is blown down to the starting
    arrangement, then the blow-ups are replayed forwards and the resulting classes
    compared with ``config``.  Returns the replayed configuration or None.
    """
    pencil = pencil_of(config)
    if pencil is None:
        return None
    m, pencil_lines = pencil
    strands = list(config.strands)
    heads = {arm[0].id: i for i, arm in enumerate(config.arm_strands().values(), start=1)}
    kinds, degs = [], []
    for s in strands:
        if s.role == CAP_CENTRAL:
            kinds.append(_search.CENTRAL)
        elif s.id in heads:
            outside = m and heads[s.id] not in pencil_lines
            kinds.append(_search.OUTSIDE if outside else _search.LINE)
        elif s.cls.l_coeff != 0:
            return None
        else:
            kinds.append(_search.EXC)
        degs.append(s.degree)
    edges = []
    for i, j in combinations(range(len(strands)), 2):
        p = pair(strands[i].cls, strands[j].cls)
        if p == 1:
            edges.append((i, j))
        elif p != 0:
            return None
    L = len(heads)
    start = _search.initial_state(L, m)
    found = _search.reduce_to_start(kinds, degs, edges, start)
    if found is None:
        return None
    removals, survivors, reduced_degs, reduced_edges = found

    # match the reduced graph with the starting state vertex by vertex
    pos = {v: i for i, v in enumerate(survivors)}
    lab_a = canonical_labelling([(kinds[v], reduced_degs[v]) for v in survivors],
                                [(pos[u], pos[v]) for u, v in reduced_edges])
    plain = [_search.EXC if k == _search.MULTI else k for k in start.kinds]
    lab_b = canonical_labelling(list(zip(plain, start.degs)), start.edges)
    replayed, N, ids, _ = _replay(start, L)
    current = {survivors[a]: ids[b] for a, b in zip(lab_a, lab_b)}
    for v, nbrs in reversed(removals):
        replayed, N = blow_up(replayed, [current[u] for u in nbrs], N)
        current[v] = replayed[-1].id
    by_id = {s.id: s for s in replayed}
    out = [replace(by_id[current[i]], role=s.role) for i, s in enumerate(strands)]
    incidence = [(out[i].id, out[j].id) for i, j in edges]
    candidate = CurveConfiguration(tuple(out), N, config.cap, tuple(incidence))
    if canonical_key(candidate) != canonical_key(config):
        return None
    return candidate

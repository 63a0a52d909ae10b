"""Rational blowdowns acting on curve configurations.

A step happens at a point p of the arrangement where the lines T meet.  Near p
the configuration looks like the standard blow-ups of a concurrent
arrangement: the exceptional sphere e of p, and along each arm through p a
prefix of components whose classes, restricted to the "local" exceptional
indices, read

    X_1 = l - e - f_1 - (lowering indices of X_1)
    X_j = f_{j-1} - f_j - (lowering indices of X_j)      (f_s absent)

where ``f_j`` is the own index of X_{j+1} and a lowering index is an e_k meeting
X_j and no other cap component.  These prefixes form a concave cap K_G whose
dual graph is G, and the local configuration is the minimal resolution of G.
Rationally blowing down G swaps the local classes for a configuration of K_G
with b2 = 0 (a rational ball), keeping everything outside the local indices.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product

from plumbfill.arrangements import multi_point_count
from plumbfill.caps import ConcaveCap, RbdGraph, build_cap
from plumbfill.configs import (
    CurveConfiguration,
    FillingDescriptor,
    arrangement_shapes,
    canonical_key,
    config_from_cap_classes,
    configurations_for_cap,
    describe,
    minimal_resolution,
    pencil_of,
    realize,
)
from plumbfill.errors import DomainError, SynthesisRefused, UnrealizableStep
from plumbfill.homology import HomologyClass, Strand, blow_up, cap_arm, CAP_CENTRAL, EXCEPTIONAL
from plumbfill.seifert_core import SeifertData, intersection_matrix, is_negative_definite, seifert_from_arms


@dataclass(frozen=True)
class LocalArm:
    """The part of one arm through the site that belongs to the blown-down region."""

    arm: int
    prefix: int
    ext: tuple[int, ...]
    lowering: tuple[tuple[int, ...], ...]

    def weights(self) -> tuple[int, ...]:
        """Positive weights of the K_G arm."""
        s = self.prefix
        out = []
        for j in range(s):
            base = (1 if s > 1 else 0) if j == 0 else 1 + (1 if j < s - 1 else 0)
            out.append(base + len(self.lowering[j]))
        return tuple(out)


@dataclass(frozen=True)
class RbdStep:
    graph: RbdGraph
    site_point: tuple[int, ...]
    ball_arrangement_choice: str
    affected_arms: tuple[int, ...]
    exceptional_set: tuple[int, ...]
    site_index: int = 0
    local: tuple[LocalArm, ...] = ()
    ball_classes: tuple[tuple[HomologyClass, ...], ...] = ()
    ball_N: int = 0

    def b2_drop(self) -> int:
        return self.graph.vertex_count


@dataclass(frozen=True)
class ReachabilityCertificate:
    verdict: str
    steps: tuple[RbdStep, ...] = ()
    n_s: int | None = None
    explored: int | None = None
    depth: int | None = None
    bounded: bool = False
    notes: tuple[str, ...] = field(default=())


# ---------------------------------------------------------------- alphabet


def _valid_shape(weights: tuple[int, ...]) -> bool:
    if all(w >= 2 for w in weights):
        return True
    return weights[0] == 1 and all(w == 2 for w in weights[1:])


def graph_of_cap(cap: ConcaveCap) -> RbdGraph | None:
    """The graph G with boundary dual to ``cap``, if it is in the Linear / Gamma alphabet."""
    try:
        star = cap.dual_graph()
    except DomainError:
        return None
    if not is_negative_definite(intersection_matrix(star)):
        return None
    arms = [a for a in star.arms if a]
    if len(arms) <= 2:
        left = tuple(reversed(arms[0])) if arms else ()
        right = arms[1] if len(arms) > 1 else ()
        chain = left + (star.central_weight,) + right
        chain = min(chain, tuple(reversed(chain)))
        return RbdGraph.linear(chain)
    if len(arms) == 3 and star.central_weight == -4:
        pos = [tuple(-w for w in a) for a in arms]
        for order in permutations(pos):
            parsed = [_two_tail(a) for a in order]
            if None in parsed:
                continue
            (q, p3), (r, q3), (p, r3) = parsed
            if p3 == p + 3 and q3 == q + 3 and r3 == r + 3:
                return RbdGraph.gamma(p, q, r)
    return None


def _two_tail(arm):
    if any(w != 2 for w in arm[:-1]) or arm[-1] < 3:
        return None
    return len(arm) - 1, arm[-1]


@lru_cache(maxsize=None)
def _balls(arms: tuple[tuple[int, ...], ...]):
    cap = ConcaveCap.from_arms(tuple(tuple(-w for w in a) for a in arms))
    return cap, configurations_for_cap(cap, pencils=arrangement_shapes(cap.arm_count),
                                       total_blowups=cap.vertex_count - 1)


def ball_configurations(cap: ConcaveCap) -> list[CurveConfiguration]:
    """Configurations of ``cap`` with b2 = 0, i.e. rational-ball fillings of its dual."""
    if cap.arm_count < 2:
        return []
    arms = tuple(sorted(tuple(-w for w in a) for a in cap.arms()))
    return list(_balls(arms)[1])


# ---------------------------------------------------------------- local structure


def _supports(config: CurveConfiguration):
    """column -> {(arm, pos): coefficient} over the arm components."""
    out: dict[int, dict] = {}
    for s in config.strands:
        if s.role.kind != "CapArm":
            continue
        for k, c in s.cls.e_coeffs:
            out.setdefault(k, {})[(s.role.arm, s.role.pos)] = c
    return out


def sites(config: CurveConfiguration):
    """Columns whose exceptional sphere passes through the heads of two or more arms and nothing else."""
    out = []
    for k, sup in sorted(_supports(config).items()):
        if len(sup) >= 2 and all(pos == 1 and c == 1 for (_, pos), c in sup.items()):
            out.append((k, tuple(sorted(arm for arm, _ in sup))))
    return out


def _arm_options(config: CurveConfiguration, arm: int, supports) -> list[LocalArm]:
    comps = config.arm_strands()[arm]
    own = {}
    for s in comps:
        for k, c in s.cls.e_coeffs:
            if c == -1:
                own[s.role.pos] = k
    lowering_all = []
    for s in comps:
        pos = s.role.pos
        lowering_all.append(tuple(k for k, c in s.cls.e_coeffs if c == 1 and supports[k] == {(arm, pos): 1}))
    options = []
    ext = []
    for s_len in range(1, len(comps) + 1):
        if s_len > 1:
            k = own.get(s_len)
            if k is None or supports[k] != {(arm, s_len - 1): 1, (arm, s_len): -1}:
                break
            ext.append(k)
        for counts in product(*(range(len(lowering_all[j]) + 1) for j in range(s_len))):
            local = LocalArm(arm, s_len, tuple(ext), tuple(lowering_all[j][: counts[j]] for j in range(s_len)))
            if _valid_shape(local.weights()):
                options.append(local)
    return options


def _local_choices(config: CurveConfiguration):
    """Yield ``(site_index, arms, locals, G, K_G)`` for every admissible blown-down region."""
    supports = _supports(config)
    for k0, arms in sites(config):
        per_arm = [_arm_options(config, a, supports) for a in arms]
        seen_shapes = {}
        for combo in product(*per_arm):
            weights = tuple(loc.weights() for loc in combo)
            shape = tuple(sorted(weights))
            if shape not in seen_shapes:
                seen_shapes[shape] = _admissible(shape)
            verdict = seen_shapes[shape]
            if verdict is None:
                continue
            yield k0, arms, combo, verdict


@lru_cache(maxsize=None)
def _admissible(shape):
    cap = ConcaveCap.from_arms(tuple(tuple(-w for w in a) for a in shape))
    graph = graph_of_cap(cap)
    if graph is None:
        return None
    if not ball_configurations(cap):
        return None
    return graph, cap


# ---------------------------------------------------------------- splicing


def _splice(config: CurveConfiguration, k0: int, combo, ball: CurveConfiguration, assignment):
    """Replace the local classes of ``combo`` by the ball classes; ``assignment[t]`` is the ball arm for combo[t]."""
    local_cols = {k0}
    for loc in combo:
        local_cols.update(loc.ext)
        for low in loc.lowering:
            local_cols.update(low)
    N = config.ambient_N
    kept = [k for k in range(1, N + 1) if k not in local_cols]
    remap = {k: i for i, k in enumerate(kept, start=1)}
    offset = len(kept)
    new_N = offset + ball.ambient_N
    ball_arms = ball.arm_strands()
    local_pos = {}
    for t, loc in enumerate(combo):
        for j in range(1, loc.prefix + 1):
            local_pos[(loc.arm, j)] = ball_arms[assignment[t]][j - 1].cls
    arm_classes = []
    for i, comps in config.arm_strands().items():
        classes = []
        for s in comps:
            rest = {remap[k]: c for k, c in s.cls.e_coeffs if k in remap}
            if any(k in local_cols for k, _ in s.cls.e_coeffs) and (i, s.role.pos) not in local_pos:
                raise UnrealizableStep(f"component {i},{s.role.pos} reaches into the blown-down region")
            b = local_pos.get((i, s.role.pos))
            if b is None:
                classes.append(HomologyClass(s.cls.l_coeff, rest, new_N))
            else:
                for k, c in b.e_coeffs:
                    rest[offset + k] = c
                classes.append(HomologyClass(b.l_coeff, rest, new_N))
        arm_classes.append(classes)
    return config_from_cap_classes(config.cap, arm_classes, new_N), tuple(sorted(local_cols))


def _assignments(combo, ball: CurveConfiguration):
    """Bijections from local arms to ball arms preserving weights."""
    ball_weights = {i: tuple(-s.degree for s in arm) for i, arm in ball.arm_strands().items()}
    want = [loc.weights() for loc in combo]
    results = []

    def rec(t, used, acc):
        if t == len(want):
            results.append(tuple(acc))
            return
        for i, w in ball_weights.items():
            if i not in used and w == want[t]:
                rec(t + 1, used | {i}, acc + [i])

    rec(0, frozenset(), [])
    return results


def is_realized(config: CurveConfiguration) -> bool:
    """Whether some curve configuration over the arrangement has exactly these classes."""
    return realize(config) is not None


def _ball_choice(ball: CurveConfiguration) -> str:
    m, _ = pencil_of(ball)
    arms = ball.cap.arm_count
    return "concurrent" if m == arms or arms == 2 else "near-pencil"


@dataclass
class SuccessorStats:
    candidates: int = 0
    unrealized: int = 0
    multi_point_violations: int = 0


def rbd_successors(W: FillingDescriptor, stats: SuccessorStats | None = None, validate: bool = True):
    """All descriptors one rational blowdown away from ``W``, one per equivalence class."""
    config = W.config
    found = {}
    for k0, arms, combo, (graph, kg) in _local_choices(config):
        for ball in ball_configurations(kg):
            for assignment in _assignments(combo, ball):
                try:
                    new_config, consumed = _splice(config, k0, combo, ball, assignment)
                except UnrealizableStep:
                    continue
                key = canonical_key(new_config)
                if key in found:
                    continue
                if stats is not None:
                    stats.candidates += 1
                succ = _describe_successor(W, new_config)
                if succ is None:
                    continue
                if stats is not None and multi_point_count(succ.arrangement) >= 2:
                    stats.multi_point_violations += 1
                if validate and not is_realized(new_config):
                    if stats is not None:
                        stats.unrealized += 1
                    found[key] = None
                    continue
                step = RbdStep(
                    graph=graph,
                    site_point=tuple(a + 1 for a in arms),
                    ball_arrangement_choice=_ball_choice(ball),
                    affected_arms=tuple(loc.arm for loc in combo),
                    exceptional_set=consumed,
                    site_index=k0,
                    local=tuple(combo),
                    ball_classes=tuple(tuple(s.cls for s in ball.arm_strands()[assignment[t]]) for t in range(len(combo))),
                    ball_N=ball.ambient_N,
                )
                found[key] = (step, succ)
    out = [v for v in found.values() if v is not None]
    out.sort(key=lambda p: (p[0].graph.vertex_count, str(p[0].graph), p[0].site_point, canonical_key(p[1].config)))
    return out


def _describe_successor(W: FillingDescriptor, config: CurveConfiguration):
    try:
        return describe(W.seifert, config)
    except DomainError:
        return None


def apply_rbd_step(W: FillingDescriptor, step: RbdStep) -> FillingDescriptor:
    config = W.config
    supports = _supports(config)
    sup = supports.get(step.site_index, {})
    arms = tuple(sorted(a for a, _ in sup))
    if arms != tuple(sorted(step.affected_arms)) or any(pos != 1 or c != 1 for (_, pos), c in sup.items()):
        raise UnrealizableStep(f"index {step.site_index} is not a site through arms {step.affected_arms}")
    for loc in step.local:
        if loc not in _arm_options(config, loc.arm, supports):
            raise UnrealizableStep(f"arm {loc.arm} does not carry the recorded local structure")
    kg = ConcaveCap.from_arms(tuple(tuple(-w for w in loc.weights()) for loc in step.local))
    graph = graph_of_cap(kg)
    if graph != step.graph:
        raise UnrealizableStep(f"local cap gives {graph}, step records {step.graph}")
    strands = [Strand("c0", HomologyClass.line(step.ball_N), CAP_CENTRAL)]
    for t, classes in enumerate(step.ball_classes):
        for j, cls in enumerate(classes, start=1):
            strands.append(Strand(f"B{t}.{j}", cls, cap_arm(t, j)))
    ball = _BallView(strands, step.ball_N)
    new_config, _ = _splice(config, step.site_index, step.local, ball, tuple(range(len(step.local))))
    if new_config.ambient_N + 1 - len(new_config.cap_strands()) != W.b2 - graph.vertex_count:
        raise UnrealizableStep("b2 bookkeeping failed")
    return describe(W.seifert, new_config)


class _BallView:
    """Just enough of a configuration for :func:`_splice`."""

    def __init__(self, strands, N):
        self.strands = strands
        self.ambient_N = N

    def arm_strands(self):
        arms = {}
        for s in self.strands:
            if s.role.kind == "CapArm":
                arms.setdefault(s.role.arm, []).append(s)
        return {i: sorted(v, key=lambda s: s.role.pos) for i, v in arms.items()}


# ---------------------------------------------------------------- sequences


def verify_sequence(start: FillingDescriptor, steps, target: FillingDescriptor, trail: list | None = None) -> bool:
    trail = trail if trail is not None else []
    current = start
    total = 0
    for i, step in enumerate(steps):
        if not is_negative_definite(intersection_matrix(step.graph.plumbing())):
            trail.append(f"step {i}: {step.graph} is not negative definite")
            return False
        try:
            nxt = apply_rbd_step(current, step)
        except (UnrealizableStep, DomainError) as exc:
            trail.append(f"step {i}: {exc}")
            return False
        if nxt.seifert != start.seifert or nxt.config.cap != start.config.cap or not nxt.config.is_complete():
            trail.append(f"step {i}: result is not a filling of the same boundary")
            return False
        total += step.graph.vertex_count
        current = nxt
    if total != start.b2 - target.b2:
        trail.append(f"b2 accounting: graphs remove {total}, descriptors differ by {start.b2 - target.b2}")
        return False
    if canonical_key(current.config) != canonical_key(target.config):
        trail.append("final descriptor is not equivalent to the target")
        return False
    return True


def _expand_one(node: FillingDescriptor):
    stats = SuccessorStats()
    return rbd_successors(node, stats), stats


def _expand(frontier, jobs: int, stats: SuccessorStats | None):
    """Successor lists of every frontier node, in frontier order."""
    if jobs > 1 and len(frontier) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_expand_one, frontier))
    else:
        results = [_expand_one(node) for node in frontier]
    if stats is not None:
        for _, st in results:
            stats.candidates += st.candidates
            stats.unrealized += st.unrealized
            stats.multi_point_violations += st.multi_point_violations
    return [succs for succs, _ in results]


def _search_to(start: FillingDescriptor, target_key, min_b2: int, depth_bound: int | None, stats=None, jobs: int = 1):
    """Breadth-first search over successors; returns (steps or None, explored).

    Levels are expanded as a batch (in parallel when ``jobs > 1``) and merged
    in frontier order, so the result never depends on ``jobs``.
    """
    start_key = canonical_key(start.config)
    if start_key == target_key:
        return [], 1
    parent = {start_key: None}
    frontier = [start]
    explored = 1
    depth = 0
    while frontier and (depth_bound is None or depth < depth_bound):
        nxt = []
        for node, succs in zip(frontier, _expand(frontier, jobs, stats)):
            node_key = canonical_key(node.config)
            for step, succ in succs:
                if succ.b2 < min_b2:
                    continue
                key = canonical_key(succ.config)
                if key in parent:
                    continue
                parent[key] = (node_key, step)
                explored += 1
                if key == target_key:
                    steps = []
                    while parent[key] is not None:
                        prev, st = parent[key]
                        steps.append(st)
                        key = prev
                    return steps[::-1], explored
                nxt.append(succ)
        frontier = nxt
        depth += 1
    return None, explored


def synthesize_sequence(target: FillingDescriptor, jobs: int = 1) -> list[RbdStep]:
    """A sequence of rational blowdowns from the minimal resolution to ``target``.

    Steps only act at points where two or more arm heads meet.  A target that
    needs a blowdown inside the tail of a single arm raises SynthesisRefused.
    """
    data = target.seifert
    if data.b < data.n + 2:
        raise SynthesisRefused("b = n+1: no synthesis guarantee, use check_reachable")
    if multi_point_count(target.arrangement) >= 2:
        raise SynthesisRefused("arrangement has two or more multi-points, use check_reachable")
    start = minimal_resolution(data)
    steps, _ = _search_to(start, canonical_key(target.config), target.b2, None, jobs=jobs)
    if steps is None:
        raise SynthesisRefused("no sequence of rational blowdowns reaches the target")
    return steps


def check_reachable(target: FillingDescriptor, depth_bound: int = 3, jobs: int = 1) -> ReachabilityCertificate:
    data = target.seifert
    if data.b < data.n + 1:
        raise DomainError("reachability needs b >= n+1")
    n_s = multi_point_count(target.arrangement)
    if n_s >= 2:
        return ReachabilityCertificate("Obstructed", n_s=n_s)
    if data.b >= data.n + 2:
        try:
            return ReachabilityCertificate("Reachable", tuple(synthesize_sequence(target, jobs)))
        except SynthesisRefused as exc:
            return ReachabilityCertificate("UnreachableExhaustive", explored=None, depth=None, notes=(str(exc),))
    start = minimal_resolution(data)
    steps, explored = _search_to(start, canonical_key(target.config), target.b2, depth_bound, jobs=jobs)
    if steps is not None:
        return ReachabilityCertificate("Reachable", tuple(steps))
    return ReachabilityCertificate("UnreachableExhaustive", explored=explored, depth=depth_bound, bounded=True,
                                   notes=("forward search from the minimal resolution, successors of lower b2 than the target pruned",))


def forward_closure(start: FillingDescriptor, depth: int, stats: SuccessorStats | None = None, jobs: int = 1):
    """Every descriptor reachable in at most ``depth`` steps, with the transitions taken."""
    seen = {canonical_key(start.config): start}
    transitions = []
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for node, succs in zip(frontier, _expand(frontier, jobs, stats)):
            for step, succ in succs:
                transitions.append((node, step, succ))
                key = canonical_key(succ.config)
                if key not in seen:
                    seen[key] = succ
                    nxt.append(succ)
        frontier = nxt
    return list(seen.values()), transitions


# ---------------------------------------------------------------- Y_n and W_n


def yn_seifert(n: int) -> SeifertData:
    if n < 3:
        raise DomainError("Y_n is defined for n >= 3")
    arms = [[2]] * (n - 1) + [[3], [3] + [2] * (n - 1), [2] * (n - 1) + [3]]
    return seifert_from_arms(n + 3, arms)


def wn_configuration(n: int) -> CurveConfiguration:
    """The scripted blow-ups of S_(n+2,n+1) producing C_n.

    Lines 1..n+1 form the pencil, line n+2 is the line c off it.  The multi-point
    sphere is blown up where it meets every pencil line but the second.
    """
    if n < 3:
        raise DomainError("W_n is defined for n >= 3")
    data = yn_seifert(n)
    cap = build_cap(data)
    L = n + 2
    c = f"L{L}"
    strands = [Strand("c0", HomologyClass.line(), CAP_CENTRAL)]
    strands += [Strand(f"L{i}", HomologyClass.line(), EXCEPTIONAL) for i in range(1, L + 1)]
    N = 0
    strands, N = blow_up(strands, [f"L{i}" for i in range(1, L)], N)
    e = strands[-1].id
    pencil_points = {}
    for i in range(1, L):
        strands, N = blow_up(strands, [f"L{i}", c], N)
        pencil_points[i] = strands[-1].id
    for i in range(1, L):
        if i != 2:
            strands, N = blow_up(strands, [e, f"L{i}"], N)
    strands, N = blow_up(strands, [pencil_points[2], "L2"], N)
    strands, N = blow_up(strands, [pencil_points[n + 1], c], N)
    return _roles_from_degrees(strands, N, cap)


def _roles_from_degrees(strands, N, cap: ConcaveCap) -> CurveConfiguration:
    """Give cap roles to a finished strand set by following arms outward from the lines."""
    from itertools import combinations

    from plumbfill.homology import pair

    central = strands[0]
    in_k = {s.id for s in strands if s is central or s.cls.l_coeff == 1 or s.degree <= -2}
    meets = {s.id: set() for s in strands}
    incidence = []
    for x, y in combinations(strands, 2):
        if pair(x.cls, y.cls) > 0:
            meets[x.id].add(y.id)
            meets[y.id].add(x.id)
            incidence.append((x.id, y.id))
    by_id = {s.id: s for s in strands}
    free = {}
    for i, arm in enumerate(cap.arms()):
        free.setdefault(arm, []).append(i)
    roles = {}
    for s in strands[1:]:
        if s.cls.l_coeff != 1:
            continue
        path = [s.id]
        prev = central.id
        while True:
            nxt = [u for u in meets[path[-1]] if u in in_k and u != prev]
            if len(nxt) != 1:
                break
            prev = path[-1]
            path.append(nxt[0])
        weights = tuple(by_id[u].degree for u in path)
        if not free.get(weights):
            raise DomainError(f"arm {weights} does not belong to the cap")
        i = free[weights].pop(0)
        for j, u in enumerate(path, start=1):
            roles[u] = cap_arm(i, j)
    out = [central] + [Strand(s.id, s.cls, roles.get(s.id, EXCEPTIONAL)) for s in strands[1:]]
    return CurveConfiguration(tuple(out), N, cap, tuple(incidence))


def wn_filling(n: int) -> FillingDescriptor:
    return describe(yn_seifert(n), wn_configuration(n))

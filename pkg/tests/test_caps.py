from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from plumbfill.caps import (
    ConcaveCap,
    RbdGraph,
    build_cap,
    cap_of_gamma_pqr,
    cap_of_linear,
    gamma_pqr_graph,
    linear_graph,
    wahl_chains,
)
from plumbfill.configs import minimal_resolution_config
from plumbfill.errors import CapUnavailable, DomainError
from plumbfill.rbd import yn_seifert
from plumbfill.seifert_core import (
    SeifertData,
    cf_evaluate,
    intersection_matrix,
    is_negative_definite,
    plumbing_graph,
)


def test_build_cap_examples():
    cap = build_cap(SeifertData(5, ((2, 1),) * 3))
    assert cap.central_weight == 1
    assert cap.essential_arms == ((-2,),) * 3 and cap.minus_one_arm_count == 1
    cap = build_cap(SeifertData(4, ((3, 1),) * 3))
    assert cap.essential_arms == ((-2, -2),) * 3 and cap.minus_one_arm_count == 0
    with pytest.raises(CapUnavailable) as err:
        build_cap(SeifertData(3, ((2, 1),) * 3))
    assert err.value.b == 3 and err.value.n == 3


def test_arm_order_and_minus_one_arms_last():
    cap = build_cap(SeifertData(6, ((3, 1), (2, 1))))
    assert cap.arms() == [(-2, -2), (-2,), (-1,), (-1,), (-1,)]


pairs = st.integers(2, 30).flatmap(
    lambda a: st.tuples(st.just(a), st.sampled_from([b for b in range(1, a) if gcd(a, b) == 1]))
)


@given(st.lists(pairs, min_size=1, max_size=5), st.integers(0, 3))
def test_cap_arms_are_dual_fractions(arms, extra):
    data = SeifertData(len(arms) + 1 + extra, tuple(arms))
    cap = build_cap(data)
    graph = plumbing_graph(data)
    for cap_arm, graph_arm, (alpha, beta) in zip(cap.essential_arms, graph.arms, arms):
        # dual fractions: alpha/beta and alpha/(alpha - beta), checked by value
        assert cf_evaluate([-w for w in graph_arm]) == Fraction(alpha, beta)
        value = cf_evaluate([-w for w in cap_arm])
        assert value.numerator == alpha and value.denominator == alpha - beta
    assert cap.minus_one_arm_count == extra


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_yn_cap_shape(n):
    cap = build_cap(yn_seifert(n))
    expected = [(-(n + 1), -2), (-2, -(n + 1))] + [(-2,)] * (n - 1) + [(-2, -2)]
    assert sorted(cap.arms()) == sorted(expected)
    assert cap.minus_one_arm_count == 0


def test_gamma_pqr_graph_examples():
    g = gamma_pqr_graph(0, 0, 0)
    assert g.central_weight == -4 and sorted(g.arms) == [(-3,), (-3,), (-3,)]
    assert g.vertex_count == 4 and len(g.edges()) == 3
    g = gamma_pqr_graph(1, 0, 0)
    assert g.central_weight == -4
    assert sorted(g.arms) == sorted([(-4,), (-3,), (-2, -3)])


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_gamma_pqr_vertex_count_and_definite(p, q, r):
    g = gamma_pqr_graph(p, q, r)
    assert g.vertex_count == p + q + r + 4
    assert is_negative_definite(intersection_matrix(g))


def test_cap_of_gamma_pqr_examples():
    assert cap_of_gamma_pqr(0, 0, 0).arms() == [(-2, -2)] * 3
    assert cap_of_gamma_pqr(1, 2, 3).arms() == [(-5, -2, -2), (-3, -2, -2, -2), (-4, -2, -2, -2, -2)]


@pytest.mark.parametrize("pqr", [(0, 0, 0), (1, 0, 0), (0, 1, 2), (1, 2, 3)])
def test_cap_of_gamma_pqr_glues_to_rational_surface(pqr):
    cap = cap_of_gamma_pqr(*pqr)
    assert [len(a) for a in cap.arms()] == [pqr[0] + 2, pqr[1] + 2, pqr[2] + 2]
    # the cap bounds the same manifold as Gamma with q and r exchanged
    dual = cap.dual_graph()
    p, q, r = pqr
    assert sorted(dual.arms) == sorted(gamma_pqr_graph(p, r, q).arms)
    config = minimal_resolution_config(cap)
    assert cap.vertex_count + gamma_pqr_graph(*pqr).vertex_count == config.ambient_N + 1


def test_cap_of_linear_examples():
    cap = cap_of_linear(RbdGraph.linear([-4]))
    assert cap.arms() == [(-1,)] * 3
    cap = cap_of_linear(RbdGraph.linear([-5, -2]))
    assert cap.arms() == [(-2,), (-1,), (-1,), (-1,)]
    with pytest.raises(DomainError):
        cap_of_linear(RbdGraph.linear([-2, -2]))
    with pytest.raises(DomainError):
        cap_of_linear(RbdGraph.gamma(0, 0, 0))


def test_cap_of_linear_glues_to_rational_surface():
    for chain in wahl_chains(4):
        graph = RbdGraph.linear([-c for c in chain])
        cap = cap_of_linear(graph)
        config = minimal_resolution_config(cap)
        assert cap.vertex_count + graph.vertex_count == config.ambient_N + 1


def test_rbd_graph_validation():
    with pytest.raises(DomainError):
        RbdGraph.linear([-1, -2])
    with pytest.raises(DomainError):
        RbdGraph("Tree", (-2,))
    with pytest.raises(DomainError):
        RbdGraph.gamma(-1, 0, 0)
    assert str(RbdGraph.linear([-5, -2])) == "Linear[-5,-2]"
    assert str(RbdGraph.gamma(1, 2, 3)) == "Gamma(1,2,3)"
    assert RbdGraph.gamma(0, 0, 0).vertex_count == 4


def test_wahl_chains_bound_rational_balls():
    # p^2/(pq-1) is the fraction of a Wahl chain
    for chain in wahl_chains(6):
        value = cf_evaluate(chain)
        p2 = value.numerator
        p = round(p2 ** 0.5)
        assert p * p == p2
        assert (value.denominator + 1) % p == 0
        assert is_negative_definite(intersection_matrix(linear_graph([-c for c in chain])))


def test_dual_graph_round_trip():
    data = SeifertData(7, ((3, 1), (2, 1), (5, 2)))
    cap = build_cap(data)
    assert cap.dual_graph() == plumbing_graph(data)


def test_from_arms():
    cap = ConcaveCap.from_arms([(-2, -2), (-1,), (-3,)])
    assert cap.minus_one_arm_count == 1
    assert sorted(cap.arms()) == sorted([(-2, -2), (-1,), (-3,)])

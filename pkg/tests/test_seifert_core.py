from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plumbfill.errors import DomainError
from plumbfill.seifert_core import (
    PlumbingGraph,
    SeifertData,
    cf_dual,
    cf_evaluate,
    cf_expand,
    intersection_matrix,
    is_negative_definite,
    leading_minors,
    parse_seifert,
    plumbing_graph,
    seifert_from_arms,
)


def point_diagram_dual(entries):
    """Dual expansion read off the point diagram: row i holds b_i - 1 points,
    each row starting in the column where the previous one ended."""
    col = 0
    counts = {}
    for i, b in enumerate(entries):
        start = col if i else 0
        for c in range(start, start + b - 1):
            counts[c] = counts.get(c, 0) + 1
        col = start + b - 2
    return [counts[c] + 1 for c in sorted(counts)]


def fractions_up_to(limit):
    return st.integers(2, limit).flatmap(
        lambda a: st.tuples(st.just(a), st.sampled_from([b for b in range(1, a) if gcd(a, b) == 1]))
    )


fractions = fractions_up_to(200)


@pytest.mark.parametrize("alpha,beta,expected", [(2, 1, [2]), (7, 3, [3, 2, 2]), (5, 2, [3, 2])])
def test_cf_expand_examples(alpha, beta, expected):
    assert cf_expand(alpha, beta) == expected


@pytest.mark.parametrize("entries,value", [([2], Fraction(2)), ([3, 2, 2], Fraction(7, 3)), ([2, 2, 2], Fraction(4, 3))])
def test_cf_evaluate_examples(entries, value):
    assert cf_evaluate(entries) == value


@pytest.mark.parametrize("entries,dual", [([2], [2]), ([3], [2, 2]), ([2, 2, 2], [4])])
def test_cf_dual_examples(entries, dual):
    assert cf_dual(entries) == dual


@pytest.mark.parametrize("bad", [(1, 1), (4, 2), (3, 0), (3, 5)])
def test_cf_expand_rejects(bad):
    with pytest.raises(DomainError):
        cf_expand(*bad)


@pytest.mark.parametrize("bad", [[], [1], [3, 1]])
def test_cf_evaluate_rejects(bad):
    with pytest.raises(DomainError):
        cf_evaluate(bad)


@given(fractions)
def test_cf_round_trip(pair):
    alpha, beta = pair
    entries = cf_expand(alpha, beta)
    assert all(b >= 2 for b in entries)
    assert cf_evaluate(entries) == Fraction(alpha, beta)


@given(fractions)
def test_cf_dual_matches_point_diagram(pair):
    entries = cf_expand(*pair)
    dual = cf_dual(entries)
    assert dual == point_diagram_dual(entries)
    assert cf_dual(dual) == entries
    assert len(dual) == sum(entries) - 2 * len(entries) + 1


def test_point_diagram_oracle_small_cases():
    # hand-drawn diagrams
    assert point_diagram_dual([2]) == [2]
    assert point_diagram_dual([5]) == [2, 2, 2, 2]
    assert point_diagram_dual([3, 3]) == [2, 3, 2]


def test_plumbing_graph_examples():
    g = plumbing_graph(SeifertData(5, ((2, 1), (2, 1), (2, 1))))
    assert g.central_weight == -5 and g.arms == ((-2,), (-2,), (-2,))
    assert plumbing_graph(SeifertData(2, ((3, 1),))).arms == ((-3,),)
    assert plumbing_graph(SeifertData(6, ((7, 3),))).arms == ((-3, -2, -2),)


def test_intersection_matrix_examples():
    assert intersection_matrix(PlumbingGraph(-4)) == [[-4]]
    assert intersection_matrix(PlumbingGraph(-2, ((-3,),))) == [[-2, 1], [1, -3]]
    m = intersection_matrix(plumbing_graph(SeifertData(5, ((2, 1),) * 3)))
    assert [m[i][i] for i in range(4)] == [-5, -2, -2, -2]
    assert m[0] == [-5, 1, 1, 1]
    assert all(m[i][j] == 0 for i in range(1, 4) for j in range(1, 4) if i != j)


def test_is_negative_definite_examples():
    assert is_negative_definite([[-1]])
    assert is_negative_definite(intersection_matrix(plumbing_graph(SeifertData(2, ((3, 1),) * 3))))
    assert not is_negative_definite(intersection_matrix(plumbing_graph(SeifertData(1, ((2, 1), (2, 1))))))


def test_is_negative_definite_rejects_non_symmetric():
    with pytest.raises(DomainError):
        is_negative_definite([[-2, 1], [0, -2]])


def _det(m):
    # cofactor expansion, an independent check on the Bareiss minors
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=5, max_size=5))
def test_leading_minors_match_cofactor_expansion(rows):
    sym = [[rows[min(i, j)][max(i, j)] for j in range(5)] for i in range(5)]
    assert leading_minors(sym) == [_det([r[:k] for r in sym[:k]]) for k in range(1, 6)]


seifert = st.integers(1, 5).flatmap(
    lambda n: st.tuples(st.integers(1, 8), st.lists(fractions_up_to(20), min_size=n, max_size=n))
)


@given(seifert)
def test_definiteness_agrees_with_euler_number(case):
    b, pairs = case
    data = SeifertData(b, tuple(pairs))
    expected = b - sum(Fraction(beta, alpha) for alpha, beta in pairs) > 0
    assert is_negative_definite(intersection_matrix(plumbing_graph(data))) == expected


def test_seifert_validation():
    with pytest.raises(DomainError):
        SeifertData(5, ())
    with pytest.raises(DomainError):
        SeifertData(5, ((4, 2),))
    with pytest.raises(DomainError):
        SeifertData(0, ((2, 1),))


def test_parse_seifert():
    assert parse_seifert("Y(-5; 2/1, 2/1, 2/1)") == SeifertData(5, ((2, 1),) * 3)
    assert str(parse_seifert("Y(-7;3/1,2/1)")) == "Y(-7; 3/1, 2/1)"
    for bad in ("Y(5; 2/1)", "Y(-5; 2)", "X"):
        with pytest.raises(DomainError):
            parse_seifert(bad)


def test_seifert_from_arms_inverts_plumbing():
    data = SeifertData(6, ((2, 1), (7, 3), (7, 5)))
    g = plumbing_graph(data)
    assert seifert_from_arms(6, [[-w for w in arm] for arm in g.arms]) == data

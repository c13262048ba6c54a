import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpvcgen.branching import (
    HANDLED,
    SubgraphBranchingRule,
    adjusted,
    branching_factor,
    dominance_free,
    factor_of,
    generate_rule,
    is_dominated,
    minimal_branches,
    singleton_rule,
)
from dpvcgen.dpvc import initial_bad_list, is_bumpy
from dpvcgen.graphs import SmallGraph, bits, enumerate_connected_graphs, mask_of
from dpvcgen.oracle import find_path, verify_rule_correctness

P3 = SmallGraph.path(3)
P4 = SmallGraph.path(4)
K2 = SmallGraph.complete(2)
K3 = SmallGraph.complete(3)


def m(*vs):
    return mask_of(vs)


def residual(sizes, x):
    return abs(1 - sum(x ** -s for s in sizes))


@pytest.mark.parametrize(
    "sizes, want",
    [([1], 1.0), ([1, 1], 2.0), ([1, 2], (1 + math.sqrt(5)) / 2), ([2, 2, 2], math.sqrt(3))],
)
def test_branching_factor_examples(sizes, want):
    assert branching_factor(sizes) == pytest.approx(want, abs=1e-6)


def test_branching_factor_errors():
    with pytest.raises(ValueError):
        branching_factor([])
    with pytest.raises(ValueError):
        branching_factor([0, 1])


def test_equal_sizes_are_exact():
    assert branching_factor([1] * 4) == 4.0
    assert branching_factor([2] * 4) == 2.0


@given(st.lists(st.integers(1, 8), min_size=1, max_size=12))
@settings(max_examples=300, deadline=None)
def test_branching_factor_residual_and_monotonicity(sizes):
    x = branching_factor(sizes)
    assert x >= 1.0
    assert residual(sizes, x) < 1e-9
    assert branching_factor(sizes + [3]) > x
    grown = sorted(sizes)
    grown[0] += 1
    if len(sizes) > 1:
        assert branching_factor(grown) < x


def test_singleton_rule():
    r = singleton_rule(K2, 0, 2)
    assert r.branches == (m(0), m(1))
    assert r.factor == 2.0
    assert singleton_rule(P3, 0, 3).factor == 3.0
    for d in (3, 4, 5):
        for h in initial_bad_list(d):
            assert singleton_rule(h, 0, d).factor == d
    with pytest.raises(ValueError):
        singleton_rule(P3, 0, 4)


def test_rule_validation():
    with pytest.raises(ValueError):
        SubgraphBranchingRule(P3, 0, ())
    with pytest.raises(ValueError):
        SubgraphBranchingRule(P3, 0, (0,))
    with pytest.raises(ValueError):
        SubgraphBranchingRule(P3, 0, (m(3),))


def test_minimal_branches_examples():
    assert minimal_branches(K2, 2) == (m(0), m(1))
    assert minimal_branches(P3, 2) == (m(1), m(0, 2))
    assert minimal_branches(P3, 3) == (m(0), m(1), m(2))


def brute_minimal(h, d):
    adj = {v: set(bits(h.adj[v])) for v in range(h.n)}
    sols = [
        set(s)
        for k in range(h.n + 1)
        for s in itertools.combinations(range(h.n), k)
        if find_path(adj, d, set(s)) is None
    ]
    return {frozenset(s) for s in sols if not any(t < s for t in sols)}


SMALL = [(h, d) for n in range(2, 7) for h in enumerate_connected_graphs(n) for d in (2, 3, 4) if is_bumpy(h, d)]


@pytest.mark.parametrize("h, d", SMALL[::7])
def test_minimal_branches_match_hitting_set_enumeration(h, d):
    got = minimal_branches(h, d)
    assert {frozenset(bits(b)) for b in got} == brute_minimal(h, d)
    for a, b in itertools.combinations(got, 2):
        assert a & ~b and b & ~a


@pytest.mark.parametrize("seed", range(6))
def test_minimal_branches_on_eight_vertices(seed):
    import random

    rnd = random.Random(seed)
    pairs = list(itertools.combinations(range(8), 2))
    h = SmallGraph.from_edges(8, [(i, i + 1) for i in range(7)] + [p for p in pairs if rnd.random() < 0.25])
    for d in (3, 5):
        assert {frozenset(bits(b)) for b in minimal_branches(h, d)} == brute_minimal(h, d)


def test_domination_examples():
    # P_4 a-b-c-d with a red, d = 3
    a, b, c, dd = 0, 1, 2, 3
    branches = (m(b), m(c), m(a, dd))
    red = m(a)
    assert is_dominated(P4, red, branches, m(a, dd), m(b), 3)
    assert not any(is_dominated(P4, red, branches, m(b), x, 3) for x in (m(c), m(a, dd)))
    assert not is_dominated(P4, 0, branches, m(a, dd), m(b), 3)
    assert dominance_free(P4, red, branches, 3) == (m(b), m(c))
    assert dominance_free(P4, 0, branches, 3) == tuple(sorted(branches, key=lambda x: (x.bit_count(), x)))


def test_dominance_free_mutual_pair_keeps_one():
    branches = (m(0), m(1))
    assert is_dominated(K2, m(0, 1), branches, m(0), m(1), 2)
    assert is_dominated(K2, m(0, 1), branches, m(1), m(0), 2)
    assert dominance_free(K2, m(0, 1), branches, 2) == (m(0),)


def test_adjusted_examples():
    tri = (m(0, 1), m(0, 2), m(1, 2))
    assert factor_of(tri) == pytest.approx(math.sqrt(3))
    out = adjusted(tri)
    assert out == (m(0), m(1, 2))
    assert factor_of(out) == pytest.approx((1 + math.sqrt(5)) / 2)
    assert adjusted((m(2),)) == (m(2),)
    assert adjusted((m(1), m(0, 2))) == (m(1), m(0, 2))


def test_generate_rule_examples():
    r = generate_rule(K2, 0, 2)
    assert r.branches == (m(0), m(1)) and r.factor == 2.0
    assert generate_rule(P3, m(0, 2), 3) is HANDLED
    r = generate_rule(K3, 0, 2)
    assert r.branches == (m(0), m(1, 2))
    assert r.factor == pytest.approx(1.6180339887, abs=1e-9)


def test_generate_rule_is_deterministic():
    for h in initial_bad_list(4):
        for red in range(1 << h.n):
            a = generate_rule(h, red, 4)
            b = generate_rule(h, red, 4)
            assert a is b is HANDLED or a == b


def stage_rules(h, red, d):
    b_min = minimal_branches(h, d)
    b_df = dominance_free(h, red, b_min, d)
    b_adj = adjusted(b_df)
    return b_min, b_df, b_adj


STAGE_CASES = [
    (h, red, d)
    for d in (2, 3, 4)
    for h in initial_bad_list(d) + [g for g in enumerate_connected_graphs(d + 1) if is_bumpy(g, d)][:6]
    for red in range(1 << h.n)
    if generate_rule(h, red, d) is not HANDLED
]


@pytest.mark.parametrize("h, red, d", STAGE_CASES[::5])
def test_every_stage_is_correct(h, red, d):
    b_min, b_df, b_adj = stage_rules(h, red, d)
    assert set(b_df) <= set(b_min)
    assert factor_of(b_adj) <= factor_of(b_df) + 1e-12
    for i, branches in enumerate((b_min, b_df, b_adj)):
        rule = SubgraphBranchingRule(h, red, branches)
        report = verify_rule_correctness(rule, d, trials=15, seed=1000 + i, max_n=9)
        assert report.ok, report.to_text()

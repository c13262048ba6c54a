import random

import pytest

from dpvcgen.branching import TOL
from dpvcgen.dpvc import is_bumpy
from dpvcgen.genloop import GenerationFailed, RuleList, color, expand, generate_rule_list
from dpvcgen.graphs import SmallGraph, canonical_form, enumerate_connected_graphs, mask_of

from conftest import brute_induced, perm_key

K2 = SmallGraph.complete(2)
P3 = SmallGraph.path(3)
K3 = SmallGraph.complete(3)


def labels(gs):
    return {canonical_form(g) for g in gs}


def test_expand_examples():
    assert labels(expand([K2], [])) == labels([P3, K3])
    assert expand([P3, K3], [K2]) == []
    assert expand([], [K2]) == []


def brute_expand(bad, good):
    n = bad[0].n
    return {
        perm_key(g)
        for g in enumerate_connected_graphs(n + 1)
        if any(brute_induced(g, b) for b in bad) and not any(brute_induced(g, x) for x in good)
    }


def random_lists(seed, n):
    rnd = random.Random(seed)
    pool = enumerate_connected_graphs(n)
    bad = rnd.sample(pool, min(len(pool), rnd.randint(1, 4)))
    smaller = [g for k in range(2, n + 1) for g in enumerate_connected_graphs(k)]
    good = rnd.sample(smaller, min(len(smaller), rnd.randint(0, 3)))
    return bad, good


@pytest.mark.parametrize("seed", range(12))
def test_expand_matches_brute_force(seed):
    n = 2 + seed % 4
    bad, good = random_lists(seed, n)
    got = expand(bad, good)
    assert {perm_key(g) for g in got} == brute_expand(bad, good)
    assert len(labels(got)) == len(got)
    assert [g.sort_key() for g in got] == sorted(g.sort_key() for g in got)


def test_color_examples():
    for h in enumerate_connected_graphs(4):
        assert color(h, []) == 0
    assert color(P3, [K2]) == 0b111
    assert color(K3, [P3]) == 0


def brute_color(h, good):
    red = set()
    for v in range(h.n):
        masks = [m for m in range(1, 1 << h.n) if m >> v & 1]
        if all(any(brute_induced(h.add_vertex(m), x) for x in good) for m in masks):
            red.add(v)
    return mask_of(red)


@pytest.mark.parametrize("seed", range(15))
def test_color_matches_brute_force(seed):
    rnd = random.Random(100 + seed)
    n = rnd.randint(2, 5)
    h = rnd.choice(enumerate_connected_graphs(n))
    pool = [g for k in range(2, n + 1) for g in enumerate_connected_graphs(k)]
    good = rnd.sample(pool, min(len(pool), rnd.randint(1, 4)))
    assert color(h, good) == brute_color(h, good)


@pytest.mark.parametrize(
    "d, beta, count",
    [(2, 2.0, 1), (2, 1.619, 2), (3, 3.0, 2), (4, 4.0, 5)],
)
def test_generate_rule_list_counts(rule_lists, d, beta, count):
    rules, stats = rule_lists(d, beta)
    assert len(rules) == count
    assert rules.d == d and rules.beta == beta
    assert all(r.factor <= beta + TOL for r in rules)
    assert rules.psi == max(r.pattern.n for r in rules)
    assert all(is_bumpy(r.pattern, d) for r in rules)
    assert len(stats.acceptances) == count + stats.handled


def test_generate_two_pvc_walkthrough(rule_lists):
    rules, _ = rule_lists(2, 1.619)
    assert [canonical_form(r.pattern) for r in rules] == [canonical_form(P3), canonical_form(K3)]
    assert all(r.factor == pytest.approx(1.6180339887, abs=1e-9) for r in rules)


def test_generate_is_deterministic():
    a, _ = generate_rule_list(3, 2.5)
    b, _ = generate_rule_list(3, 2.5)
    assert a.rules == b.rules


def test_generate_reports_caps():
    with pytest.raises(GenerationFailed) as exc:
        generate_rule_list(2, 1.3, max_pattern=4)
    assert exc.value.bad
    assert all(g.n == 4 for g in exc.value.bad)
    assert "cap" in exc.value.reason
    with pytest.raises(GenerationFailed) as exc:
        generate_rule_list(4, 2.2, time_limit=0.0)
    assert "time" in exc.value.reason


def test_generate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        generate_rule_list(1, 2.0)
    with pytest.raises(ValueError):
        generate_rule_list(2, 0.5)


def test_rule_list_psi_requires_rules():
    with pytest.raises(ValueError):
        RuleList([], 2, 2.0).psi


def test_stats_row(rule_lists):
    rules, stats = rule_lists(2, 2.0)
    d, beta, count, seconds = stats.csv_row(len(rules)).split(",")
    assert (d, beta, count) == ("2", "2.0", "1")
    assert float(seconds) >= 0

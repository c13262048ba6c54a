import itertools
from functools import lru_cache

import numpy as np
import pytest

from dpvcgen.genloop import generate_rule_list
from dpvcgen.graphs import SmallGraph


def all_labelled_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield SmallGraph.from_edges(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


@lru_cache(maxsize=None)
def permutation_keys(n):
    """Min edge-mask over all vertex permutations, for every labelled graph on n vertices.

    Index i of the returned array is the graph whose edge set is bit i of
    itertools.combinations(range(n), 2).
    """
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    best = masks.copy()
    for perm in itertools.permutations(range(n)):
        img = np.zeros_like(masks)
        for i, (u, v) in enumerate(pairs):
            a, b = sorted((perm[u], perm[v]))
            img |= ((masks >> i) & 1) << index[(a, b)]
        np.minimum(best, img, out=best)
    return best


def perm_key(g):
    """Permutation oracle for a single graph."""
    best = None
    for perm in itertools.permutations(range(g.n)):
        key = tuple(sorted(tuple(sorted((perm[u], perm[v]))) for u, v in g.edges()))
        if best is None or key < best:
            best = key
    return (g.n, best)


def brute_connected(g):
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in range(g.n):
            if g.has_edge(v, u) and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def brute_induced(g, h):
    """Subset + permutation enumeration of induced copies of h in g."""
    for sub in itertools.combinations(range(g.n), h.n):
        for perm in itertools.permutations(sub):
            if all(g.has_edge(perm[u], perm[v]) == h.has_edge(u, v) for u, v in itertools.combinations(range(h.n), 2)):
                return True
    return False


def brute_longest_path(g):
    best = 1
    for k in range(2, g.n + 1):
        for perm in itertools.permutations(range(g.n), k):
            if all(g.has_edge(perm[i], perm[i + 1]) for i in range(k - 1)):
                best = k
                break
    return best


@pytest.fixture(scope="session")
def rule_lists():
    cache = {}

    def get(d, beta):
        if (d, beta) not in cache:
            cache[(d, beta)] = generate_rule_list(d, beta)
        return cache[(d, beta)]

    return get


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

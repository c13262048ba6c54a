"""Brute-force ground truth and the verification harness.

Nothing here reuses the solver's bumpiness code: paths are found by plain
recursive enumeration over adjacency sets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .branching import SubgraphBranchingRule
from .dpvc import HostGraph, Instance, red_component_reduction, red_star_reduction
from .genloop import RuleList
from .graphs import SmallGraph, bits, enumerate_connected_graphs, find_induced_embedding

log = logging.getLogger(__name__)

ORACLE_MAX_N = 15
EXHAUSTIVE_ENUM_BOUND = 9


def _adjacency(g: HostGraph) -> dict[int, set[int]]:
    return {v: set(ns) for v, ns in g.adj.items()}


def find_path(adj: dict[int, set[int]], d: int, removed: frozenset | set = frozenset()) -> list[int] | None:
    """Some simple path on ``d`` vertices avoiding ``removed``, or None."""
    path: list[int] = []
    on_path: set[int] = set()

    def extend(v: int) -> bool:
        path.append(v)
        on_path.add(v)
        if len(path) == d:
            return True
        for u in adj[v]:
            if u not in on_path and u not in removed and extend(u):
                return True
        path.pop()
        on_path.discard(v)
        return False

    for v in adj:
        if v not in removed and extend(v):
            return path
    return None


def opt_dpvc(g: HostGraph, d: int) -> int:
    """Minimum number of vertices whose deletion leaves no P_d (subset enumeration)."""
    if g.n > ORACLE_MAX_N:
        raise ValueError(f"oracle refuses graphs above {ORACLE_MAX_N} vertices")
    adj = _adjacency(g)
    verts = sorted(adj)
    for size in range(len(verts) + 1):
        for combo in combinations(verts, size):
            if find_path(adj, d, set(combo)) is None:
                return size
    return len(verts)


def opt_dpvc_branching(g: HostGraph, d: int) -> int:
    """Second oracle: branch on the vertices of any remaining P_d."""
    adj = _adjacency(g)

    memo: dict[frozenset, int] = {}

    def rec(removed: frozenset) -> int:
        if removed not in memo:
            p = find_path(adj, d, removed)
            memo[removed] = 0 if p is None else 1 + min(rec(removed | {v}) for v in p)
        return memo[removed]

    return rec(frozenset())


def random_connected_graph(n: int, edge_bias: float, seed: int) -> HostGraph:
    """Uniform random spanning tree (Pruefer code) plus each other edge with prob. ``edge_bias``."""
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= edge_bias <= 1.0:
        raise ValueError("edge_bias must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    edges: set[tuple[int, int]] = set()
    if n == 2:
        edges.add((0, 1))
    elif n > 2:
        code = [int(x) for x in rng.integers(0, n, size=n - 2)]
        degree = [1] * n
        for x in code:
            degree[x] += 1
        for x in code:
            leaf = min(v for v in range(n) if degree[v] == 1)
            edges.add((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
        u, w = [v for v in range(n) if degree[v] == 1]
        edges.add((u, w))
    for u in range(n):
        for w in range(u + 1, n):
            if (u, w) not in edges and rng.random() < edge_bias:
                edges.add((u, w))
    return HostGraph.from_edges(n, sorted(edges))


# -- reports ---------------------------------------------------------------


@dataclass
class Failure:
    what: str
    graph: HostGraph
    embedding: dict[int, int] | None = None
    expected: int | None = None
    actual: int | None = None

    def line(self) -> str:
        edges = ",".join(f"{u}-{v}" for u, v in self.graph.edges())
        parts = [f"FAIL {self.what}", f"n={self.graph.n}", f"edges={edges or '-'}"]
        if self.embedding is not None:
            parts.append("phi=" + ",".join(f"{a}:{b}" for a, b in sorted(self.embedding.items())))
        if self.expected is not None:
            parts.append(f"expected={self.expected}")
        if self.actual is not None:
            parts.append(f"actual={self.actual}")
        return " ".join(parts)


@dataclass
class VerificationReport:
    name: str
    checks: int = 0
    applications: int = 0
    seed: int | None = None
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: VerificationReport) -> None:
        self.checks += other.checks
        self.applications += other.applications
        self.failures.extend(other.failures)

    def to_text(self) -> str:
        head = f"{self.name}: checks={self.checks} applications={self.applications} failures={len(self.failures)}"
        if self.seed is not None:
            head += f" seed={self.seed}"
        return "\n".join([head] + [f.line() for f in self.failures])


# -- rule correctness --------------------------------------------------------


def planted_host(rule: SubgraphBranchingRule, rng: np.random.Generator, max_n: int) -> tuple[HostGraph, dict[int, int]]:
    """A random host with an induced copy of the pattern whose red images have no outside neighbours."""
    h = rule.pattern
    p = h.n
    extra = int(rng.integers(0, max_n - p + 1))
    n = p + extra
    labels = [int(x) for x in rng.permutation(n)]
    phi = {v: labels[v] for v in range(p)}
    edges = {(labels[u], labels[v]) for u, v in h.edges()}
    attach = [v for v in range(p) if not rule.red >> v & 1]
    density = float(rng.uniform(0.15, 0.6))
    for i in range(p, n):
        anchors = [labels[v] for v in attach] + [labels[j] for j in range(p, i)]
        if not anchors:
            continue
        first = anchors[int(rng.integers(0, len(anchors)))]
        edges.add((labels[i], first))
        for a in anchors:
            if a != first and rng.random() < density:
                edges.add((labels[i], a))
    return HostGraph.from_edges(n, [(min(e), max(e)) for e in edges]), phi


def verify_rule_correctness(
    rule: SubgraphBranchingRule, d: int, trials: int, seed: int, max_n: int = 11, tag: str = "rule"
) -> VerificationReport:
    """Check opt(G) == min over branches of |B| + opt(G - phi(B)) on planted hosts."""
    if trials < 1:
        raise ValueError("trials must be positive")
    report = VerificationReport(f"correctness[{tag}]", seed=seed)
    if rule.pattern.n > max_n:
        return report
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(trials):
        host, phi = planted_host(rule, rng, max_n)
        report.checks += 1
        report.applications += 1
        expected = opt_dpvc(host, d)
        best = None
        for b in rule.branches:
            chosen = [phi[v] for v in bits(b)]
            value = len(chosen) + opt_dpvc(host.remove(chosen), d)
            best = value if best is None else min(best, value)
        if best != expected:
            report.failures.append(Failure(f"rule={tag}", host, phi, expected, best))
    return report


# -- exhaustiveness ------------------------------------------------------------


def handmade_fires(g: HostGraph, d: int) -> bool:
    inst = Instance(g, g.n)
    return red_component_reduction(inst, d) is not None or red_star_reduction(inst, d) is not None


def _rule_applies(rule: SubgraphBranchingRule, g: SmallGraph) -> bool:
    return find_induced_embedding(g, rule.pattern, rule.red_vertices) is not None


def _bumpy_small(g: SmallGraph, d: int) -> bool:
    adj = {v: set(bits(g.adj[v])) for v in range(g.n)}
    return find_path(adj, d) is not None


def verify_exhaustive(
    rules: RuleList, d: int, bound: int = EXHAUSTIVE_ENUM_BOUND, psi: int | None = None
) -> VerificationReport:
    """Every connected bumpy graph on psi (and psi+1 within ``bound``) vertices
    escaping the handmade rules must be matched by some rule.

    ``psi`` overrides the list's own pattern bound, which lets a list that lost
    rules be checked against the size it was generated for.
    """
    if psi is None:
        if not rules.rules:
            raise ValueError("exhaustiveness is undefined for an empty rule list")
        psi = rules.psi
    sizes = [psi] + ([psi + 1] if psi + 1 <= bound else [])
    report = VerificationReport(f"exhaustive[d={d}, sizes={sizes}]")
    for size in sizes:
        for g in enumerate_connected_graphs(size, cap=max(bound, psi)):
            if not _bumpy_small(g, d):
                continue
            host = HostGraph.from_small(g)
            if handmade_fires(host, d):
                continue
            report.checks += 1
            if any(_rule_applies(r, g) for r in rules.rules):
                report.applications += 1
            else:
                report.failures.append(Failure("uncovered", host))
    return report

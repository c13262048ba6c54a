"""Construction of a single subgraph branching rule.

Branches are vertex bitmasks over the pattern graph.  A rule's branches are
kept sorted by (size, sorted vertices), which is also the tie-break order used
whenever a choice has to be made.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .dpvc import handled_red_component, handled_red_star
from .graphs import SmallGraph, bits, has_path, mask_of, path_masks

TOL = 1e-9


@lru_cache(maxsize=None)
def _bf_sorted(sizes: tuple[int, ...]) -> float:
    if len(sizes) == 1:
        return 1.0
    if sizes[0] == sizes[-1]:
        return float(len(sizes)) ** (1.0 / sizes[0])

    def f(x: float) -> float:
        return sum(x ** -s for s in sizes) - 1.0

    lo, hi = 1.0, max(2.0, 2.0 * len(sizes))
    while hi - lo > 1e-12 * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(3):
        fp = -sum(s * x ** (-s - 1) for s in sizes)
        step = f(x) / fp
        x -= step
        if abs(step) < 1e-15:
            break
    return x


def branching_factor(sizes: Iterable[int]) -> float:
    """Unique root x >= 1 of sum(x**-s for s in sizes) == 1."""
    key = tuple(sorted(sizes))
    if not key:
        raise ValueError("branching factor of an empty branch set")
    if key[0] < 1:
        raise ValueError("branch sizes must be positive")
    return _bf_sorted(key)


def branch_key(b: int) -> tuple[int, tuple[int, ...]]:
    return (b.bit_count(), tuple(bits(b)))


def sort_branches(branches: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(branches), key=branch_key))


def factor_of(branches: Iterable[int]) -> float:
    return branching_factor(b.bit_count() for b in branches)


@dataclass(frozen=True)
class SubgraphBranchingRule:
    pattern: SmallGraph
    red: int
    branches: tuple[int, ...]
    factor: float = field(init=False)

    def __post_init__(self):
        if not self.branches:
            raise ValueError("a rule needs at least one branch")
        full = self.pattern.full_mask
        for b in self.branches:
            if not b or b & ~full:
                raise ValueError(f"bad branch mask {b:b}")
        if self.red & ~full:
            raise ValueError("red set outside the pattern")
        object.__setattr__(self, "branches", sort_branches(self.branches))
        object.__setattr__(self, "factor", factor_of(self.branches))

    @property
    def red_vertices(self) -> list[int]:
        return list(bits(self.red))

    def branch_lists(self) -> list[list[int]]:
        return [list(bits(b)) for b in self.branches]


class _Handled:
    def __repr__(self) -> str:
        return "HANDLED"


HANDLED = _Handled()


def singleton_rule(h: SmallGraph, red: int, d: int) -> SubgraphBranchingRule:
    if not has_path(h.adj, d, h.full_mask):
        raise ValueError("pattern is not bumpy")
    return SubgraphBranchingRule(h, red, tuple(1 << v for v in range(h.n)))


def minimal_branches(h: SmallGraph, d: int) -> tuple[int, ...]:
    """Inclusion-minimal vertex sets whose removal leaves ``h`` P_d-free."""
    paths = path_masks(h.adj, d)
    if not paths:
        raise ValueError("pattern is not bumpy")
    n = h.n
    solution = [all(p & s for p in paths) for s in range(1 << n)]
    out = []
    for s in range(1, 1 << n):
        if solution[s] and not any(solution[s & ~(1 << v)] for v in bits(s)):
            out.append(s)
    return sort_branches(out)


class _DominationContext:
    """Per-rule tables over subsets of the red set shared by every domination query."""

    def __init__(self, h: SmallGraph, red: int, d: int):
        self.h = h
        self.red = red
        paths = path_masks(h.adj, d, red) if red else frozenset()
        self.subsets: list[tuple[int, int]] = []
        nbrs = {0: 0}
        for r in _submasks_increasing(red):
            low = r & -r
            nbrs[r] = nbrs[r & ~low] | h.adj[low.bit_length() - 1]
            if not any(p & ~r == 0 for p in paths):
                self.subsets.append((r, nbrs[r]))

    def targets(self, b: int) -> list[int]:
        """Masks T such that b is dominated by any other branch contained in T."""
        out = []
        for bdel in _proper_submasks_increasing(b):
            allowed = self.red & ~bdel
            for r, nb in self.subsets:
                if r & ~allowed:
                    continue
                inside = (r & b).bit_count()
                if not inside:
                    continue
                boundary = nb & ~r & ~bdel
                size = boundary.bit_count()
                if 1 <= size <= inside:
                    out.append((b | boundary) & ~r)
        return out


def _submasks_increasing(mask: int) -> list[int]:
    """Nonempty submasks ordered by size, then by sorted vertex list."""
    subs = []
    s = mask
    while s:
        subs.append(s)
        s = (s - 1) & mask
    return sorted(subs, key=branch_key)


def _proper_submasks_increasing(mask: int) -> list[int]:
    return [0] + [s for s in _submasks_increasing(mask) if s != mask]


def is_dominated(h: SmallGraph, red: int, branches: Sequence[int], b: int, bd: int, d: int) -> bool:
    """True iff branch ``b`` is dominated by branch ``bd`` within the rule."""
    if b == bd or not red:
        return False
    ctx = _DominationContext(h, red, d)
    return any(bd & ~t == 0 for t in ctx.targets(b))


def dominance_free(h: SmallGraph, red: int, branches: Sequence[int], d: int) -> tuple[int, ...]:
    """Keep one representative of every sink component of the domination digraph."""
    branches = sort_branches(branches)
    if not red:
        return branches
    ctx = _DominationContext(h, red, d)
    m = len(branches)
    out_edges = [0] * m
    for i, b in enumerate(branches):
        targets = ctx.targets(b)
        if not targets:
            continue
        for j, bd in enumerate(branches):
            if j != i and any(bd & ~t == 0 for t in targets):
                out_edges[i] |= 1 << j
    reach = list(out_edges)
    for k in range(m):
        for i in range(m):
            if reach[i] >> k & 1:
                reach[i] |= reach[k]
    comp_of = [-1] * m
    comps: list[list[int]] = []
    for i in range(m):
        if comp_of[i] >= 0:
            continue
        members = [i] + [j for j in range(i + 1, m) if reach[i] >> j & 1 and reach[j] >> i & 1]
        for j in members:
            comp_of[j] = len(comps)
        comps.append(members)
    kept = []
    for members in comps:
        cid = comp_of[members[0]]
        if all(comp_of[j] == cid for i in members for j in bits(out_edges[i])):
            kept.append(branches[members[0]])
    return sort_branches(kept)


def adjusted(branches: Sequence[int]) -> tuple[int, ...]:
    """Greedy replacement of supersets of a candidate A by A while the factor drops."""
    current = sort_branches(branches)
    current_bf = factor_of(current)
    while True:
        pool: set[int] = set()
        for b in current:
            pool.update(_submasks_increasing(b))
        best = None
        best_bf = current_bf
        for a in sorted(pool, key=branch_key):
            sizes = [b.bit_count() for b in current if a & ~b] + [a.bit_count()]
            bf = branching_factor(sizes)
            if bf < best_bf:
                best, best_bf = a, bf
        if best is None or not best_bf < current_bf - 1e-12:
            return current
        current = sort_branches([b for b in current if best & ~b] + [best])
        current_bf = best_bf


def is_handled(h: SmallGraph, red: int, d: int) -> bool:
    return handled_red_component(h, red, d) or handled_red_star(h, red, d)


def generate_rule(h: SmallGraph, red: int | Iterable[int], d: int):
    """Handled check, then Minimal, DominanceFree and Adjusted.

    Returns :data:`HANDLED` or a :class:`SubgraphBranchingRule`.
    """
    red = red if isinstance(red, int) else mask_of(red)
    if is_handled(h, red, d):
        return HANDLED
    b_min = minimal_branches(h, d)
    b_df = dominance_free(h, red, b_min, d)
    b_adj = adjusted(b_df)
    return SubgraphBranchingRule(h, red, b_adj)

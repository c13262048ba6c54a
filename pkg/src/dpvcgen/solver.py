"""Recursive d-PVC decision procedure driven by a generated rule list."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .dpvc import (
    HostGraph,
    Instance,
    is_bumpy,
    red_component_reduction,
    red_component_witness,
    red_star_reduction,
    red_star_witness,
)
from .genloop import RuleList
from .graphs import bits, components, has_path, induced_embedding_rows, mask_of, path_masks


class ExhaustivenessViolation(RuntimeError):
    """No listed rule applies to a large bumpy component."""

    def __init__(self, component: Sequence[int], graph: HostGraph):
        super().__init__(f"no rule applies to bumpy component {sorted(component)}")
        self.component = sorted(component)
        self.graph = graph


@dataclass
class SolveResult:
    answer: bool
    certificate: frozenset[int] | None = None

    def __str__(self) -> str:
        return "YES" if self.answer else "NO"


def brute_force_component(comp: HostGraph, d: int, limit: int | None = None) -> list[int]:
    """Smallest (then lexicographically first) set whose removal makes ``comp`` P_d-free."""
    ids, rows = comp.rows()
    if limit is not None and len(ids) > limit:
        raise ValueError(f"component of {len(ids)} vertices exceeds psi={limit}")
    paths = path_masks(rows, d)
    if not paths:
        return []
    for size in range(1, len(ids) + 1):
        for combo in combinations(range(len(ids)), size):
            s = mask_of(combo)
            if all(p & s for p in paths):
                return [ids[i] for i in combo]
    raise AssertionError("unreachable: the full vertex set is always a solution")


class Solver:
    """Runs the recursion for one rule list.

    ``trace`` receives ``(event, depth, k, info)`` tuples when set, where
    ``info["committed"]`` lists the vertices put into the solution along the
    current path.  Tests use it to check budget bookkeeping and which step
    produced each answer.
    """

    def __init__(self, rules: RuleList, d: int | None = None, trace=None):
        if d is not None and d != rules.d:
            raise ValueError(f"rule list built for d={rules.d}, asked for d={d}")
        self.rules = rules
        self.d = rules.d
        self.psi = rules.psi
        self.trace = trace

    def _emit(self, event: str, depth: int, k: int, committed: tuple, **info) -> None:
        if self.trace is not None:
            self.trace((event, depth, k, dict(info, committed=committed)))

    def solve(self, inst: Instance, want_certificate: bool = False) -> SolveResult:
        cert = self._rec(inst.graph, inst.k, 0, ())
        if cert is None:
            return SolveResult(False)
        return SolveResult(True, frozenset(cert) if want_certificate else None)

    def _rec(self, g: HostGraph, k: int, depth: int, committed: tuple) -> set[int] | None:
        d = self.d
        if k < 0:
            self._emit("negative", depth, k, committed)
            return None
        if not is_bumpy(g, d):
            self._emit("free", depth, k, committed)
            return set()
        if k == 0:
            self._emit("exhausted", depth, k, committed)
            return None

        inst = Instance(g, k)
        witness = red_component_witness(inst, d)
        if witness is not None:
            reduced = red_component_reduction(inst, d)
            v, c1, c2 = witness
            self._emit("red_component", depth, k, committed, removed=g.n - reduced.graph.n)
            taken = committed + (v,) if reduced.k < k else committed
            sub = self._rec(reduced.graph, reduced.k, depth + 1, taken)
            if sub is None:
                return None
            if reduced.k < k:
                return sub | {v}
            if self._is_solution(g, sub):
                return sub
            kept = c2 if c2[0] in reduced.graph.adj else c1
            return (sub - set(kept)) | {v}
        star = red_star_witness(inst, d)
        if star is not None:
            reduced = red_star_reduction(inst, d)
            self._emit("red_star", depth, k, committed)
            sub = self._rec(reduced.graph, k, depth + 1, committed)
            if sub is None:
                return None
            if self._is_solution(g, sub):
                return sub
            centre, leaves = star
            return (sub - set(leaves)) | set(centre)

        ids, rows = g.rows()
        big = None
        small: list[int] = []
        for cmask in components(rows, (1 << len(ids)) - 1):
            if not has_path(rows, d, cmask):
                continue
            if cmask.bit_count() > self.psi:
                big = [ids[i] for i in bits(cmask)]
                break
            small.append(cmask)
        if big is None:
            self._emit("brute_force", depth, k, committed, sizes=[c.bit_count() for c in small])
            total: set[int] = set()
            for cmask in small:
                total.update(brute_force_component(g.subgraph(ids[i] for i in bits(cmask)), d))
                if len(total) > k:
                    return None
            return total

        comp_graph = g.subgraph(big)
        cids, crows = comp_graph.rows()
        for idx, rule in enumerate(self.rules.rules):
            img = induced_embedding_rows(crows, rule.pattern, rule.red)
            if img is not None:
                break
        else:
            raise ExhaustivenessViolation(big, g)
        self._emit("branch", depth, k, committed, rule=idx, size=len(big))
        for b in rule.branches:
            chosen = [cids[img[v]] for v in bits(b)]
            sub = self._rec(g.remove(chosen), k - len(chosen), depth + 1, committed + tuple(chosen))
            if sub is not None:
                return sub | set(chosen)
        return None

    def _is_solution(self, g: HostGraph, s: set[int]) -> bool:
        return not is_bumpy(g.remove(s), self.d)


def solve(inst: Instance, d: int, rules: RuleList, want_certificate: bool = False) -> SolveResult:
    return Solver(rules, d).solve(inst, want_certificate)

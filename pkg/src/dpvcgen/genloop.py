"""Rule-list generation: Expand, Color and the good/bad list loop."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .branching import HANDLED, TOL, SubgraphBranchingRule, generate_rule
from .dpvc import initial_bad_list
from .graphs import DEFAULT_GEN_CAP, MAX_N, SizeCapError, SmallGraph, bits, canonical_graph, contains_induced

log = logging.getLogger(__name__)


@dataclass
class RuleList:
    rules: list[SubgraphBranchingRule]
    d: int
    beta: float

    @property
    def psi(self) -> int:
        if not self.rules:
            raise ValueError("psi is undefined for an empty rule list")
        return max(r.pattern.n for r in self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


@dataclass
class RunStats:
    d: int
    beta: float
    seconds: float = 0.0
    passes: int = 0
    expansions: int = 0
    generate_calls: int = 0
    handled: int = 0
    # (elapsed seconds, accepted graph size, emitted rule count) per acceptance
    acceptances: list[tuple[float, int, int]] = field(default_factory=list)

    def csv_row(self, rules: int) -> str:
        return f"{self.d},{self.beta!r},{rules},{self.seconds:.3f}"


class GenerationFailed(RuntimeError):
    """A size or time cap was hit while bad graphs remained."""

    def __init__(self, reason: str, bad: Sequence[SmallGraph], psi: int | None, stats: RunStats):
        super().__init__(f"{reason}; {len(bad)} bad graphs left, psi={psi}")
        self.reason = reason
        self.bad = list(bad)
        self.psi = psi
        self.stats = stats


class _Extensions:
    """Memo of one-vertex extensions and of which extensions contain a good graph.

    The good list only grows by appending, so coverage is tracked as
    (number of good graphs checked, found) and topped up on demand.
    """

    def __init__(self):
        self._ext: dict[bytes, list[SmallGraph]] = {}
        self._cover: dict[bytes, tuple[int, bool]] = {}

    def of(self, h: SmallGraph) -> list[SmallGraph]:
        """Canonical extension for every nonempty neighbourhood mask (index = mask - 1)."""
        exts = self._ext.get(h.label)
        if exts is None:
            if h.n + 1 > MAX_N:
                raise SizeCapError(f"cannot extend {h.n}-vertex graphs")
            exts = [canonical_graph(h.add_vertex(m)) for m in range(1, 1 << h.n)]
            self._ext[h.label] = exts
        return exts

    def covered(self, g: SmallGraph, good: Sequence[SmallGraph]) -> bool:
        upto, found = self._cover.get(g.label, (0, False))
        if found or upto == len(good):
            return found
        for i in range(upto, len(good)):
            if contains_induced(g, good[i]):
                self._cover[g.label] = (i + 1, True)
                return True
        self._cover[g.label] = (len(good), False)
        return False


def expand(bad: Iterable[SmallGraph], good: Sequence[SmallGraph], _memo: _Extensions | None = None) -> list[SmallGraph]:
    """One-vertex extensions of the bad graphs containing no good graph as induced subgraph."""
    memo = _memo or _Extensions()
    seen: dict[bytes, SmallGraph] = {}
    for h in bad:
        for g in memo.of(h):
            if g.label not in seen:
                seen[g.label] = g
    return sorted((g for g in seen.values() if not memo.covered(g, good)), key=SmallGraph.sort_key)


def color(h: SmallGraph, good: Sequence[SmallGraph], _memo: _Extensions | None = None) -> int:
    """Red mask: vertices all of whose extensions through them contain a good graph."""
    if not good:
        return 0
    memo = _memo or _Extensions()
    exts = memo.of(h)
    red = h.full_mask
    for m in range(1, 1 << h.n):
        if red & m and not memo.covered(exts[m - 1], good):
            red &= ~m
            if not red:
                break
    return red


def generate_rule_list(
    d: int,
    beta: float,
    max_pattern: int = DEFAULT_GEN_CAP,
    time_limit: float | None = None,
) -> tuple[RuleList, RunStats]:
    """Run the generator until the bad list empties.

    The initial d-vertex graphs get a full pass before the first expansion;
    afterwards the bad list is expanded only when a full pass accepts nothing.
    After every acceptance the pass restarts from the first bad graph.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if not beta >= 1:
        raise ValueError("beta must be at least 1")
    start = time.perf_counter()
    stats = RunStats(d, beta)
    memo = _Extensions()
    rule_cache: dict[tuple[bytes, int], object] = {}
    good: list[SmallGraph] = []
    rules: list[SubgraphBranchingRule] = []
    bad = initial_bad_list(d, max(max_pattern, d))

    def fail(reason: str):
        stats.seconds = time.perf_counter() - start
        psi = max((r.pattern.n for r in rules), default=None)
        raise GenerationFailed(reason, bad, psi, stats)

    while bad:
        stats.passes += 1
        accepted = None
        for h in bad:
            if time_limit is not None and time.perf_counter() - start > time_limit:
                fail(f"time limit of {time_limit}s reached")
            red = color(h, good, memo)
            key = (h.label, red)
            outcome = rule_cache.get(key)
            if outcome is None:
                stats.generate_calls += 1
                outcome = generate_rule(h, red, d)
                rule_cache[key] = outcome
            if outcome is HANDLED or outcome.factor <= beta + TOL:
                accepted = (h, outcome)
                break
        if accepted is not None:
            h, outcome = accepted
            good.append(h)
            bad = [g for g in bad if g.label != h.label]
            if outcome is HANDLED:
                stats.handled += 1
            else:
                rules.append(outcome)
            stats.acceptances.append((time.perf_counter() - start, h.n, len(rules)))
            continue
        size = bad[0].n + 1
        if size > max_pattern:
            fail(f"pattern size cap {max_pattern} reached")
        stats.expansions += 1
        bad = expand(bad, good, memo)
        log.info("expanded to %d graphs on %d vertices (%d rules so far)", len(bad), size, len(rules))
    stats.seconds = time.perf_counter() - start
    return RuleList(rules, d, beta), stats

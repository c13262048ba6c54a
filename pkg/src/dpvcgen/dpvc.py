"""d-Path Vertex Cover specifics: host graphs, bumpiness, handmade reductions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .graphs import (
    DEFAULT_GEN_CAP,
    SizeCapError,
    SmallGraph,
    bits,
    components,
    enumerate_connected_graphs,
    has_path,
    mask_of,
)


@dataclass(frozen=True)
class DpvcConfig:
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d must be at least 2, got {self.d}")

    @property
    def pattern(self) -> SmallGraph:
        return SmallGraph.path(self.d)


class HostGraph:
    """Instance graph with stable vertex ids; deletions return new graphs."""

    __slots__ = ("adj", "_rows")

    def __init__(self, adj: Mapping[int, Iterable[int]]):
        self.adj: dict[int, frozenset[int]] = {v: frozenset(ns) for v, ns in adj.items()}
        for v, ns in self.adj.items():
            if v in ns:
                raise ValueError(f"self-loop at {v}")
            for u in ns:
                if v not in self.adj.get(u, ()):
                    raise ValueError(f"asymmetric edge {v}-{u}")
        self._rows = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> HostGraph:
        adj: dict[int, set[int]] = {v: set() for v in range(n)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        return cls(adj)

    @classmethod
    def from_small(cls, g: SmallGraph) -> HostGraph:
        return cls({v: list(bits(g.adj[v])) for v in range(g.n)})

    @property
    def n(self) -> int:
        return len(self.adj)

    def vertices(self) -> list[int]:
        return sorted(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, ns in self.adj.items() for v in ns if u < v)

    def num_edges(self) -> int:
        return sum(len(ns) for ns in self.adj.values()) // 2

    def remove(self, vertices: Iterable[int]) -> HostGraph:
        gone = set(vertices)
        return HostGraph({v: ns - gone for v, ns in self.adj.items() if v not in gone})

    def subgraph(self, vertices: Iterable[int]) -> HostGraph:
        keep = set(vertices)
        return HostGraph({v: self.adj[v] & keep for v in keep})

    def rows(self) -> tuple[list[int], list[int]]:
        """Sorted vertex ids and matching neighbour bitmask rows over their positions."""
        if self._rows is None:
            ids = self.vertices()
            pos = {v: i for i, v in enumerate(ids)}
            rows = [mask_of(pos[u] for u in self.adj[v]) for v in ids]
            self._rows = (ids, rows)
        return self._rows

    def components(self) -> list[list[int]]:
        """Connected components as sorted id lists, ordered by smallest id."""
        ids, rows = self.rows()
        comps = components(rows, (1 << len(ids)) - 1)
        return [[ids[i] for i in bits(c)] for c in comps]

    def to_small(self) -> tuple[SmallGraph, list[int]]:
        ids, rows = self.rows()
        return SmallGraph(len(ids), rows), ids

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HostGraph) and self.adj == other.adj

    def __repr__(self) -> str:
        return f"HostGraph(n={self.n}, edges={self.edges()})"


@dataclass(frozen=True)
class Instance:
    graph: HostGraph
    k: int


def is_bumpy(g: HostGraph | SmallGraph, d: int) -> bool:
    """True iff ``g`` contains a path on ``d`` vertices as a subgraph."""
    if isinstance(g, SmallGraph):
        return has_path(g.adj, d, g.full_mask)
    ids, rows = g.rows()
    return has_path(rows, d, (1 << len(ids)) - 1)


def initial_bad_list(d: int, cap: int = DEFAULT_GEN_CAP) -> list[SmallGraph]:
    """Connected graphs on d vertices that contain P_d, in canonical order."""
    if d > cap:
        raise SizeCapError(f"d={d} exceeds size cap {cap}")
    return [g for g in enumerate_connected_graphs(d, cap) if is_bumpy(g, d)]


def _longest_path_from(rows, start: int, within: int) -> int:
    best = 0

    def dfs(v: int, used: int, length: int) -> None:
        nonlocal best
        best = max(best, length)
        for u in bits(rows[v] & within & ~used):
            dfs(u, used | 1 << u, length + 1)

    dfs(start, 1 << start, 1)
    return best


def _free_components_at(rows, v: int, alive: int, d: int) -> list[int]:
    """P_d-free components of (alive minus v) adjacent to v, ordered by smallest index."""
    out = []
    for comp in components(rows, alive & ~(1 << v)):
        if comp & rows[v] and not has_path(rows, d, comp):
            out.append(comp)
    return out


def _red_component_site(rows, d: int) -> tuple[int, int, int] | None:
    alive = (1 << len(rows)) - 1
    for v in range(len(rows)):
        if rows[v].bit_count() < 2:
            continue
        free = _free_components_at(rows, v, alive, d)
        if len(free) >= 2:
            return v, free[0], free[1]
    return None


def red_component_reduction(inst: Instance, d: int) -> Instance | None:
    """Apply the red component reduction at the first vertex where it fires.

    A vertex v qualifies when removing it leaves two P_d-free components C1, C2
    hanging off v (the two with smallest ids are used).  If v, C1 and C2
    together hold a P_d, v goes into the solution and all three are deleted;
    otherwise the component with the shorter longest path out of v is deleted.
    """
    ids, rows = inst.graph.rows()
    site = _red_component_site(rows, d)
    if site is None:
        return None
    v, c1, c2 = site
    block = c1 | c2 | 1 << v
    if has_path(rows, d, block):
        return Instance(inst.graph.remove(ids[i] for i in bits(block)), inst.k - 1)
    l1 = _longest_path_from(rows, v, c1 | 1 << v)
    l2 = _longest_path_from(rows, v, c2 | 1 << v)
    drop = c1 if l1 <= l2 else c2
    return Instance(inst.graph.remove(ids[i] for i in bits(drop)), inst.k)


def red_component_witness(inst: Instance, d: int) -> tuple[int, list[int], list[int]] | None:
    """The (v, C1, C2) triple the reduction would use, in host ids."""
    ids, rows = inst.graph.rows()
    site = _red_component_site(rows, d)
    if site is None:
        return None
    v, c1, c2 = site
    return ids[v], [ids[i] for i in bits(c1)], [ids[i] for i in bits(c2)]


def star_limit(d: int) -> int:
    return d // 2 - 1


def red_star_witness(inst: Instance, d: int) -> tuple[list[int], list[int]] | None:
    """(C, L) for the red star reduction: |C| <= floor(d/2)-1 and |L| >= 2|C|.

    Vertices are grouped by exact neighbourhood; the qualifying class with the
    smallest member id wins.  Empty C (isolated vertices) is not considered.
    """
    if d < 4:
        return None
    limit = star_limit(d)
    classes: dict[frozenset[int], list[int]] = {}
    for v in inst.graph.vertices():
        ns = inst.graph.adj[v]
        if 1 <= len(ns) <= limit:
            classes.setdefault(ns, []).append(v)
    best = None
    for ns, members in classes.items():
        if len(members) >= 2 * len(ns):
            if best is None or members[0] < best[1][0]:
                best = (sorted(ns), members)
    return best


def red_star_reduction(inst: Instance, d: int) -> Instance | None:
    """Delete the smallest-id leaf of a qualifying red star; k is unchanged."""
    found = red_star_witness(inst, d)
    if found is None:
        return None
    _, leaves = found
    return Instance(inst.graph.remove([leaves[0]]), inst.k)


def handled_red_component(h: SmallGraph, red: Iterable[int] | int, d: int) -> bool:
    """Some vertex of ``h`` has two P_d-free components, both entirely red, hanging off it."""
    red_mask = red if isinstance(red, int) else mask_of(red)
    if not red_mask:
        return False
    full = h.full_mask
    for v in range(h.n):
        count = 0
        for comp in components(h.adj, full & ~(1 << v)):
            if comp & ~red_mask == 0 and not has_path(h.adj, d, comp):
                count += 1
                if count == 2:
                    return True
    return False


def handled_red_star(h: SmallGraph, red: Iterable[int] | int, d: int) -> bool:
    """Red vertices sharing a neighbourhood C with |C| <= floor(d/2)-1 number at least 2|C|."""
    if d < 4:
        return False
    red_mask = red if isinstance(red, int) else mask_of(red)
    limit = star_limit(d)
    classes: dict[int, int] = {}
    for v in bits(red_mask):
        ns = h.adj[v]
        if 1 <= ns.bit_count() <= limit:
            classes[ns] = classes.get(ns, 0) + 1
    return any(cnt >= 2 * ns.bit_count() for ns, cnt in classes.items())

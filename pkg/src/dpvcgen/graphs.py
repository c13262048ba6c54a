"""Small-graph substrate.

Graphs on at most ``MAX_N`` vertices are stored as a tuple of neighbour
bitmasks.  Canonical labels come from an individualisation-refinement search
that takes the lexicographically smallest relabelled adjacency over all leaves
of the search tree.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_N = 16
DEFAULT_GEN_CAP = 13


class SizeCapError(ValueError):
    """Raised when a graph operation would exceed the vertex cap."""


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


class SmallGraph:
    __slots__ = ("n", "adj", "_label", "_hash")

    def __init__(self, n: int, adj: Sequence[int]):
        if not 1 <= n <= MAX_N:
            raise SizeCapError(f"vertex count {n} outside 1..{MAX_N}")
        adj = tuple(adj)
        if len(adj) != n:
            raise ValueError("adjacency length does not match n")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full or row >> v & 1:
                raise ValueError(f"bad adjacency row for vertex {v}")
            for u in bits(row):
                if not adj[u] >> v & 1:
                    raise ValueError(f"asymmetric edge {v}-{u}")
        self.n = n
        self.adj = adj
        self._label: bytes | None = None
        self._hash: int | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> SmallGraph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def path(cls, n: int) -> SmallGraph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> SmallGraph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n: int) -> SmallGraph:
        return cls.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])

    @classmethod
    def star(cls, leaves: int) -> SmallGraph:
        return cls.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u]) if u < v]

    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbours(self, mask: int) -> int:
        """Union of the neighbourhoods of the vertices in ``mask``."""
        out = 0
        for v in bits(mask):
            out |= self.adj[v]
        return out

    def induced(self, mask: int) -> SmallGraph:
        """The subgraph induced by ``mask``, relabelled to 0..k-1 in id order."""
        keep = list(bits(mask))
        pos = {v: i for i, v in enumerate(keep)}
        rows = []
        for v in keep:
            rows.append(mask_of(pos[u] for u in bits(self.adj[v] & mask)))
        return SmallGraph(len(keep), rows)

    def relabel(self, order: Sequence[int]) -> SmallGraph:
        """Graph whose vertex i is old vertex ``order[i]``."""
        pos = [0] * self.n
        for i, v in enumerate(order):
            pos[v] = i
        rows = [0] * self.n
        for i, v in enumerate(order):
            r = 0
            for u in bits(self.adj[v]):
                r |= 1 << pos[u]
            rows[i] = r
        return SmallGraph(self.n, rows)

    def add_vertex(self, nbr_mask: int) -> SmallGraph:
        """Add vertex ``n`` adjacent to ``nbr_mask``."""
        n = self.n
        if n + 1 > MAX_N:
            raise SizeCapError(f"cannot extend a {n}-vertex graph past {MAX_N}")
        rows = [row | (1 << n if nbr_mask >> v & 1 else 0) for v, row in enumerate(self.adj)]
        rows.append(nbr_mask)
        return SmallGraph(n + 1, rows)

    @property
    def label(self) -> bytes:
        if self._label is None:
            self._label = canonical_form(self)
        return self._label

    def sort_key(self) -> tuple[int, bytes]:
        return (self.n, self.label)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SmallGraph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"SmallGraph({self.n}, edges={self.edges()})"


# -- canonical labelling ---------------------------------------------------


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Refine an ordered partition until it is equitable.

    Cells are split by each vertex's neighbour counts into every cell; the
    split pieces keep the order of their signatures, so the result depends only
    on the isomorphism type of (graph, partition).
    """
    while True:
        masks = [mask_of(c) for c in cells]
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((adj[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(cell)
                continue
            changed = True
            for sig in sorted(groups):
                out.append(groups[sig])
        cells = out
        if not changed:
            return cells


def _twin_reps(adj: Sequence[int], cell: list[int]) -> list[int]:
    """One vertex per twin class inside ``cell``.

    Swapping two twins (equal open or closed neighbourhoods) is an automorphism
    fixing every other vertex, so their search subtrees give the same leaves.
    """
    reps: list[int] = []
    seen: list[tuple[int, int]] = []
    for v in cell:
        open_n = adj[v]
        dup = False
        for u, u_open in seen:
            if u_open & ~(1 << v) == open_n & ~(1 << u):
                dup = True
                break
        if not dup:
            reps.append(v)
            seen.append((v, open_n))
    return reps


def _code(adj: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    pos = [0] * len(adj)
    for i, v in enumerate(order):
        pos[v] = i
    out = []
    for v in order:
        r = 0
        for u in bits(adj[v]):
            r |= 1 << pos[u]
        out.append(r)
    return tuple(out)


def canonical_order(g: SmallGraph) -> list[int]:
    """A vertex order whose relabelling is the canonical representative."""
    adj = g.adj
    best: list[tuple[tuple[int, ...], list[int]]] = []

    def search(cells: list[list[int]]) -> None:
        cells = _refine(adj, cells)
        target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if target is None:
            order = [c[0] for c in cells]
            code = _code(adj, order)
            if not best or code < best[0][0]:
                best[:] = [(code, order)]
            return
        cell = cells[target]
        for v in _twin_reps(adj, cell):
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search([list(range(g.n))])
    return best[0][1]


def _encode(n: int, code: Sequence[int]) -> bytes:
    return bytes([n]) + b"".join(r.to_bytes(2, "little") for r in code)


def canonical_form(g: SmallGraph) -> bytes:
    """Label bytes equal for two graphs iff they are isomorphic."""
    return _encode(g.n, _code(g.adj, canonical_order(g)))


def canonical_graph(g: SmallGraph) -> SmallGraph:
    c = g.relabel(canonical_order(g))
    c._label = _encode(c.n, c.adj)
    return c


# -- basic queries -----------------------------------------------------------


def components(adj: Sequence[int], mask: int) -> list[int]:
    """Connected components of the subgraph induced by ``mask``, as masks."""
    out = []
    while mask:
        seed = mask & -mask
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        mask &= ~comp
    return out


def is_connected(g: SmallGraph) -> bool:
    return len(components(g.adj, g.full_mask)) == 1


def longest_path_vertices(g: SmallGraph) -> int:
    """Number of vertices on a longest simple path."""
    adj = g.adj
    n = g.n
    best = 0

    def dfs(v: int, used: int, length: int) -> bool:
        nonlocal best
        if length > best:
            best = length
            if best == n:
                return True
        for u in bits(adj[v] & ~used):
            if dfs(u, used | 1 << u, length + 1):
                return True
        return False

    for v in range(n):
        if dfs(v, 1 << v, 1):
            break
    return best


def path_masks(adj: Sequence[int], d: int, within: int | None = None) -> frozenset[int]:
    """Vertex sets of all simple paths on ``d`` vertices (restricted to ``within``)."""
    n = len(adj)
    if within is None:
        within = (1 << n) - 1
    states = {(1 << v, v) for v in bits(within)}
    for _ in range(d - 1):
        nxt = set()
        for used, v in states:
            for u in bits(adj[v] & within & ~used):
                nxt.add((used | 1 << u, u))
        states = nxt
        if not states:
            return frozenset()
    return frozenset(used for used, _ in states)


def has_path(adj: Sequence[int], d: int, within: int) -> bool:
    """True iff the subgraph induced by ``within`` contains a path on d vertices."""
    if within.bit_count() < d:
        return False
    if d <= 1:
        return bool(within)

    def dfs(v: int, used: int, length: int) -> bool:
        if length == d:
            return True
        for u in bits(adj[v] & within & ~used):
            if dfs(u, used | 1 << u, length + 1):
                return True
        return False

    return any(dfs(v, 1 << v, 1) for v in bits(within))


# -- enumeration ---------------------------------------------------------------


def one_vertex_extensions(h: SmallGraph) -> list[SmallGraph]:
    """Canonical representatives of the connected one-vertex extensions of ``h``."""
    if h.n + 1 > MAX_N:
        raise SizeCapError(f"extension of a {h.n}-vertex graph exceeds {MAX_N}")
    seen: dict[bytes, SmallGraph] = {}
    for nbrs in range(1, 1 << h.n):
        c = canonical_graph(h.add_vertex(nbrs))
        seen.setdefault(c.label, c)
    return sorted(seen.values(), key=SmallGraph.sort_key)


@lru_cache(maxsize=None)
def _connected_graphs(n: int) -> tuple[SmallGraph, ...]:
    if n == 1:
        return (canonical_graph(SmallGraph(1, [0])),)
    seen: dict[bytes, SmallGraph] = {}
    for h in _connected_graphs(n - 1):
        for nbrs in range(1, 1 << h.n):
            c = canonical_graph(h.add_vertex(nbrs))
            seen.setdefault(c.label, c)
    return tuple(sorted(seen.values(), key=SmallGraph.sort_key))


def enumerate_connected_graphs(n: int, cap: int = DEFAULT_GEN_CAP) -> list[SmallGraph]:
    """One canonical representative per connected graph on ``n`` vertices."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > min(cap, MAX_N):
        raise SizeCapError(f"n={n} exceeds enumeration cap {min(cap, MAX_N)}")
    return list(_connected_graphs(n))


# -- induced embeddings ----------------------------------------------------------


def _pattern_plan(h: SmallGraph) -> list[tuple[int, int, int, int]]:
    """Search order over pattern vertices: BFS so each vertex has a mapped parent.

    Entries are (vertex, parent or -1, earlier-neighbour mask, earlier mask)
    in terms of positions in the plan.
    """
    order: list[int] = []
    placed = 0
    for start in range(h.n):
        if placed >> start & 1:
            continue
        queue = [start]
        placed |= 1 << start
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in bits(h.adj[v] & ~placed):
                placed |= 1 << u
                queue.append(u)
    pos = {v: i for i, v in enumerate(order)}
    plan = []
    for i, v in enumerate(order):
        earlier_nbrs = 0
        parent = -1
        for u in bits(h.adj[v]):
            j = pos[u]
            if j < i:
                earlier_nbrs |= 1 << j
                if parent < 0 or j < parent:
                    parent = j
        plan.append((v, parent, earlier_nbrs, (1 << i) - 1))
    return plan


def induced_embedding_rows(
    host: Sequence[int], h: SmallGraph, red: int = 0, within: int | None = None
) -> tuple[int, ...] | None:
    """First induced embedding of ``h`` into a host given by bitmask rows.

    Returns ``img`` with ``img[v]`` the host index of pattern vertex ``v``.  A
    red pattern vertex must have no host neighbours outside the image, which
    for an induced copy means equal degrees.  Candidates are tried in
    increasing host index, so the result is deterministic.
    """
    hn = len(host)
    if within is None:
        within = (1 << hn) - 1
    if h.n > within.bit_count():
        return None
    plan = _pattern_plan(h)
    pdeg = [h.adj[v].bit_count() for v, _, _, _ in plan]
    is_red = [bool(red >> v & 1) for v, _, _, _ in plan]
    hdeg = {}
    for x in bits(within):
        hdeg[x] = (host[x] & within).bit_count()
    img = [0] * h.n
    k = h.n

    def rec(i: int, used: int) -> bool:
        if i == k:
            return True
        _, parent, enbrs, earlier = plan[i]
        cand = (host[img[parent]] if parent >= 0 else within) & within & ~used
        need = 0
        for j in bits(enbrs):
            need |= 1 << img[j]
        avoid = 0
        for j in bits(earlier & ~enbrs):
            avoid |= 1 << img[j]
        want = pdeg[i]
        red_i = is_red[i]
        for c in bits(cand):
            dc = hdeg[c]
            if dc < want or (red_i and dc != want):
                continue
            row = host[c]
            if row & need != need or row & avoid:
                continue
            img[i] = c
            if rec(i + 1, used | 1 << c):
                return True
        return False

    if not rec(0, 0):
        return None
    out = [0] * h.n
    for i, (v, _, _, _) in enumerate(plan):
        out[v] = img[i]
    return tuple(out)


def contains_induced(g: SmallGraph, h: SmallGraph) -> bool:
    """True iff some vertex subset of ``g`` induces a copy of ``h``."""
    if h.n > g.n or h.num_edges() > g.num_edges():
        return False
    return induced_embedding_rows(g.adj, h) is not None


def find_induced_embedding(host, h: SmallGraph, red: Iterable[int] = ()) -> dict[int, int] | None:
    """Embed pattern ``h`` into ``host`` as an induced copy respecting red vertices.

    ``host`` is a :class:`SmallGraph` or any object with a ``rows()`` method
    returning ``(vertex ids, bitmask rows)``, such as a host graph.  Returns a
    mapping from pattern vertex to host vertex id, or ``None``.
    """
    red_mask = mask_of(red)
    if isinstance(host, SmallGraph):
        ids: Sequence[int] = range(host.n)
        rows: Sequence[int] = host.adj
    else:
        ids, rows = host.rows()
    img = induced_embedding_rows(rows, h, red_mask)
    if img is None:
        return None
    return {v: ids[x] for v, x in enumerate(img)}

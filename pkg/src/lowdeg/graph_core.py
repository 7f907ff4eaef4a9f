"""Labeled graphs with a declared vertex support, plus the combinatorial
machinery the rest of the package leans on: edge-induced operations,
isomorphism and automorphism counting via backtracking canonical labeling,
cycle and path decompositions of edge differences, independent-cycle
censuses, and unlabeled rooted-tree counting with a growth-rate estimate.

Graphs here are desk-scale (enumeration budgets around 16 vertices); the
canonical labeling is homegrown backtracking with color refinement, not a
general-purpose tool.  All values are immutable and all functions are pure,
so everything is safe to share across threads.  The canonical-form memo
table is process-wide with concurrent reads and serialized writes.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional

CANONICAL_VERTEX_BUDGET = 16
AUTOMORPHISM_VERTEX_BUDGET = 10
_SEARCH_NODE_BUDGET = 2_000_000


class EnumerationBudgetError(ValueError):
    """Raised when an operation would exceed its desk-scale search budget."""


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LabeledGraph:
    """A graph on ambient vertex set [n] with an explicit declared support.

    ``vertices`` is the declared support: isolated vertices are
    representable by declaring them without incident edges.  Every derived
    quantity (excess, leaves, cycles, ...) is a pure function of
    (n_vertices, edges, vertices).
    """

    n_vertices: int
    edges: frozenset[tuple[int, int]]
    vertices: frozenset[int]

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("ambient vertex count must be positive")
        for u, v in self.edges:
            if not (0 <= u < v < self.n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range or unnormalized")
            if u not in self.vertices or v not in self.vertices:
                raise ValueError(f"edge ({u},{v}) endpoint outside declared vertices")
        for v in self.vertices:
            if not 0 <= v < self.n_vertices:
                raise ValueError(f"vertex {v} out of ambient range")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def __contains__(self, edge: tuple[int, int]) -> bool:
        return _norm_edge(*edge) in self.edges

    def __le__(self, other: "LabeledGraph") -> bool:
        return is_subgraph(self, other)


def graph(n: int, edges: Iterable[tuple[int, int]] = (), vertices: Iterable[int] | None = None) -> LabeledGraph:
    """Build a LabeledGraph; the declared support defaults to the edge endpoints."""
    es = frozenset(_norm_edge(u, v) for u, v in edges)
    if vertices is None:
        vs = frozenset(v for e in es for v in e)
    else:
        vs = frozenset(vertices) | frozenset(v for e in es for v in e)
    return LabeledGraph(n, es, vs)


def empty_graph(n: int) -> LabeledGraph:
    return graph(n)


def complete_graph(n: int) -> LabeledGraph:
    return graph(n, itertools.combinations(range(n), 2), range(n))


def cycle_graph(n: int, length: int | None = None, offset: int = 0) -> LabeledGraph:
    m = length if length is not None else n
    verts = [offset + i for i in range(m)]
    return graph(n, [(verts[i], verts[(i + 1) % m]) for i in range(m)])


def path_graph(n: int, length: int, offset: int = 0) -> LabeledGraph:
    return graph(n, [(offset + i, offset + i + 1) for i in range(length)])


def relabel(g: LabeledGraph, perm: dict[int, int] | list[int]) -> LabeledGraph:
    """Apply a vertex bijection of the ambient set."""
    if isinstance(perm, list):
        perm = {i: p for i, p in enumerate(perm)}
    return graph(
        g.n_vertices,
        [(perm[u], perm[v]) for u, v in g.edges],
        [perm[v] for v in g.vertices],
    )


# -- elementary derived quantities ------------------------------------------


def excess(g: LabeledGraph) -> int:
    """Edge count minus declared vertex count."""
    return len(g.edges) - len(g.vertices)


def support(g: LabeledGraph) -> frozenset[int]:
    """Vertices with at least one incident edge."""
    return frozenset(v for e in g.edges for v in e)


def isolated_vertices(g: LabeledGraph) -> frozenset[int]:
    return g.vertices - support(g)


def leaves(g: LabeledGraph) -> frozenset[int]:
    """Declared vertices of degree exactly one."""
    deg: dict[int, int] = {}
    for u, v in g.edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return frozenset(v for v, d in deg.items() if d == 1)


def is_subgraph(h: LabeledGraph, g: LabeledGraph) -> bool:
    return h.n_vertices == g.n_vertices and h.vertices <= g.vertices and h.edges <= g.edges


def is_contained_no_isolated(h: LabeledGraph, g: LabeledGraph) -> bool:
    """Subgraph containment with h having no isolated vertices."""
    return is_subgraph(h, g) and not isolated_vertices(h)


def is_anchored_subgraph(h: LabeledGraph, g: LabeledGraph) -> bool:
    """Subgraph containment where every isolated vertex of g is isolated in h."""
    return is_subgraph(h, g) and isolated_vertices(g) <= isolated_vertices(h)


def edge_induced(n: int, edges: Iterable[tuple[int, int]]) -> LabeledGraph:
    return graph(n, edges)


def edge_induced_ops(s: LabeledGraph, t: LabeledGraph) -> tuple[LabeledGraph, LabeledGraph, LabeledGraph]:
    """Edge-induced intersection, union and symmetric difference (no isolated vertices)."""
    if s.n_vertices != t.n_vertices:
        raise ValueError("graphs live on different ambient vertex sets")
    n = s.n_vertices
    cap = edge_induced(n, s.edges & t.edges)
    cup = edge_induced(n, s.edges | t.edges)
    symdiff = edge_induced(n, s.edges ^ t.edges)
    return cap, cup, symdiff


def graph_union(s: LabeledGraph, t: LabeledGraph) -> LabeledGraph:
    """Vertex-and-edge union (declared vertices are kept)."""
    if s.n_vertices != t.n_vertices:
        raise ValueError("graphs live on different ambient vertex sets")
    return graph(s.n_vertices, s.edges | t.edges, s.vertices | t.vertices)


def connected_components(g: LabeledGraph) -> list[frozenset[int]]:
    """Components of the declared support, isolated vertices as singletons."""
    adj: dict[int, set[int]] = {v: set() for v in g.vertices}
    for u, v in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    seen: set[int] = set()
    comps = []
    for v in sorted(g.vertices):
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


# -- cycles -------------------------------------------------------------------


def all_cycles(g: LabeledGraph, max_len: int | None = None) -> list[tuple[int, ...]]:
    """All simple cycles, each reported once as a vertex tuple starting at
    its smallest vertex with the smaller neighbor second."""
    adj: dict[int, list[int]] = {v: [] for v in g.vertices}
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    cap = max_len if max_len is not None else len(g.vertices)
    out: list[tuple[int, ...]] = []

    def extend(start: int, path: list[int], on_path: set[int]):
        last = path[-1]
        for w in adj[last]:
            if w == start and len(path) >= 3:
                if path[1] < path[-1]:  # orientation dedupe
                    out.append(tuple(path))
            elif w > start and w not in on_path and len(path) < cap:
                path.append(w)
                on_path.add(w)
                extend(start, path, on_path)
                on_path.remove(w)
                path.pop()

    for v in sorted(adj):
        extend(v, [v], {v})
    return out


def has_cycle_at_most(g: LabeledGraph, max_len: int) -> bool:
    return bool(all_cycles(g, max_len))


def cycle_components(g: LabeledGraph) -> list[LabeledGraph]:
    """Connected components of g that are exactly cycles.

    These are precisely the independent cycles: no edge outside the cycle
    touches its vertex set.
    """
    out = []
    for comp in connected_components(g):
        comp_edges = [e for e in g.edges if e[0] in comp]
        if len(comp) >= 3 and len(comp_edges) == len(comp):
            sub = graph(g.n_vertices, comp_edges)
            if all(sub.degree(v) == 2 for v in comp):
                out.append(sub)
    return out


def independent_cycle_census(s: LabeledGraph, h: LabeledGraph) -> dict[int, int]:
    """Count independent m-cycles of s whose vertex set avoids the declared
    vertices of h, keyed by length m."""
    if not is_subgraph(h, s):
        raise ValueError("h is not a subgraph of s")
    census: dict[int, int] = {}
    for c in cycle_components(s):
        if support(c) & h.vertices:
            continue
        m = len(c.edges)
        census[m] = census.get(m, 0) + 1
    return census


def independent_cycle_count(s: LabeledGraph, h: LabeledGraph) -> int:
    return sum(independent_cycle_census(s, h).values())


# -- canonical forms and automorphisms ---------------------------------------


@dataclass(frozen=True)
class CanonicalGraph:
    """An isomorphism class: canonical byte string plus basic counts."""

    canonical_form: bytes
    n_vertices: int
    n_edges: int
    aut_count: int

    @property
    def hex_form(self) -> str:
        return self.canonical_form.hex()


def _refine_colors(nbr: list[int], m: int) -> list[int]:
    colors = [bin(nbr[v]).count("1") for v in range(m)]
    while True:
        keys = [
            (colors[v], tuple(sorted(colors[u] for u in range(m) if nbr[v] >> u & 1)))
            for v in range(m)
        ]
        order = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [order[k] for k in keys]
        if new == colors:
            return colors
        colors = new


def _canonical_core(nbr: list[int], m: int) -> tuple[tuple[int, ...], int]:
    """Minimal adjacency encoding over color-consistent orders, plus the
    number of orders attaining it (= automorphism count of the core)."""
    if m == 0:
        return (), 1
    colors = _refine_colors(nbr, m)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    cell_order = [cells[c] for c in sorted(cells)]

    best: list[int] | None = None
    best_count = 0
    nodes = 0

    def rec(pos: int, placed: list[int], placed_mask: int, rows: list[int]):
        nonlocal best, best_count, nodes
        nodes += 1
        if nodes > _SEARCH_NODE_BUDGET:
            raise EnumerationBudgetError("canonical labeling search budget exceeded")
        if pos == m:
            if best is None or rows < best:
                best, best_count = rows[:], 1
            elif rows == best:
                best_count += 1
            return
        for cell in cell_order:
            cands = [v for v in cell if not placed_mask >> v & 1]
            if cands:
                break
        for v in cands:
            row = 0
            for j, u in enumerate(placed):
                if nbr[v] >> u & 1:
                    row |= 1 << j
            rows.append(row)
            if best is None or rows <= best[: len(rows)]:
                placed.append(v)
                rec(pos + 1, placed, placed_mask | 1 << v, rows)
                placed.pop()
            rows.pop()

    rec(0, [], 0, [])
    assert best is not None
    return tuple(best), best_count


_canon_memo: dict[tuple, tuple[CanonicalGraph, int]] = {}
_canon_lock = threading.Lock()


def _canonical_with_core_aut(g: LabeledGraph) -> tuple[CanonicalGraph, int]:
    core = sorted(support(g))
    if len(core) > CANONICAL_VERTEX_BUDGET:
        raise EnumerationBudgetError(
            f"{len(core)} non-isolated vertices exceeds the canonical budget {CANONICAL_VERTEX_BUDGET}"
        )
    iso = len(g.vertices) - len(core)
    index = {v: i for i, v in enumerate(core)}
    m = len(core)
    nbr = [0] * m
    for u, v in g.edges:
        nbr[index[u]] |= 1 << index[v]
        nbr[index[v]] |= 1 << index[u]
    key = (tuple(nbr), m, iso)
    hit = _canon_memo.get(key)
    if hit is not None:
        return hit
    rows, core_aut = _canonical_core(nbr, m)
    header = f"{len(g.vertices)},{m},{len(g.edges)}:".encode()
    body = b"".join(r.to_bytes((m + 7) // 8, "big") for r in rows)
    cg = CanonicalGraph(header + body, len(g.vertices), len(g.edges),
                        core_aut * math.factorial(iso))
    with _canon_lock:
        _canon_memo[key] = (cg, core_aut)
    return cg, core_aut


def canonicalize(g: LabeledGraph) -> CanonicalGraph:
    """Canonical form of the isomorphism class of g (declared vertices count)."""
    return _canonical_with_core_aut(g)[0]


def are_isomorphic(a: LabeledGraph, b: LabeledGraph) -> bool:
    return canonicalize(a).canonical_form == canonicalize(b).canonical_form


def automorphism_count(g: LabeledGraph) -> int:
    """Number of vertex bijections of the declared set preserving the edge set.

    Isolated vertices contribute a factorial factor.
    """
    core = support(g)
    if len(core) > AUTOMORPHISM_VERTEX_BUDGET:
        raise EnumerationBudgetError(
            f"{len(core)} non-isolated vertices exceeds the automorphism budget {AUTOMORPHISM_VERTEX_BUDGET}"
        )
    return _canonical_with_core_aut(g)[1] * math.factorial(len(isolated_vertices(g)))


def count_embeddings(h: LabeledGraph | CanonicalGraph, s: LabeledGraph) -> int:
    """Number of subgraphs of s isomorphic to h.

    A subgraph is an edge subset together with a choice of declared
    vertices covering the endpoints; isolated vertices of h are matched by
    choosing extra vertices of s.
    """
    if isinstance(h, LabeledGraph):
        h_canon = canonicalize(h)
    else:
        h_canon = h
    if h_canon.n_vertices > len(s.vertices) or len(s.vertices) > CANONICAL_VERTEX_BUDGET:
        if h_canon.n_vertices > len(s.vertices):
            return 0
        raise EnumerationBudgetError("host graph exceeds the embedding budget")
    # Split the pattern into its edge-bearing core and isolated padding.
    core_edges = h_canon.n_edges
    total = 0
    edges = sorted(s.edges)
    for subset in itertools.combinations(edges, core_edges):
        sub = graph(s.n_vertices, subset)
        pad = h_canon.n_vertices - len(sub.vertices)
        if pad < 0:
            continue
        padded = graph(s.n_vertices, subset,
                       list(sub.vertices) + _first_k(sorted(s.vertices - sub.vertices), pad))
        if pad > len(s.vertices) - len(sub.vertices):
            continue
        if canonicalize(padded).canonical_form == h_canon.canonical_form:
            total += math.comb(len(s.vertices) - len(sub.vertices), pad)
    return total


def _first_k(seq: list[int], k: int) -> list[int]:
    return seq[: max(k, 0)]


def subgraph_classes(s: LabeledGraph, max_edges: int | None = None) -> dict[bytes, CanonicalGraph]:
    """Canonical classes of edge-induced subgraphs of s (no isolated vertices)."""
    out: dict[bytes, CanonicalGraph] = {}
    edges = sorted(s.edges)
    cap = len(edges) if max_edges is None else min(max_edges, len(edges))
    for k in range(cap + 1):
        for subset in itertools.combinations(edges, k):
            cg = canonicalize(graph(s.n_vertices, subset))
            out.setdefault(cg.canonical_form, cg)
    return out


# -- decomposition of an edge difference --------------------------------------


@dataclass
class PathCycleDecomposition:
    """Cycles and paths partitioning E(S) \\ E(H).

    Paths carry their endpoint pair; a path whose endpoints coincide is a
    closed ear hung at an anchor vertex (these arise when a block of S
    meets the rest only at a single vertex).
    """

    cycles: list[LabeledGraph] = field(default_factory=list)
    paths: list[LabeledGraph] = field(default_factory=list)
    endpoints: list[tuple[int, int]] = field(default_factory=list)

    @property
    def t(self) -> int:
        return len(self.paths)

    @property
    def m(self) -> int:
        return len(self.cycles)

    def reassembled_edges(self) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        for c in self.cycles:
            out.extend(sorted(c.edges))
        for p in self.paths:
            out.extend(sorted(p.edges))
        return sorted(out)


class _EdgePool:
    """Mutable view of the not-yet-covered edges during decomposition."""

    def __init__(self, edges: Iterable[tuple[int, int]]):
        self.adj: dict[int, set[int]] = {}
        self.count = 0
        for u, v in edges:
            self.adj.setdefault(u, set()).add(v)
            self.adj.setdefault(v, set()).add(u)
            self.count += 1

    def remove(self, u: int, v: int):
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.count -= 1

    def neighbors(self, v: int) -> list[int]:
        return sorted(self.adj.get(v, ()))

    def degree(self, v: int) -> int:
        return len(self.adj.get(v, ()))

    def component_of(self, v: int) -> set[int]:
        comp, stack = set(), [v]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(self.adj.get(x, ()))
        return comp

    def components(self) -> list[set[int]]:
        seen: set[int] = set()
        comps = []
        for v in sorted(self.adj):
            if v not in seen and self.adj[v]:
                comp = self.component_of(v)
                seen |= comp
                comps.append(comp)
        return comps

    def find_cycle(self, comp: set[int]) -> list[int]:
        """Some simple cycle inside comp (every vertex there has degree >= 2).

        Walks without immediate backtracking until a vertex repeats; with
        minimum degree two the walk can never get stuck.
        """
        start = min(comp)
        walk = [start]
        first_seen = {start: 0}
        while True:
            x = walk[-1]
            prev = walk[-2] if len(walk) >= 2 else None
            nxt = None
            for y in self.neighbors(x):
                if y != prev:
                    nxt = y
                    break
            if nxt is None:
                raise AssertionError("walk stuck in a min-degree-2 component")
            if nxt in first_seen:
                return walk[first_seen[nxt]:]
            first_seen[nxt] = len(walk)
            walk.append(nxt)


def _walk_ear(pool: _EdgePool, anchors: set[int], start: int) -> tuple[list[int], Optional[list[int]]]:
    """Walk from an anchor through fresh vertices until another anchor or a
    repeat.  Returns (walk, cycle_part); cycle_part is set when the walk bit
    its own tail, in which case walk is the stem up to the bite vertex."""
    walk = [start]
    on_walk = {start}
    while True:
        x = walk[-1]
        nxt = None
        for y in pool.neighbors(x):
            if len(walk) >= 2 and y == walk[-2]:
                continue  # never reuse the entry edge; fresh vertices have degree >= 2
            nxt = y
            break
        if nxt is None:
            raise AssertionError("walk stuck at a fresh vertex")
        if nxt in anchors:
            walk.append(nxt)
            return walk, None
        if nxt in on_walk:
            i = walk.index(nxt)
            return walk[: i + 1], walk[i:] + [nxt]
        walk.append(nxt)
        on_walk.add(nxt)


def decompose_difference(s: LabeledGraph, h: LabeledGraph, variant: str = "A2") -> PathCycleDecomposition:
    """Decompose E(S) \\ E(H) into cycles and anchored paths.

    Variant "A2": cycles are pairwise vertex-disjoint and avoid V(H); path
    endpoints lie on earlier pieces, V(H) or leaves of S, and interiors are
    fresh.  The path count then equals |leaves(S) - V(H)| + excess(S) -
    excess(H).

    Variant "A3": cycles are independent cycles of S avoiding V(H); paths
    pairwise meet only in endpoints, and the path count is at most five
    times the A2 count.

    Determinism: ties are always broken toward the smallest vertex.
    """
    if variant not in ("A2", "A3"):
        raise ValueError(f"unknown variant {variant!r}")
    if not is_subgraph(h, s):
        raise ValueError("h is not a subgraph of s")
    if not isolated_vertices(s) <= h.vertices:
        raise ValueError("isolated vertices of s must be declared in h")

    n = s.n_vertices
    rest = s.edges - h.edges
    out = PathCycleDecomposition()
    anchors = set(h.vertices) | set(leaves(s))

    if variant == "A3":
        # independent cycles of s away from V(h) come out first
        carved = []
        for c in cycle_components(s):
            if not (support(c) & h.vertices):
                carved.append(c)
        pool = _EdgePool(rest - frozenset(e for c in carved for e in c.edges))
        out.cycles.extend(sorted(carved, key=lambda c: sorted(c.edges)))
        for c in out.cycles:
            anchors |= support(c)
        # remaining pieces: maximal threads between branch/anchor vertices
        branch = {v for v in pool.adj if pool.degree(v) != 2}
        stops = anchors | branch
        for t in sorted(stops):
            while pool.degree(t) > 0:
                path = [t]
                while True:
                    x = path[-1]
                    ys = [y for y in pool.neighbors(x)]
                    y = ys[0]
                    pool.remove(x, y)
                    path.append(y)
                    if y in stops:
                        break
                out.paths.append(graph(n, zip(path, path[1:])))
                out.endpoints.append((path[0], path[-1]))
        if pool.count:
            raise AssertionError("threads left edges uncovered")
        return out

    # variant A2
    pool = _EdgePool(rest)
    while pool.count:
        comps = pool.components()
        comp = None
        for c in comps:
            if c & anchors:
                comp = c
                break
        if comp is None:
            # anchor-free component: carve a cycle to seed it
            comp = comps[0]
            cyc = pool.find_cycle(comp)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                pool.remove(a, b)
            cg = graph(n, zip(cyc, cyc[1:] + cyc[:1]))
            out.cycles.append(cg)
            anchors |= set(cyc)
            continue
        start = min(v for v in comp if v in anchors and pool.degree(v) > 0)
        walk, cycle_part = _walk_ear(pool, anchors, start)
        if cycle_part is not None:
            # lollipop: carve the all-fresh cycle; the stem becomes an ear later
            for a, b in zip(cycle_part, cycle_part[1:]):
                pool.remove(a, b)
            out.cycles.append(graph(n, zip(cycle_part, cycle_part[1:])))
            anchors |= set(cycle_part)
            continue
        for a, b in zip(walk, walk[1:]):
            pool.remove(a, b)
        out.paths.append(graph(n, zip(walk, walk[1:])))
        out.endpoints.append((walk[0], walk[-1]))
        anchors |= set(walk)
    return out


# -- rooted trees and the tree growth constant --------------------------------


def rooted_tree_counts(max_n: int) -> list[int]:
    """Counts of unlabeled rooted trees on 1..max_n vertices.

    Uses the Euler-transform recurrence driven by the divisor sum.
    """
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if max_n > 60:
        raise EnumerationBudgetError("rooted tree budget is 60 vertices")
    r = [0, 1]
    for n in range(1, max_n):
        total = 0
        for k in range(1, n + 1):
            div = sum(d * r[d] for d in range(1, k + 1) if k % d == 0)
            total += div * r[n - k + 1]
        r.append(total // n)
    return r[1 : max_n + 1]


@dataclass(frozen=True)
class GrowthEstimate:
    value: float
    converged: bool
    raw_ratio: float


def otter_constant_estimate(max_n: int) -> GrowthEstimate:
    """Estimate the reciprocal growth rate lim r_n / r_{n+1}.

    Tree counts grow like C * beta^n * n^(-3/2), so the raw ratio carries a
    (1+1/n)^(3/2) prefactor that converges only like 1/n; plain Aitken on
    the raw sequence stalls well outside the third decimal.  We divide the
    known prefactor out first and then run two Aitken rounds on the
    remainder.  Estimates without enough terms for acceleration fall back
    to the raw ratio and are flagged unconverged.
    """
    counts = rooted_tree_counts(max_n)
    if len(counts) < 2:
        return GrowthEstimate(float("nan"), False, float("nan"))
    ratios = [counts[i] / counts[i + 1] for i in range(len(counts) - 1)]
    raw = ratios[-1]
    seq = [r * (1 + 1.0 / (i + 1)) ** -1.5 for i, r in enumerate(ratios)]
    if len(seq) < 3:
        return GrowthEstimate(raw, False, raw)
    rounds = 0
    while len(seq) >= 3 and rounds < 2:
        nxt = []
        for i in range(len(seq) - 2):
            denom = seq[i + 2] - 2 * seq[i + 1] + seq[i]
            if denom == 0:
                nxt.append(seq[i + 2])
            else:
                nxt.append(seq[i + 2] - (seq[i + 2] - seq[i + 1]) ** 2 / denom)
        seq = nxt
        rounds += 1
    return GrowthEstimate(seq[-1], rounds == 2 and max_n >= 20, raw)


# -- edge-list text format -----------------------------------------------------


def write_edge_list(g: LabeledGraph) -> str:
    """First line "n m", then one "u v" line per edge (0-based)."""
    lines = [f"{g.n_vertices} {len(g.edges)}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def read_edge_list(text: str) -> LabeledGraph:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    n, m = map(int, lines[0].split())
    edges = [tuple(map(int, ln.split())) for ln in lines[1 : m + 1]]
    return graph(n, edges, range(n))

"""Graph construction and structural checks: coset graphs for the dihedral
extension, generic Cayley graphs, bounded cycle search, balls, and normal
quotients.

All graphs are simple and undirected, stored as sorted adjacency tuples.
Coset-graph vertices are numbered by the mixed-radix scheme documented in
`vertex_numbering_descriptor`, so runs are reproducible bit for bit.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache

from .codes import engine
from .errors import CapacityError, ConstructionError, ParameterError
from .extraspecial import GroupContext, context
from .groupg import (
    CosetIndex,
    GElem,
    central_involution,
    g_ab,
    g_bv1,
    g_identity,
    g_mul,
)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with sorted, duplicate-free neighbor lists."""

    n: int
    adj: tuple[tuple[int, ...], ...]
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj) // 2

    def edges(self):
        for u in range(self.n):
            for w in self.adj[u]:
                if u < w:
                    yield (u, w)


@dataclass(frozen=True)
class Partition:
    """Block id per vertex; blocks are numbered 0..n_blocks-1 and nonempty."""

    block_of: tuple[int, ...]
    n_blocks: int

    def __post_init__(self):
        if self.n_blocks <= 0 and self.block_of:
            raise ParameterError("partition needs at least one block")
        seen = set(self.block_of)
        if seen != set(range(self.n_blocks)):
            raise ParameterError("blocks must be exactly 0..n_blocks-1, all nonempty")


def graph_from_edges(n: int, edges) -> Graph:
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, w in edges:
        if not (0 <= u < n and 0 <= w < n):
            raise ParameterError(f"edge ({u}, {w}) out of range")
        if u == w:
            raise ParameterError(f"loop at vertex {u}")
        adj[u].add(w)
        adj[w].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in adj))


def validate_graph(g: Graph) -> None:
    """Check the simple-graph invariants; raises ConstructionError."""
    for u in range(g.n):
        nbrs = g.adj[u]
        if list(nbrs) != sorted(set(nbrs)):
            raise ConstructionError(f"neighbor list of {u} is not sorted/unique")
        if u in nbrs:
            raise ConstructionError(f"loop at vertex {u}")
        for w in nbrs:
            if u not in g.adj[w]:
                raise ConstructionError(f"arc ({u}, {w}) has no reverse")


# -- coset graphs --------------------------------------------------------------


def vertex_numbering_descriptor(ctx: GroupContext) -> str:
    n = ctx.n
    return (
        f"coset H a^j b^eps v_1^x1...v_{n}^x{n} z^c -> "
        f"id = ((j*2 + eps)*3^{n} + sum(x_i * 3^({n}-i))) * 3 + c, 0 <= j < {2 ** ctx.m}"
    )


def _left_multipliers(ctx: GroupContext, connection) -> list[GElem]:
    """Arcs go from Hg to H(s h g) for s in the connection and h in the
    two-element stabilizer subgroup.  When every s*h already lies in some
    coset H*s', the h = 1 sweep alone lays down the full arc set."""
    t = central_involution(ctx)
    ident = g_identity(ctx)
    closed = True
    for s in connection:
        st = g_mul(ctx, s, t)
        if not any(
            st == s2 or st == g_mul(ctx, t, s2) for s2 in connection
        ):
            closed = False
            break
    if closed:
        return list(connection)
    out = []
    for s in connection:
        for h in (ident, t):
            out.append(g_mul(ctx, s, h))
    return out


def coset_graph(ctx: GroupContext, connection: list[GElem]) -> Graph:
    """Graph on the cosets of the half-turn subgroup, with arcs from each
    coset to its left translates by the connection elements.  The built arc
    set is validated undirected and loop-free, not assumed."""
    eng = engine(ctx.m)
    multipliers = _left_multipliers(ctx, connection)
    codes = [
        (eng.encode_q(s.q.j, s.q.eps), eng.encode_v(s.v)) for s in multipliers
    ]
    n = eng.vertex_count
    maps = [eng.neighbor_map(code) for code in codes]
    for idx, nm in enumerate(maps):
        for v in range(n):
            if nm[v] == v:
                raise ConstructionError(
                    f"connection element {multipliers[idx]} creates a loop at vertex {v}"
                )
    adj: list[tuple[int, ...]] = []
    for v in range(n):
        row = {nm[v] for nm in maps}
        adj.append(tuple(sorted(row)))
    graph = Graph(
        n,
        tuple(adj),
        meta={
            "context": ctx,
            "kind": "coset",
            "connection": tuple(connection),
        },
    )
    for idx, nm in enumerate(maps):
        for v in range(n):
            w = nm[v]
            if v not in graph.adj[w]:
                raise ConstructionError(
                    f"arc ({v}, {w}) from connection element {multipliers[idx]} has no reverse"
                )
    return graph


@lru_cache(maxsize=None)
def gamma(m: int) -> Graph:
    """The cubic coset graph at size parameter m, connection {ab, bv1, bv1^-1};
    validated cubic, connected, and of the predicted order."""
    if m not in (1, 2, 3):
        raise CapacityError(f"explicit construction supports m in {{1, 2, 3}}, got {m}")
    ctx = context(m)
    conn = [g_ab(ctx), g_bv1(ctx), g_bv1(ctx, -1)]
    graph = coset_graph(ctx, conn)
    expected = 2 ** (m + 1) * 3 ** (2 ** m + 1)
    if graph.n != expected:
        raise ConstructionError(f"vertex count {graph.n} != {expected}")
    if degree_sequence(graph) != ((3,) * graph.n):
        raise ConstructionError("graph is not cubic")
    if not is_connected(graph):
        raise ConstructionError("graph is not connected")
    return graph


def vertex_coset(graph: Graph, vid: int) -> CosetIndex:
    ctx = graph.meta.get("context")
    if ctx is None:
        raise ParameterError("graph carries no coset labels")
    eng = engine(ctx.m)
    verts = graph.meta.get("vertices")
    if verts is not None:
        vid = verts[vid]
    j, eps, vc = eng.decode_vertex(vid)
    return CosetIndex(j, eps, eng.decode_v(vc))


def coset_vertex_id(graph: Graph, w: CosetIndex) -> int:
    ctx = graph.meta.get("context")
    if ctx is None:
        raise ParameterError("graph carries no coset labels")
    eng = engine(ctx.m)
    vid = eng.vertex_id(w.j, w.eps, eng.encode_v(w.v))
    verts = graph.meta.get("vertices")
    if verts is not None:
        try:
            return verts.index(vid)
        except ValueError:
            raise ParameterError("coset not present in this subgraph") from None
    return vid


def vertex_label(graph: Graph, vid: int) -> str:
    w = vertex_coset(graph, vid)
    xs = ",".join(str(x) for x in w.v.x)
    return f"a^{w.j} b^{w.eps} v=[{xs}] z^{w.v.c}"


# -- generic Cayley graphs ------------------------------------------------------


def cayley_graph(elements, connection, mul) -> Graph:
    """Cayley graph on the given elements: x and y are adjacent when
    x * y^{-1} lies in the connection set.  The connection must be
    identity-free and inverse-closed; both are validated by powering."""
    elements = list(elements)
    index = {g: i for i, g in enumerate(elements)}
    if len(index) != len(elements):
        raise ParameterError("duplicate group elements")
    conn = list(connection)
    if not conn:
        return Graph(len(elements), tuple(() for _ in elements), meta={"kind": "cayley"})
    inverses = []
    for y in conn:
        # walk the cyclic group of y until it repeats to find y^{-1}
        powers = [y]
        seen = {y: 0}
        while True:
            nxt = mul(powers[-1], y)
            if nxt in seen:
                if seen[nxt] != 0:
                    raise ParameterError("multiplication oracle is not a group law")
                break
            seen[nxt] = len(powers)
            powers.append(nxt)
        order = len(powers)  # y^(order+1) = y
        if order == 1:
            raise ParameterError(f"connection contains the identity: {y!r}")
        inverses.append(powers[-2] if order >= 2 else y)
    for y, yinv in zip(conn, inverses):
        if yinv not in set(conn):
            raise ParameterError(f"connection is not inverse-closed: missing inverse of {y!r}")
    edges = []
    for x in elements:
        xi = index[x]
        for y in conn:
            w = mul(y, x)
            if w not in index:
                raise ParameterError("elements are not closed under the connection set")
            edges.append((xi, index[w]))
    graph = graph_from_edges(len(elements), edges)
    return Graph(graph.n, graph.adj, meta={"kind": "cayley", "elements": tuple(elements)})


# -- structural checks ----------------------------------------------------------


def is_connected(graph: Graph) -> bool:
    if graph.n == 0:
        return True
    seen = bytearray(graph.n)
    seen[0] = 1
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in graph.adj[u]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                queue.append(w)
    return count == graph.n


def degree_sequence(graph: Graph) -> tuple[int, ...]:
    return tuple(sorted(len(nbrs) for nbrs in graph.adj))


def bfs_distances(graph: Graph, start: int) -> list[int]:
    dist = [-1] * graph.n
    dist[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in graph.adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


# -- cycle search ----------------------------------------------------------------


def _canonical_cycle(path) -> tuple[int, ...]:
    size = len(path)
    best = None
    doubled = list(path) + list(path)
    for r in range(size):
        fwd = tuple(doubled[r:r + size])
        rev = (fwd[0],) + tuple(reversed(fwd[1:]))
        for cand in (fwd, rev):
            if best is None or cand < best:
                best = cand
    return best


def cycles_through(graph: Graph, required, length: int) -> list[tuple[int, ...]]:
    """All simple cycles of exactly the given length containing every
    required vertex; bounded depth-first search with distance pruning."""
    wanted = list(required)
    req = sorted(set(wanted))
    if len(req) != len(wanted):
        raise ParameterError("required vertices must be pairwise distinct")
    if not 1 <= len(req) <= 3:
        raise ParameterError("between 1 and 3 required vertices")
    if length > 12:
        raise ParameterError("cycle length is capped at 12")
    if any(not 0 <= v < graph.n for v in req):
        raise ParameterError("required vertex out of range")
    if length < 3:
        return []
    start = req[0]
    others = req[1:]
    dist = {r: bfs_distances(graph, r) for r in req}
    dstart = dist[start]
    results: set[tuple[int, ...]] = set()
    path = [start]
    onpath = {start}
    adj = graph.adj

    def dfs(v: int, depth: int) -> None:
        if depth == length:
            if start in adj[v] and all(r in onpath for r in others):
                results.add(_canonical_cycle(path))
            return
        rem = length - depth
        for w in adj[v]:
            if w in onpath:
                continue
            if dstart[w] > rem:
                continue
            if any(r not in onpath and dist[r][w] > rem - 1 for r in others):
                continue
            path.append(w)
            onpath.add(w)
            dfs(w, depth + 1)
            path.pop()
            onpath.remove(w)

    dfs(start, 1)
    return sorted(results)


# -- balls and induced subgraphs ---------------------------------------------------


def ball(graph: Graph, center, radius: int) -> Graph:
    """Induced subgraph on every vertex within the radius of the center (or
    of any center, when several are given)."""
    if radius < 0:
        raise ParameterError("radius must be nonnegative")
    centers = [center] if isinstance(center, int) else sorted(set(center))
    if any(not 0 <= c < graph.n for c in centers):
        raise ParameterError("center out of range")
    dist = {c: 0 for c in centers}
    queue = deque(centers)
    while queue:
        u = queue.popleft()
        if dist[u] == radius:
            continue
        for w in graph.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    keep = sorted(dist)
    index = {v: i for i, v in enumerate(keep)}
    adj = tuple(
        tuple(index[w] for w in graph.adj[v] if w in index) for v in keep
    )
    meta = dict(graph.meta)
    meta["vertices"] = tuple(keep)
    return Graph(len(keep), adj, meta=meta)


# -- quotients ------------------------------------------------------------------


def singleton_partition(graph: Graph) -> Partition:
    return Partition(tuple(range(graph.n)), graph.n)


def orbit_partition(graph: Graph, gens: list[GElem]) -> Partition:
    """Blocks are the orbits of the subgroup generated by gens in the coset
    action; requires a coset-labeled graph."""
    ctx = graph.meta.get("context")
    if ctx is None or graph.meta.get("vertices") is not None:
        raise ParameterError("orbit_partition needs a full coset-labeled graph")
    eng = engine(ctx.m)
    codes = [(eng.encode_q(g.q.j, g.q.eps), eng.encode_v(g.v)) for g in gens]
    parent = list(range(graph.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for code in codes:
        for v in range(graph.n):
            w = eng.act_vertex(v, code)
            rv, rw = find(v), find(w)
            if rv != rw:
                parent[max(rv, rw)] = min(rv, rw)
    block_ids: dict[int, int] = {}
    block_of = []
    for v in range(graph.n):
        root = find(v)
        if root not in block_ids:
            block_ids[root] = len(block_ids)
        block_of.append(block_ids[root])
    return Partition(tuple(block_of), len(block_ids))


def normal_quotient(graph: Graph, part: Partition) -> Graph:
    """Simple graph on the blocks: distinct blocks are adjacent when some
    edge crosses between them.  Collapsed multiplicities and dropped
    intra-block edges are counted in the result's meta for diagnostics."""
    if len(part.block_of) != graph.n:
        raise ParameterError("partition size does not match the graph")
    multi: Counter = Counter()
    dropped = 0
    for u, w in graph.edges():
        bu, bw = part.block_of[u], part.block_of[w]
        if bu == bw:
            dropped += 1
        else:
            multi[(min(bu, bw), max(bu, bw))] += 1
    adj: list[set[int]] = [set() for _ in range(part.n_blocks)]
    for (bu, bw) in multi:
        adj[bu].add(bw)
        adj[bw].add(bu)
    collapsed = sum(c - 1 for c in multi.values())
    return Graph(
        part.n_blocks,
        tuple(tuple(sorted(s)) for s in adj),
        meta={
            "kind": "quotient",
            "dropped_intra_block_edges": dropped,
            "collapsed_multiedges": collapsed,
        },
    )


# -- canonical text formats -------------------------------------------------------


def to_edge_list(graph: Graph) -> str:
    lines = [f"{graph.n} {graph.edge_count()}"]
    lines.extend(f"{u} {w}" for u, w in sorted(graph.edges()))
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError("empty edge list")
    try:
        n, e = map(int, lines[0].split())
        edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
    except ValueError as exc:
        raise ParameterError(f"malformed edge list: {exc}") from None
    if len(edges) != e:
        raise ParameterError(f"header promises {e} edges, found {len(edges)}")
    return graph_from_edges(n, edges)


def label_map(graph: Graph) -> dict:
    ctx = graph.meta.get("context")
    if ctx is None:
        raise ParameterError("graph carries no coset labels")
    return {
        "m": ctx.m,
        "vertex_numbering": vertex_numbering_descriptor(ctx),
        "labels": {str(v): vertex_label(graph, v) for v in range(graph.n)},
    }

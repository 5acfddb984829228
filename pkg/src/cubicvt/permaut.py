"""Permutation groups and graph automorphisms.

PermGroup keeps a deterministic stabilizer chain (base points chosen lowest
first) giving order, membership, and element enumeration.  The automorphism
search refines colorings to equitable partitions, individualizes inside the
first smallest cell, and prunes with the orbits of automorphisms already
found; discovered generators are exact, and the search is complete because
pruning only merges branches at nodes on the first root-to-leaf path.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from .codes import engine
from .errors import (
    CapacityError,
    ContractViolation,
    NotArcTransitive,
    ParameterError,
)
from .graphs import Graph
from .groupg import GElem

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def mult_perm(p: Perm, q: Perm) -> Perm:
    """Apply p first, then q."""
    return tuple(map(q.__getitem__, p))


def inv_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def cycle_lengths(p: Perm) -> list[int]:
    seen = bytearray(len(p))
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = 1
            v = p[v]
            length += 1
        lengths.append(length)
    return lengths


def is_semiregular_perm(p: Perm) -> bool:
    return len(set(cycle_lengths(p))) == 1


def _check_perm(p, degree: int) -> Perm:
    p = tuple(p)
    if len(p) != degree:
        raise ParameterError(f"permutation degree {len(p)} != {degree}")
    if len(set(p)) != degree or not all(0 <= v < degree for v in p):
        raise ParameterError("not a permutation")
    return p


class _Level:
    __slots__ = ("base", "gens", "transversal")

    def __init__(self, base: int):
        self.base = base
        self.gens: list[Perm] = []
        self.transversal: dict[int, Perm] = {}


class PermGroup:
    """Permutation group from generators, with a lazily built stabilizer
    chain used for order, membership, and enumeration."""

    def __init__(self, degree: int, generators, base_hint: tuple[int, ...] = ()):
        self.degree = degree
        ident = identity_perm(degree)
        seen = set()
        gens = []
        for g in generators:
            g = _check_perm(g, degree)
            if g != ident and g not in seen:
                seen.add(g)
                gens.append(g)
        self.generators: tuple[Perm, ...] = tuple(gens)
        self._base_hint = tuple(base_hint)
        self._levels: list[_Level] | None = None

    # -- stabilizer chain ---------------------------------------------------

    def _gens_at(self, i: int) -> list[Perm]:
        assert self._levels is not None
        out = []
        for lvl in self._levels[i:]:
            out.extend(lvl.gens)
        return out

    def _sift(self, p: Perm, start: int = 0) -> tuple[Perm, int]:
        levels = self._levels
        assert levels is not None
        for i in range(start, len(levels)):
            lvl = levels[i]
            x = p[lvl.base]
            if x == lvl.base:
                continue
            u = lvl.transversal.get(x)
            if u is None:
                return p, i
            p = mult_perm(p, inv_perm(u))
        return p, len(levels)

    def _insert(self, p: Perm) -> int | None:
        """Sift p and lodge the residue as a strong generator; returns the
        level index it joined, or None when p was already a member."""
        levels = self._levels
        assert levels is not None
        ident = identity_perm(self.degree)
        residue, idx = self._sift(p)
        if residue == ident:
            return None
        if idx == len(levels):
            base = next(
                (b for b in self._base_hint if residue[b] != b and
                 all(lvl.base != b for lvl in levels)),
                None,
            )
            if base is None:
                base = next(b for b in range(self.degree) if residue[b] != b)
            levels.append(_Level(base))
        levels[idx].gens.append(residue)
        return idx

    def _recompute_orbit(self, i: int) -> None:
        levels = self._levels
        assert levels is not None
        lvl = levels[i]
        gens = self._gens_at(i)
        ident = identity_perm(self.degree)
        lvl.transversal = {lvl.base: ident}
        queue = deque([lvl.base])
        while queue:
            x = queue.popleft()
            ux = lvl.transversal[x]
            for s in gens:
                y = s[x]
                if y not in lvl.transversal:
                    lvl.transversal[y] = mult_perm(ux, s)
                    queue.append(y)

    def _ensure_chain(self) -> None:
        if self._levels is not None:
            return
        self._levels = [_Level(b) for b in self._base_hint]
        for lvl in self._levels:
            lvl.transversal = {lvl.base: identity_perm(self.degree)}
        for g in self.generators:
            self._insert(g)
        levels = self._levels
        ident = identity_perm(self.degree)
        i = len(levels) - 1
        while i >= 0:
            self._recompute_orbit(i)
            lvl = levels[i]
            gens = self._gens_at(i)
            inverted = {x: inv_perm(u) for x, u in lvl.transversal.items()}
            restart = False
            for x in sorted(lvl.transversal):
                ux = lvl.transversal[x]
                for s in gens:
                    y = s[x]
                    w = mult_perm(ux, s)
                    if w == lvl.transversal[y]:
                        continue
                    schreier = mult_perm(w, inverted[y])
                    if schreier == ident:
                        continue
                    residue, idx = self._sift(schreier, i + 1)
                    if residue == ident:
                        continue
                    if idx == len(levels):
                        base = next(
                            (b for b in self._base_hint if residue[b] != b and
                             all(l.base != b for l in levels)),
                            None,
                        )
                        if base is None:
                            base = next(b for b in range(self.degree) if residue[b] != b)
                        levels.append(_Level(base))
                        levels[idx].transversal = {base: ident}
                    levels[idx].gens.append(residue)
                    i = idx
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    # -- queries -------------------------------------------------------------

    def order(self) -> int:
        self._ensure_chain()
        out = 1
        for lvl in self._levels:
            out *= len(lvl.transversal)
        return out

    def orbit(self, point: int) -> set[int]:
        if not 0 <= point < self.degree:
            raise ParameterError(f"point {point} out of range")
        seen = {point}
        queue = deque([point])
        while queue:
            x = queue.popleft()
            for s in self.generators:
                y = s[x]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    def contains(self, p) -> bool:
        p = _check_perm(p, self.degree)
        self._ensure_chain()
        residue, _ = self._sift(p)
        return residue == identity_perm(self.degree)

    def elements(self):
        """Every group element, in a deterministic chain order."""
        self._ensure_chain()
        levels = self._levels

        def rec(i: int):
            if i == len(levels):
                yield identity_perm(self.degree)
                return
            for h in rec(i + 1):
                for x in sorted(levels[i].transversal):
                    yield mult_perm(h, levels[i].transversal[x])

        return rec(0)

    def stabilizer(self, point: int) -> "PermGroup":
        """Pointwise stabilizer of one point, via a chain based there."""
        if not 0 <= point < self.degree:
            raise ParameterError(f"point {point} out of range")
        self._ensure_chain()
        if self._levels and self._levels[0].base == point:
            chain = self
        else:
            chain = PermGroup(self.degree, self.generators, base_hint=(point,))
            chain._ensure_chain()
        if not chain._levels or chain._levels[0].base != point:
            # no strong generator moves the point, so everything fixes it
            return PermGroup(self.degree, self.generators)
        return PermGroup(self.degree, chain._gens_at(1))

    def moving_element(self, src: int, dst: int) -> Perm | None:
        """Some group element mapping src to dst, or None."""
        if src == dst:
            return identity_perm(self.degree)
        parent: dict[int, tuple[int, Perm]] = {src: (src, identity_perm(self.degree))}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for s in self.generators:
                y = s[x]
                if y not in parent:
                    parent[y] = (x, s)
                    if y == dst:
                        word = []
                        v = dst
                        while v != src:
                            v, gen = parent[v]
                            word.append(gen)
                        out = identity_perm(self.degree)
                        for gen in reversed(word):
                            out = mult_perm(out, gen)
                        return out
                    queue.append(y)
        return None


def orbit(gp: PermGroup, point: int) -> set[int]:
    return gp.orbit(point)


def group_order(gp: PermGroup) -> int:
    return gp.order()


def contains(gp: PermGroup, p) -> bool:
    return gp.contains(p)


# -- graph automorphism search -----------------------------------------------


def _dense(colors) -> tuple[int, ...]:
    order = {c: i for i, c in enumerate(sorted(set(colors)))}
    return tuple(order[c] for c in colors)


def _refine(adj, colors) -> tuple[int, ...]:
    """Iterated neighbor-color refinement to a stable partition, with cells
    renumbered canonically by signature order."""
    colors = _dense(colors)
    ncells = len(set(colors))
    n = len(colors)
    while True:
        sigs = [
            (colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(n)
        ]
        order = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = tuple(order[s] for s in sigs)
        if len(order) == ncells:
            return new
        colors, ncells = new, len(order)


def _bfs_layers(adj, start: int, n: int) -> list[int]:
    dist = [n + 1] * n
    dist[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] > dist[u] + 1:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _individualize(adj, colors, v) -> tuple[int, ...]:
    """Give v a cell of its own, seed with distances from v, and refine."""
    dist = _bfs_layers(adj, v, len(colors))
    seeded = [
        (colors[u], 0 if u == v else 1, dist[u]) for u in range(len(colors))
    ]
    return _refine(adj, seeded)


def _invariant(colors) -> tuple[int, ...]:
    hist = [0] * (max(colors) + 1)
    for c in colors:
        hist[c] += 1
    return tuple(hist)


def _target_cell(colors) -> list[int]:
    # the choice must depend on the coloring alone (cell color, not vertex
    # ids), so that corresponding cells are targeted in every branch
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    color = min(
        (c for c, members in cells.items() if len(members) > 1),
        key=lambda c: (len(cells[c]), c),
    )
    return cells[color]


def graph_automorphisms(graph: Graph, max_vertices: int = 2500) -> PermGroup:
    """Full automorphism group via refinement plus backtracking."""
    n = graph.n
    adj = graph.adj
    if n > max_vertices:
        refined = _refine(adj, [len(nbrs) for nbrs in adj])
        sizes = Counter(Counter(refined).values())
        raise CapacityError(
            f"automorphism search capped at {max_vertices} vertices (got {n}); "
            f"partial refinement cell sizes: {dict(sorted(sizes.items()))}"
        )
    if n == 0:
        return PermGroup(0, [])
    adjsets = [frozenset(nbrs) for nbrs in adj]

    gens: list[Perm] = []
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    zeta_order: list[int] | None = None
    zeta_sigs: dict[int, tuple[int, ...]] = {}

    def try_leaf(colors) -> bool:
        """Compare a discrete leaf against the first one; record a generator
        when the induced vertex map preserves adjacency."""
        nonlocal zeta_order
        order = [0] * n
        for v, c in enumerate(colors):
            order[c] = v
        if zeta_order is None:
            zeta_order = order
            return False
        g = [0] * n
        for zv, lv in zip(zeta_order, order):
            g[zv] = lv
        perm = tuple(g)
        if perm == identity_perm(n):
            return False
        for u in range(n):
            gu = perm[u]
            for w in adj[u]:
                if perm[w] not in adjsets[gu]:
                    return False
        gens.append(perm)
        for v in range(n):
            union(v, perm[v])
        return True

    def search(colors, depth: int, leftmost: bool) -> bool:
        sig = _invariant(colors)
        if leftmost:
            zeta_sigs[depth] = sig
        elif zeta_sigs.get(depth) != sig:
            return False
        if len(set(colors)) == n:
            return try_leaf(colors)
        cell = _target_cell(colors)
        explored: list[int] = []
        first = True
        for w in cell:
            if leftmost and any(find(w) == find(e) for e in explored):
                continue
            got = search(_individualize(adj, colors, w), depth + 1, leftmost and first)
            explored.append(w)
            first = False
            if got and not leftmost:
                return True
        return False

    start = _refine(adj, [len(nbrs) for nbrs in adj])
    if len(set(start)) == n:
        return PermGroup(n, [])  # rigid already
    search(start, 0, True)
    return PermGroup(n, sorted(set(gens)))


# -- stabilizer structure -------------------------------------------------------


@dataclass(frozen=True)
class StabilizerAnalysis:
    vertex: int
    stab_order: int
    local_action_size: int
    kernel_order: int
    stab_is_2_group: bool
    kernel_is_2_group: bool
    local_action_transitive: bool


def _is_2_power(k: int) -> bool:
    return k >= 1 and (k & (k - 1)) == 0


def stabilizer_analysis(gp: PermGroup, graph: Graph, vertex: int) -> StabilizerAnalysis:
    """Order of the vertex stabilizer, the group it induces on the
    neighborhood, and the pointwise kernel of that local action."""
    if gp.degree != graph.n:
        raise ParameterError("group degree does not match the graph")
    nbrs = graph.adj[vertex]
    stab = gp.stabilizer(vertex)
    stab_order = stab.order()
    idx = {b: i for i, b in enumerate(nbrs)}
    local_gens = set()
    for p in stab.generators:
        image = tuple(idx[p[b]] for b in nbrs)
        local_gens.add(image)
    deg = len(nbrs)
    local = {tuple(range(deg))}
    frontier = [tuple(range(deg))]
    while frontier:
        x = frontier.pop()
        for s in local_gens:
            y = tuple(s[i] for i in x)
            if y not in local:
                local.add(y)
                frontier.append(y)
    local_size = len(local)
    if stab_order % local_size:
        raise ContractViolation("local action size does not divide the stabilizer order")
    kernel = stab_order // local_size
    reached = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for s in local_gens:
            j = s[i]
            if j not in reached:
                reached.add(j)
                queue.append(j)
    return StabilizerAnalysis(
        vertex=vertex,
        stab_order=stab_order,
        local_action_size=local_size,
        kernel_order=kernel,
        stab_is_2_group=_is_2_power(stab_order),
        kernel_is_2_group=_is_2_power(kernel),
        local_action_transitive=(len(reached) == deg),
    )


# -- semiregular spectrum from cycle types ----------------------------------------


def semiregular_elements(gp: PermGroup, budget: int = 10_000_000) -> set[int]:
    """Orders of semiregular elements, read off the cycle types of every
    element enumerated through the stabilizer chain."""
    size = gp.order()
    if size > budget:
        raise CapacityError(f"group order {size} exceeds the enumeration budget {budget}")
    spectrum = set()
    for p in gp.elements():
        lengths = set(cycle_lengths(p))
        if len(lengths) == 1:
            spectrum.add(lengths.pop())
    return spectrum


# -- constructive transitive generation --------------------------------------------


def find_transitive_generators(graph: Graph, gp: PermGroup) -> list[Perm]:
    """One group element per neighbor of a fixed vertex, each mapping the
    vertex onto that neighbor; the returned set generates a transitive
    subgroup, which is validated by an orbit computation."""
    if gp.degree != graph.n:
        raise ParameterError("group degree does not match the graph")
    if len(gp.orbit(0)) != graph.n:
        raise ParameterError("the given group is not vertex-transitive")
    out = []
    for beta in graph.adj[0]:
        p = gp.moving_element(0, beta)
        if p is None:
            raise ContractViolation("transitive group failed to reach a neighbor")
        out.append(p)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in out:
            for y in (s[x], inv_perm(s)[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    if len(seen) != graph.n:
        raise ContractViolation("neighbor-moving elements failed to act transitively")
    return out


def find_arc_transitive_generators(graph: Graph, gp: PermGroup) -> list[Perm]:
    """The transitive set extended by stabilizer elements sweeping the fixed
    vertex's neighborhood; unavailable when the local action is intransitive."""
    base = find_transitive_generators(graph, gp)
    nbrs = graph.adj[0]
    stab = gp.stabilizer(0)
    beta0 = nbrs[0]
    extras = []
    for beta in nbrs[1:]:
        x = stab.moving_element(beta0, beta)
        if x is None:
            raise NotArcTransitive(
                f"the stabilizer of vertex 0 moves {beta0} only within "
                f"{sorted(stab.orbit(beta0))}; cannot sweep the neighborhood"
            )
        extras.append(x)
    combined = base + extras
    arcs = {(0, beta0)}
    queue = deque([(0, beta0)])
    all_arcs = sum(len(a) for a in graph.adj)
    inverses = [inv_perm(p) for p in combined]
    while queue:
        u, v = queue.popleft()
        for p in combined + inverses:
            arc = (p[u], p[v])
            if arc not in arcs:
                arcs.add(arc)
                queue.append(arc)
    if len(arcs) != all_arcs:
        raise ContractViolation("combined generators are not arc-transitive")
    return combined


def verify_subgroup_action(graph: Graph, gens: list[GElem]) -> PermGroup:
    """Convert group elements to the permutations they induce on the coset
    vertices, validating that each preserves adjacency."""
    ctx = graph.meta.get("context")
    if ctx is None or graph.meta.get("vertices") is not None:
        raise ParameterError("needs a full coset-labeled graph")
    eng = engine(ctx.m)
    perms = []
    for g in gens:
        code = (eng.encode_q(g.q.j, g.q.eps), eng.encode_v(g.v))
        p = tuple(eng.act_vertex(v, code) for v in range(graph.n))
        for u in range(graph.n):
            mapped = {p[w] for w in graph.adj[u]}
            if mapped != set(graph.adj[p[u]]):
                raise ContractViolation(
                    f"element {g} does not preserve adjacency at vertex {u}"
                )
        perms.append(p)
    return PermGroup(graph.n, perms)

"""Coset graphs, Cayley graphs, cycle search, balls, and quotients."""

import random

import pytest

from cubicvt.errors import CapacityError, ConstructionError, ParameterError
from cubicvt.extraspecial import context, gen_v, z_elem
from cubicvt.graphs import (
    Partition,
    ball,
    bfs_distances,
    cayley_graph,
    coset_graph,
    coset_vertex_id,
    cycles_through,
    degree_sequence,
    gamma,
    graph_from_edges,
    is_connected,
    label_map,
    normal_quotient,
    orbit_partition,
    parse_edge_list,
    singleton_partition,
    to_edge_list,
    validate_graph,
    vertex_coset,
    vertex_label,
)
from cubicvt.groupg import (
    QElem,
    all_group_elements,
    canonical_coset,
    g_ab,
    g_bv1,
    g_from_q,
    g_from_v,
    g_identity,
    g_mul,
    q_a,
    q_b,
    standard_generators,
)


def cycle_graph(n):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def coset_id_of(graph, g):
    ctx = graph.meta["context"]
    return coset_vertex_id(graph, canonical_coset(ctx, g))


def test_neighbors_of_home_coset():
    ctx = context(1)
    graph = gamma(1)
    home = coset_id_of(graph, g_identity(ctx))
    expected = {
        coset_id_of(graph, g_ab(ctx)),
        coset_id_of(graph, g_bv1(ctx)),
        coset_id_of(graph, g_bv1(ctx, -1)),
    }
    assert set(graph.adj[home]) == expected
    assert len(expected) == 3


@pytest.mark.parametrize(
    "m,vertices", [(1, 108), (2, 1944)]
)
def test_gamma_small_sizes(m, vertices):
    graph = gamma(m)
    assert graph.n == vertices
    assert graph.edge_count() == vertices * 3 // 2
    assert degree_sequence(graph) == (3,) * vertices
    assert is_connected(graph)
    validate_graph(graph)


def test_gamma_capacity_guard():
    with pytest.raises(CapacityError):
        gamma(4)
    with pytest.raises(CapacityError):
        gamma(0)


def test_coset_graph_empty_connection():
    graph = coset_graph(context(1), [])
    assert graph.n == 108
    assert graph.edge_count() == 0


def test_coset_graph_rejects_asymmetric_connection():
    # at m=2 the rotation a is not in H a^{-1} H, so no arc has its reverse
    ctx = context(2)
    with pytest.raises(ConstructionError):
        coset_graph(ctx, [g_from_q(ctx, q_a(ctx))])


def test_coset_graph_symmetric_single_rotation_m1():
    # at m=1 the square of a lies in the stabilizer subgroup, so the arc set
    # of connection {a} closes up into a perfect matching
    ctx = context(1)
    graph = coset_graph(ctx, [g_from_q(ctx, q_a(ctx))])
    assert degree_sequence(graph) == (1,) * graph.n


def test_coset_graph_rejects_loop_connection():
    ctx = context(1)
    half_turn = g_from_q(ctx, QElem(2, 0))
    with pytest.raises(ConstructionError):
        coset_graph(ctx, [half_turn])


def test_vertex_transitivity_spot_check():
    ctx = context(1)
    graph = gamma(1)
    rng = random.Random(21)
    edges = set(graph.edges())
    elems = list(all_group_elements(ctx))
    from cubicvt.codes import engine

    eng = engine(1)
    for g in rng.sample(elems, 12):
        code = (eng.encode_q(g.q.j, g.q.eps), eng.encode_v(g.v))
        mapped = set()
        for u, w in edges:
            mu, mw = eng.act_vertex(u, code), eng.act_vertex(w, code)
            mapped.add((min(mu, mw), max(mu, mw)))
        assert mapped == edges


def test_connection_generates_whole_group():
    ctx = context(1)
    graph = gamma(1)
    part = orbit_partition(graph, [g_ab(ctx), g_bv1(ctx), g_bv1(ctx, -1)])
    assert part.n_blocks == 1


def test_cayley_cyclic_six():
    elems = list(range(6))
    graph = cayley_graph(elems, [1, 5], lambda p, q: (p + q) % 6)
    assert degree_sequence(graph) == (2,) * 6
    assert is_connected(graph)
    assert set(graph.adj[0]) == {1, 5}


def test_cayley_involution_plus_rotation_is_cubic():
    # symmetric group on 3 points: a transposition and both 3-cycles
    import itertools

    elems = list(itertools.permutations(range(3)))

    def mul(p, q):
        return tuple(q[i] for i in p)

    conn = [(1, 0, 2), (1, 2, 0), (2, 0, 1)]
    graph = cayley_graph(elems, conn, mul)
    assert degree_sequence(graph) == (3,) * 6


def test_cayley_of_main_group():
    ctx = context(1)
    elems = list(all_group_elements(ctx))
    conn = [g_ab(ctx), g_bv1(ctx), g_bv1(ctx, -1)]
    graph = cayley_graph(elems, conn, lambda g, h: g_mul(ctx, g, h))
    assert graph.n == 216
    assert degree_sequence(graph) == (3,) * 216
    assert is_connected(graph)


def test_cayley_validation():
    elems = list(range(6))
    mul = lambda p, q: (p + q) % 6
    with pytest.raises(ParameterError):
        cayley_graph(elems, [0], mul)  # identity in the connection
    with pytest.raises(ParameterError):
        cayley_graph(elems, [1], mul)  # not inverse-closed
    with pytest.raises(ParameterError):
        cayley_graph([0, 1, 2], [1, 5], mul)  # elements not closed


def test_is_connected_and_degree_examples():
    two = graph_from_edges(2, [])
    assert not is_connected(two)
    assert degree_sequence(cycle_graph(6)) == (2,) * 6
    assert is_connected(cycle_graph(6))


def test_cycles_through_triangle():
    tri = graph_from_edges(3, [(0, 1), (1, 2), (0, 2)])
    assert cycles_through(tri, [0], 3) == [(0, 1, 2)]


def test_cycles_through_six_cycle_graph():
    c6 = cycle_graph(6)
    assert cycles_through(c6, [0, 3], 6) == [(0, 1, 2, 3, 4, 5)]
    assert cycles_through(c6, [0], 5) == []


@pytest.mark.parametrize("m", [1, 2])
def test_displayed_six_cycle_exists(m):
    ctx = context(m)
    graph = gamma(m)
    home = g_identity(ctx)
    b = g_from_q(ctx, q_b(ctx))
    v1 = g_from_v(ctx, gen_v(ctx, 1))
    v1i = g_from_v(ctx, gen_v(ctx, 1, -1))
    expected_cycle = [
        home,
        g_bv1(ctx),
        v1i,
        b,
        v1,
        g_bv1(ctx, -1),
    ]
    ids = [coset_id_of(graph, g) for g in expected_cycle]
    assert len(set(ids)) == 6
    found = cycles_through(graph, [ids[0], ids[1], ids[5]], 6)
    from cubicvt.graphs import _canonical_cycle

    assert _canonical_cycle(ids) in found


@pytest.mark.parametrize("m", [1, 2])
def test_no_six_cycle_through_ab_and_bv1(m):
    ctx = context(m)
    graph = gamma(m)
    trio = [
        coset_id_of(graph, g_identity(ctx)),
        coset_id_of(graph, g_ab(ctx)),
        coset_id_of(graph, g_bv1(ctx)),
    ]
    assert cycles_through(graph, trio, 6) == []


def _figure_vertices(ctx):
    """The fourteen cosets of the radius-2 picture around the home vertex
    and its ab-neighbor, with the tree edges among them."""
    n = ctx.n
    ident = g_identity(ctx)
    a_inv = q_a(ctx, -1)
    elems = {
        "1": ident,
        "ab": g_ab(ctx),
        "bv1": g_bv1(ctx),
        "bv1i": g_bv1(ctx, -1),
        "v1": g_from_v(ctx, gen_v(ctx, 1)),
        "v1i": g_from_v(ctx, gen_v(ctx, 1, -1)),
        "av1": g_mul(ctx, g_from_q(ctx, q_a(ctx)), g_from_v(ctx, gen_v(ctx, 1))),
        "av1i": g_mul(ctx, g_from_q(ctx, q_a(ctx)), g_from_v(ctx, gen_v(ctx, 1, -1))),
        "a-vn": g_mul(ctx, g_from_q(ctx, a_inv), g_from_v(ctx, gen_v(ctx, n))),
        "a-vni": g_mul(ctx, g_from_q(ctx, a_inv), g_from_v(ctx, gen_v(ctx, n, -1))),
        "abvni": g_mul(ctx, g_ab(ctx), g_from_v(ctx, gen_v(ctx, n, -1))),
        "a2bvn": g_mul(ctx, g_from_q(ctx, QElem(2, 1)), g_from_v(ctx, gen_v(ctx, n))),
        "a2bvni": g_mul(ctx, g_from_q(ctx, QElem(2, 1)), g_from_v(ctx, gen_v(ctx, n, -1))),
        "abvn": g_mul(ctx, g_ab(ctx), g_from_v(ctx, gen_v(ctx, n))),
    }
    tree = [
        ("1", "ab"),
        ("1", "bv1"),
        ("1", "bv1i"),
        ("ab", "a-vn"),
        ("ab", "a-vni"),
        ("a-vn", "abvni"),
        ("a-vn", "a2bvn"),
        ("a-vni", "a2bvni"),
        ("a-vni", "abvn"),
        ("bv1", "v1i"),
        ("bv1", "av1"),
        ("bv1i", "v1"),
        ("bv1i", "av1i"),
    ]
    return elems, tree


@pytest.mark.parametrize("m", [1, 2])
def test_radius_two_ball_matches_local_tree(m):
    ctx = context(m)
    graph = gamma(m)
    elems, tree = _figure_vertices(ctx)
    ids = {name: coset_id_of(graph, g) for name, g in elems.items()}
    assert len(set(ids.values())) == 14
    sub = ball(graph, [ids["1"], ids["ab"]], 2)
    assert sub.n == 14
    original = sub.meta["vertices"]
    back = {orig: i for i, orig in enumerate(original)}
    expected_edges = {
        (min(back[ids[u]], back[ids[w]]), max(back[ids[u]], back[ids[w]]))
        for u, w in tree
    }
    assert set(sub.edges()) == expected_edges
    assert sub.edge_count() == 13


def test_ball_radius_zero():
    graph = gamma(1)
    sub = ball(graph, 5, 0)
    assert sub.n == 1 and sub.edge_count() == 0


def test_ball_distances_consistent():
    graph = gamma(1)
    dist = bfs_distances(graph, 0)
    sub = ball(graph, 0, 2)
    assert sorted(sub.meta["vertices"]) == [v for v in range(graph.n) if 0 <= dist[v] <= 2]


def test_singleton_quotient_reproduces_graph():
    graph = gamma(1)
    quotient = normal_quotient(graph, singleton_partition(graph))
    assert quotient.n == graph.n and quotient.adj == graph.adj


def test_one_block_quotient_is_a_point():
    graph = gamma(1)
    part = Partition((0,) * graph.n, 1)
    quotient = normal_quotient(graph, part)
    assert quotient.n == 1 and quotient.edge_count() == 0


@pytest.mark.parametrize("m", [1, 2])
def test_quotient_by_v_orbits_is_a_cycle(m):
    ctx = context(m)
    graph = gamma(m)
    gens = [g_from_v(ctx, gen_v(ctx, i)) for i in range(1, ctx.n + 1)]
    gens.append(g_from_v(ctx, z_elem(ctx)))
    part = orbit_partition(graph, gens)
    expected_blocks = 2 ** (m + 1)
    assert part.n_blocks == expected_blocks
    sizes = [part.block_of.count(b) for b in range(part.n_blocks)]
    assert set(sizes) == {graph.n // expected_blocks}
    quotient = normal_quotient(graph, part)
    assert degree_sequence(quotient) == (2,) * expected_blocks
    assert is_connected(quotient)
    assert quotient.n == expected_blocks


def test_quotient_of_connected_graph_is_connected():
    graph = gamma(1)
    ctx = context(1)
    part = orbit_partition(graph, [g_from_v(ctx, gen_v(ctx, 1))])
    assert is_connected(normal_quotient(graph, part))


def test_orbit_partition_no_generators():
    graph = gamma(1)
    part = orbit_partition(graph, [])
    assert part.n_blocks == graph.n


def test_orbit_partition_full_group_single_block():
    ctx = context(1)
    part = orbit_partition(gamma(1), standard_generators(ctx))
    assert part.n_blocks == 1


def test_edge_list_round_trip():
    graph = gamma(1)
    text = to_edge_list(graph)
    lines = text.splitlines()
    assert lines[0] == "108 162"
    parsed = parse_edge_list(text)
    assert parsed.n == graph.n and parsed.adj == graph.adj
    assert to_edge_list(parsed) == text


def test_edge_list_parse_errors():
    with pytest.raises(ParameterError):
        parse_edge_list("")
    with pytest.raises(ParameterError):
        parse_edge_list("2 1\n")
    with pytest.raises(ParameterError):
        parse_edge_list("2 1\n0 x\n")


def test_label_map_schema():
    graph = gamma(1)
    data = label_map(graph)
    assert data["m"] == 1
    assert len(data["labels"]) == 108
    home = data["labels"]["0"]
    assert home == "a^0 b^0 v=[0,0] z^0"
    ctx = context(1)
    w = canonical_coset(ctx, g_bv1(ctx))
    vid = coset_vertex_id(graph, w)
    assert data["labels"][str(vid)] == vertex_label(graph, vid)
    assert vertex_coset(graph, vid) == w


def test_partition_validation():
    with pytest.raises(ParameterError):
        Partition((0, 2), 2)  # block 1 empty


def test_ball_validation():
    graph = cycle_graph(6)
    with pytest.raises(ParameterError):
        ball(graph, 0, -1)
    with pytest.raises(ParameterError):
        ball(graph, 99, 1)


def test_cycles_through_validation():
    graph = cycle_graph(6)
    with pytest.raises(ParameterError):
        cycles_through(graph, [0, 1, 2, 3], 6)
    with pytest.raises(ParameterError):
        cycles_through(graph, [0, 0], 6)
    with pytest.raises(ParameterError):
        cycles_through(graph, [0], 13)
    with pytest.raises(ParameterError):
        cycles_through(graph, [77], 6)
    assert cycles_through(graph, [0], 2) == []


def test_graph_from_edges_validation():
    with pytest.raises(ParameterError):
        graph_from_edges(2, [(0, 0)])
    with pytest.raises(ParameterError):
        graph_from_edges(2, [(0, 5)])


def test_coset_graph_with_twisted_multipliers():
    # the product of the two lowest generators does not close up under the
    # stabilizer twist, so the builder must sweep both twist images; the
    # result is still a valid graph since the connection is inverse-closed
    ctx = context(1)
    from cubicvt.extraspecial import v_inv, v_mul

    w = v_mul(ctx, gen_v(ctx, 1), gen_v(ctx, 2))
    conn = [g_from_v(ctx, w), g_from_v(ctx, v_inv(ctx, w))]
    graph = coset_graph(ctx, conn)
    validate_graph(graph)
    assert set(degree_sequence(graph)) <= {2, 3, 4}
    assert max(degree_sequence(graph)) == 4  # the twist contributes new arcs

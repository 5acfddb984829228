"""Command-line front end: build graphs, run the verification suite, emit
certificates, quotients, Cayley graphs, and primitive-prime-divisor queries.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 capacity exceeded.  All outputs are deterministic; identical invocations
produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, ff3
from .codes import engine
from .errors import CapacityError, ParameterError
from .extraspecial import aut_a, aut_b, context, gen_v, matrix_on_W
from .graphs import (
    ball,
    coset_vertex_id,
    cycles_through,
    degree_sequence,
    gamma,
    is_connected,
    label_map,
    normal_quotient,
    orbit_partition,
    parse_edge_list,
    singleton_partition,
    to_edge_list,
    vertex_numbering_descriptor,
    Partition,
)
from .groupg import (
    QElem,
    canonical_coset,
    g_ab,
    g_bv1,
    g_from_q,
    g_from_v,
    g_identity,
    g_mul,
    max_semiregular_order,
    q_a,
    standard_generators,
)
from .numth import primitive_prime_divisor
from .permaut import (
    graph_automorphisms,
    mult_perm,
    semiregular_elements,
    stabilizer_analysis,
    verify_subgroup_action,
)

LEMMA_CHOICES = ("all", "1", "2", "4", "semireg", "qirr", "figure1", "stab")
_AUT_LIMIT = 2  # automorphism search is feasible for m <= 2 only


def order_of_group(m: int) -> int:
    return 2 ** (m + 2) * 3 ** (2 ** m + 1)


class _Work:
    """Shared lazily computed objects for one verification run."""

    def __init__(self, m: int):
        self.m = m
        self.ctx = context(m)
        self._graph = None
        self._aut = None

    def graph(self):
        if self._graph is None:
            self._graph = gamma(self.m)
        return self._graph

    def aut(self):
        if self.m > _AUT_LIMIT:
            raise CapacityError(
                f"automorphism search supports m <= {_AUT_LIMIT} "
                f"({self.graph().n} vertices at m={self.m})"
            )
        if self._aut is None:
            self._aut = graph_automorphisms(self.graph())
        return self._aut


def check_scale(work: _Work) -> dict:
    graph = work.graph()
    m = work.m
    expected_v = 2 ** (m + 1) * 3 ** (2 ** m + 1)
    cubic = degree_sequence(graph) == (3,) * graph.n
    connected = is_connected(graph)
    ok = graph.n == expected_v and graph.edge_count() == expected_v * 3 // 2
    ok = ok and cubic and connected
    return {
        "status": "pass" if ok else "fail",
        "vertex_count": graph.n,
        "expected_vertex_count": expected_v,
        "edge_count": graph.edge_count(),
        "is_cubic": cubic,
        "is_connected": connected,
    }


def check_stabilizer_two_group(work: _Work) -> dict:
    try:
        aut = work.aut()
    except CapacityError as exc:
        return {"status": "skipped", "reason": str(exc)}
    info = stabilizer_analysis(aut, work.graph(), 0)
    aut_order = aut.order()
    target = order_of_group(work.m)
    index_ok = aut_order % target == 0
    index = aut_order // target if index_ok else None
    index_two_power = index is not None and (index & (index - 1)) == 0
    ok = info.stab_is_2_group and index_two_power
    return {
        "status": "pass" if ok else "fail",
        "stab_order": info.stab_order,
        "stab_is_2_group": info.stab_is_2_group,
        "acting_group_index": index,
        "index_is_2_power": index_two_power,
    }


def check_aut_equals_group(work: _Work) -> dict:
    try:
        aut = work.aut()
    except CapacityError as exc:
        return {"status": "skipped", "reason": str(exc)}
    aut_order = aut.order()
    target = order_of_group(work.m)
    gp = verify_subgroup_action(work.graph(), standard_generators(work.ctx))
    members = all(aut.contains(p) for p in gp.elements())
    out = {
        "status": "pass" if (aut_order == target and members) else "fail",
        "aut_order": aut_order,
        "acting_group_order": target,
        "acting_group_contained": members,
    }
    if aut_order != target:
        out["note"] = (
            "the full symmetry group is larger than the acting group; at m=1 "
            "an extra involution fixes the base vertex and its neighborhood"
        )
    return out


def check_semiregular(work: _Work) -> dict:
    top, spectrum = max_semiregular_order(work.ctx)
    ok = spectrum <= {1, 2, 3, 6}
    out = {
        "status": "pass" if ok else "fail",
        "max_semiregular_order": top,
        "spectrum": sorted(spectrum),
    }
    if work.m == 1:
        gp = verify_subgroup_action(work.graph(), standard_generators(work.ctx))
        cycle_view = semiregular_elements(gp)
        out["cycle_type_spectrum"] = sorted(cycle_view)
        if cycle_view != spectrum:
            out["status"] = "fail"
    return out


def check_module_irreducibility(work: _Work) -> dict:
    ctx = work.ctx
    m = work.m
    n = ctx.n
    amat = matrix_on_W(ctx, aut_a(ctx))
    bmat = matrix_on_W(ctx, aut_b(ctx))
    irreducible = ff3.is_irreducible([amat, bmat])
    target_poly = (1,) + (0,) * (n - 1) + (1,)
    cp_ok = ff3.char_poly(amat) == target_poly
    out = {
        "status": "pass" if (irreducible and cp_ok) else "fail",
        "irreducible": irreducible,
        "char_poly_matches": cp_ok,
    }
    if m >= 2:
        h, q = n // 2, n // 4
        plus = [0] * (h + 1)
        plus[0], plus[q], plus[h] = 2, 1, 1
        minus = [0] * (h + 1)
        minus[0], minus[q], minus[h] = 2, 2, 1
        factor_ok = ff3.poly_mul(tuple(plus), tuple(minus)) == target_poly
        ah = ff3.mat_pow(amat, h)
        aq = ff3.mat_pow(amat, q)
        ident = ff3.identity(n)
        mplus = ff3.mat_add(ff3.mat_add(ah, aq), ff3.mat_neg(ident))
        mminus = ff3.mat_add(ff3.mat_add(ah, ff3.mat_neg(aq)), ff3.mat_neg(ident))
        kplus = ff3.kernel(mplus)
        kminus = ff3.kernel(mminus)
        dims_ok = len(kplus) == len(kminus) == n // 2
        swap_ok = ff3.span_equal(
            [ff3.mat_vec(bmat, v) for v in kplus], kminus
        )
        out.update(
            factorization_identity=factor_ok,
            half_dimensions=[len(kplus), len(kminus)],
            b_swaps_halves=swap_ok,
        )
        if not (factor_ok and dims_ok and swap_ok):
            out["status"] = "fail"
    return out


def _figure_cosets(work: _Work) -> dict[str, int]:
    ctx = work.ctx
    graph = work.graph()
    n = ctx.n
    a1 = g_from_q(ctx, q_a(ctx))
    a_inv = g_from_q(ctx, q_a(ctx, -1))
    vn = g_from_v(ctx, gen_v(ctx, n))
    vni = g_from_v(ctx, gen_v(ctx, n, -1))
    elems = {
        "1": g_identity(ctx),
        "ab": g_ab(ctx),
        "bv1": g_bv1(ctx),
        "bv1i": g_bv1(ctx, -1),
        "v1": g_from_v(ctx, gen_v(ctx, 1)),
        "v1i": g_from_v(ctx, gen_v(ctx, 1, -1)),
        "av1": g_mul(ctx, a1, g_from_v(ctx, gen_v(ctx, 1))),
        "av1i": g_mul(ctx, a1, g_from_v(ctx, gen_v(ctx, 1, -1))),
        "a-vn": g_mul(ctx, a_inv, vn),
        "a-vni": g_mul(ctx, a_inv, vni),
        "abvni": g_mul(ctx, g_ab(ctx), vni),
        "a2bvn": g_mul(ctx, g_from_q(ctx, QElem(2, 1)), vn),
        "a2bvni": g_mul(ctx, g_from_q(ctx, QElem(2, 1)), vni),
        "abvn": g_mul(ctx, g_ab(ctx), vn),
    }
    return {
        name: coset_vertex_id(graph, canonical_coset(ctx, g))
        for name, g in elems.items()
    }


_LOCAL_TREE = (
    ("1", "ab"), ("1", "bv1"), ("1", "bv1i"),
    ("ab", "a-vn"), ("ab", "a-vni"),
    ("a-vn", "abvni"), ("a-vn", "a2bvn"),
    ("a-vni", "a2bvni"), ("a-vni", "abvn"),
    ("bv1", "v1i"), ("bv1", "av1"),
    ("bv1i", "v1"), ("bv1i", "av1i"),
)


def check_local_structure(work: _Work) -> dict:
    ctx = work.ctx
    graph = work.graph()
    ids = _figure_cosets(work)
    distinct = len(set(ids.values())) == 14
    hexagon = cycles_through(graph, [ids["1"], ids["bv1"], ids["bv1i"]], 6)
    blocked = cycles_through(graph, [ids["1"], ids["ab"], ids["bv1"]], 6)
    sub = ball(graph, [ids["1"], ids["ab"]], 2)
    back = {orig: i for i, orig in enumerate(sub.meta["vertices"])}
    tree_edges = {
        (min(back[ids[u]], back[ids[w]]), max(back[ids[u]], back[ids[w]]))
        for u, w in _LOCAL_TREE
    }
    ball_ok = sub.n == 14 and set(sub.edges()) == tree_edges
    ok = distinct and bool(hexagon) and not blocked and ball_ok
    return {
        "status": "pass" if ok else "fail",
        "labeled_cosets_distinct": distinct,
        "six_cycle_through_both_reflections": bool(hexagon),
        "six_cycles_through_ab_and_bv1": len(blocked),
        "radius_two_ball_is_the_13_edge_tree": ball_ok,
    }


def check_stabilizer_structure(work: _Work) -> dict:
    try:
        aut = work.aut()
    except CapacityError as exc:
        return {"status": "skipped", "reason": str(exc)}
    info = stabilizer_analysis(aut, work.graph(), 0)
    consistent = info.stab_order == info.local_action_size * info.kernel_order
    structure_ok = info.kernel_is_2_group and (
        info.stab_is_2_group
        or (info.local_action_transitive and info.stab_order % 3 == 0)
    )
    return {
        "status": "pass" if (consistent and structure_ok) else "fail",
        "stab_order": info.stab_order,
        "local_action_size": info.local_action_size,
        "kernel_order": info.kernel_order,
        "kernel_is_2_group": info.kernel_is_2_group,
        "local_action_transitive": info.local_action_transitive,
    }


_CHECKS = {
    "1": check_scale,
    "2": check_stabilizer_two_group,
    "4": check_aut_equals_group,
    "semireg": check_semiregular,
    "qirr": check_module_irreducibility,
    "figure1": check_local_structure,
    "stab": check_stabilizer_structure,
}


def run_checks(m: int, selectors) -> dict:
    work = _Work(m)
    results = {}
    for sel in selectors:
        results[sel] = _CHECKS[sel](work)
    cert = {
        "m": m,
        "tool_version": __version__,
        "vertex_numbering": vertex_numbering_descriptor(work.ctx),
        "vertex_count": None,
        "edge_count": None,
        "is_cubic": None,
        "is_connected": None,
        "aut_order": None,
        "aut_generators": None,
        "stab_order": None,
        "semiregular_spectrum": None,
        "lemma_results": results,
    }
    scale = results.get("1")
    if scale:
        cert.update(
            vertex_count=scale["vertex_count"],
            edge_count=scale["edge_count"],
            is_cubic=scale["is_cubic"],
            is_connected=scale["is_connected"],
        )
    if "4" in results and results["4"]["status"] != "skipped":
        cert["aut_order"] = results["4"]["aut_order"]
        cert["aut_generators"] = [list(p) for p in work.aut().generators]
    if "2" in results and results["2"]["status"] != "skipped":
        cert["stab_order"] = results["2"]["stab_order"]
    if "stab" in results and results["stab"]["status"] != "skipped":
        cert["stab_order"] = results["stab"]["stab_order"]
    if "semireg" in results:
        cert["semiregular_spectrum"] = results["semireg"]["spectrum"]
    return cert


# -- commands ------------------------------------------------------------------


def cmd_build(args) -> int:
    graph = gamma(args.m)
    text = to_edge_list(graph)
    if args.out:
        with open(args.out + ".edges", "w") as fh:
            fh.write(text)
        labels = json.dumps(label_map(graph), sort_keys=True, indent=2) + "\n"
        with open(args.out + ".labels.json", "w") as fh:
            fh.write(labels)
        print(f"wrote {args.out}.edges and {args.out}.labels.json")
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args) -> int:
    selectors = list(_CHECKS) if args.lemma == "all" else [args.lemma]
    cert = run_checks(args.m, selectors)
    for sel in selectors:
        res = cert["lemma_results"][sel]
        line = f"check {sel}: {res['status']}"
        if res["status"] == "skipped":
            line += f" ({res['reason']})"
        print(line)
    payload = json.dumps(cert, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    if args.json:
        sys.stdout.write(payload)
    failed = [s for s in selectors if cert["lemma_results"][s]["status"] == "fail"]
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def cmd_ppd(args) -> int:
    res = primitive_prime_divisor(args.x, args.f)
    if res.exists:
        print(f"{res.prime}")
    elif res.exception_kind == "two_six":
        print("none (exception: 2^6-1)")
    elif res.exception_kind == "mersenne_f2":
        print(f"none (exception: {args.x} = 2^y-1 with f = 2)")
    elif res.exception_kind == "degenerate":
        print("none (degenerate: 2^1-1 = 1)")
    else:
        print("none")
    return 0


def _load_labeled_coset_graph(edges_path: str, labels_path: str):
    with open(edges_path) as fh:
        graph = parse_edge_list(fh.read())
    with open(labels_path) as fh:
        meta = json.load(fh)
    m = meta.get("m")
    if not isinstance(m, int):
        raise ParameterError("labels file carries no size parameter m")
    ctx = context(m)
    eng = engine(m)
    if graph.n != eng.vertex_count:
        raise ParameterError(
            f"edge list has {graph.n} vertices; m={m} implies {eng.vertex_count}"
        )
    rebuilt = gamma(m)
    if rebuilt.adj != graph.adj:
        raise ParameterError("edge list does not match the canonical construction")
    return rebuilt, ctx


def cmd_quotient(args) -> int:
    spec = args.by
    if spec == "V":
        if not args.labels:
            raise ParameterError("--by V needs --labels from the build step")
        graph, ctx = _load_labeled_coset_graph(args.infile, args.labels)
        gens = [g_from_v(ctx, gen_v(ctx, i)) for i in range(1, ctx.n + 1)]
        part = orbit_partition(graph, gens)
    else:
        with open(args.infile) as fh:
            graph = parse_edge_list(fh.read())
        if spec == "singletons":
            part = singleton_partition(graph)
        elif spec.startswith("blocks:"):
            with open(spec.split(":", 1)[1]) as fh:
                block_of = json.load(fh)
            if not isinstance(block_of, list) or len(block_of) != graph.n:
                raise ParameterError("block file must list one block id per vertex")
            part = Partition(tuple(block_of), max(block_of) + 1)
        else:
            raise ParameterError(f"unknown partition spec {spec!r}")
    quotient = normal_quotient(graph, part)
    text = to_edge_list(quotient)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_cayley(args) -> int:
    with open(args.group) as fh:
        rows = [ln.split() for ln in fh.read().splitlines() if ln.strip()]
    try:
        gens = [tuple(int(v) for v in row) for row in rows]
    except ValueError as exc:
        raise ParameterError(f"malformed permutation file: {exc}") from None
    if not gens:
        raise ParameterError("the group file lists no generators")
    degree = len(gens[0])
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise ParameterError(f"not a permutation of 0..{degree - 1}: {g}")
    ident = tuple(range(degree))
    elements = {ident}
    frontier = [ident]
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = mult_perm(p, g)
            if q not in elements:
                elements.add(q)
                frontier.append(q)
    ordered = sorted(elements)
    try:
        conn_idx = [int(tok) for tok in args.conn.split(",") if tok.strip()]
    except ValueError as exc:
        raise ParameterError(f"malformed connection spec: {exc}") from None
    if any(not 0 <= i < len(ordered) for i in conn_idx):
        raise ParameterError("connection index out of range")
    from .graphs import cayley_graph

    graph = cayley_graph(ordered, [ordered[i] for i in conn_idx], mult_perm)
    text = to_edge_list(graph)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _size_parameter(token: str) -> int:
    try:
        m = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if m not in (1, 2, 3):
        raise argparse.ArgumentTypeError(
            f"desk-scale capacity allows m in {{1, 2, 3}}, got {m}"
        )
    return m


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubicvt",
        description=(
            "Build and verify the family of cubic vertex-transitive coset "
            "graphs with bounded semiregular order."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="reserved; all computations are deterministic and single-threaded",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="emit the edge list and label map")
    p_build.add_argument("-m", type=_size_parameter, required=True)
    p_build.add_argument("--out", help="path prefix for .edges and .labels.json")
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("-m", type=_size_parameter, required=True)
    p_verify.add_argument("--lemma", choices=LEMMA_CHOICES, default="all")
    p_verify.add_argument("--out", help="write the JSON certificate here")
    p_verify.add_argument(
        "--json", action="store_true", help="print the certificate to stdout"
    )
    p_verify.set_defaults(func=cmd_verify)

    p_ppd = sub.add_parser("ppd", help="smallest primitive prime divisor of x^f-1")
    p_ppd.add_argument("x", type=int)
    p_ppd.add_argument("f", type=int)
    p_ppd.set_defaults(func=cmd_ppd)

    p_quot = sub.add_parser("quotient", help="normal quotient of an edge list")
    p_quot.add_argument("--in", dest="infile", required=True)
    p_quot.add_argument("--labels", help="label map (needed for --by V)")
    p_quot.add_argument("--by", required=True, help="V | singletons | blocks:FILE")
    p_quot.add_argument("--out")
    p_quot.set_defaults(func=cmd_quotient)

    p_cay = sub.add_parser("cayley", help="Cayley graph from permutation generators")
    p_cay.add_argument("--group", required=True, help="file of generator image rows")
    p_cay.add_argument("--conn", required=True, help="comma-separated element indices")
    p_cay.add_argument("--out")
    p_cay.set_defaults(func=cmd_cayley)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return 3
    except (ParameterError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()

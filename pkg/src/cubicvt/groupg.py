"""The dihedral extension acting on the exponent-3 group, the coset space it
acts on by right multiplication, and semiregularity analysis of that action.

Group elements are pairs (q, v) with q dihedral and v in the exponent-3
group, multiplied by (x v)(y w) = (x y)(v^y w).  The point stabilizer is the
two-element subgroup generated by the half-turn rotation, so a non-identity
element fixes a coset exactly when it is conjugate to that half-turn.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import engine
from .errors import CapacityError, ParameterError
from .extraspecial import (
    GroupContext,
    VElem,
    apply_aut,
    gen_v,
    identity_v,
    v_inv,
    v_mul,
)


@dataclass(frozen=True, slots=True)
class QElem:
    """Dihedral element a^j b^eps with 0 <= j < 2^(m+1) and eps in {0, 1}."""

    j: int
    eps: int


@dataclass(frozen=True, slots=True)
class GElem:
    q: QElem
    v: VElem


@dataclass(frozen=True, slots=True)
class CosetIndex:
    """Canonical coset representative H a^j b^eps v with j < 2^m."""

    j: int
    eps: int
    v: VElem


@dataclass(frozen=True, slots=True)
class SemiregReport:
    element: GElem
    order: int
    semiregular: bool
    witness: CosetIndex | None


# -- constructors ------------------------------------------------------------


def q_identity(ctx: GroupContext) -> QElem:
    return QElem(0, 0)


def q_a(ctx: GroupContext, power: int = 1) -> QElem:
    return QElem(power % ctx.order_a, 0)


def q_b(ctx: GroupContext) -> QElem:
    return QElem(0, 1)


def q_half_turn(ctx: GroupContext) -> QElem:
    """The central involution a^(2^m), the generator of the point stabilizer."""
    return QElem(ctx.order_a // 2, 0)


def g_identity(ctx: GroupContext) -> GElem:
    return GElem(q_identity(ctx), identity_v(ctx))


def g_from_q(ctx: GroupContext, q: QElem) -> GElem:
    return GElem(QElem(q.j % ctx.order_a, q.eps & 1), identity_v(ctx))


def g_from_v(ctx: GroupContext, v: VElem) -> GElem:
    return GElem(q_identity(ctx), v)


def g_ab(ctx: GroupContext) -> GElem:
    return GElem(QElem(1, 1), identity_v(ctx))


def g_bv1(ctx: GroupContext, exponent: int = 1) -> GElem:
    return GElem(QElem(0, 1), gen_v(ctx, 1, exponent))


def standard_generators(ctx: GroupContext) -> list[GElem]:
    """a, b and v_1; these generate the whole group."""
    return [g_from_q(ctx, q_a(ctx)), g_from_q(ctx, q_b(ctx)), g_from_v(ctx, gen_v(ctx, 1))]


# -- dihedral arithmetic -------------------------------------------------------


def q_mul(ctx: GroupContext, p: QElem, q: QElem) -> QElem:
    j = (p.j + (q.j if p.eps == 0 else -q.j)) % ctx.order_a
    return QElem(j, p.eps ^ q.eps)


def q_inv(ctx: GroupContext, q: QElem) -> QElem:
    if q.eps:
        return q
    return QElem((-q.j) % ctx.order_a, 0)


def q_order(ctx: GroupContext, q: QElem) -> int:
    k, acc = 1, q
    while acc != QElem(0, 0):
        acc = q_mul(ctx, acc, q)
        k += 1
    return k


def q_action(ctx: GroupContext, q: QElem, v: VElem) -> VElem:
    """v^q, the conjugation action of the dihedral part."""
    return apply_aut(ctx, ctx.q_action_aut(q.j, q.eps), v)


# -- semidirect product arithmetic --------------------------------------------


def g_mul(ctx: GroupContext, g: GElem, h: GElem) -> GElem:
    return GElem(q_mul(ctx, g.q, h.q), v_mul(ctx, q_action(ctx, h.q, g.v), h.v))


def g_inv(ctx: GroupContext, g: GElem) -> GElem:
    qi = q_inv(ctx, g.q)
    return GElem(qi, q_action(ctx, qi, v_inv(ctx, g.v)))


def g_pow(ctx: GroupContext, g: GElem, k: int) -> GElem:
    if k < 0:
        return g_pow(ctx, g_inv(ctx, g), -k)
    acc = g_identity(ctx)
    for _ in range(k):
        acc = g_mul(ctx, acc, g)
    return acc


def g_conj(ctx: GroupContext, g: GElem, x: GElem) -> GElem:
    return g_mul(ctx, g_inv(ctx, x), g_mul(ctx, g, x))


def g_order(ctx: GroupContext, g: GElem) -> int:
    ident = g_identity(ctx)
    acc = g
    limit = 3 * ctx.order_a
    for k in range(1, limit + 1):
        if acc == ident:
            return k
        acc = g_mul(ctx, acc, g)
    raise AssertionError(f"element order exceeded the group exponent bound {limit}")


def central_involution(ctx: GroupContext) -> GElem:
    return g_from_q(ctx, q_half_turn(ctx))


# -- the coset space -----------------------------------------------------------


def coset_count(ctx: GroupContext) -> int:
    return 2 ** (ctx.m + 1) * 3 ** (ctx.n + 1)


def canonical_coset(ctx: GroupContext, g: GElem) -> CosetIndex:
    """Representative of Hg with the rotation exponent reduced below 2^m.
    Left-multiplying by the half-turn changes only the rotation exponent."""
    return CosetIndex(g.q.j % (ctx.order_a // 2), g.q.eps & 1, g.v)


def coset_rep(ctx: GroupContext, w: CosetIndex) -> GElem:
    return GElem(QElem(w.j, w.eps), w.v)


def coset_act(ctx: GroupContext, w: CosetIndex, g: GElem) -> CosetIndex:
    return canonical_coset(ctx, g_mul(ctx, coset_rep(ctx, w), g))


def same_coset(ctx: GroupContext, g: GElem, h: GElem) -> bool:
    """Membership oracle: Hg = Hh exactly when g h^{-1} lies in H."""
    d = g_mul(ctx, g, g_inv(ctx, h))
    return d == g_identity(ctx) or d == central_involution(ctx)


def all_cosets(ctx: GroupContext):
    """Canonical coset indices in vertex-id order (m <= 3)."""
    eng = engine(ctx.m)
    for vid in range(eng.vertex_count):
        j, eps, vc = eng.decode_vertex(vid)
        yield CosetIndex(j, eps, eng.decode_v(vc))


def all_group_elements(ctx: GroupContext):
    """Every group element, rotations outermost (m <= 3)."""
    eng = engine(ctx.m)
    for qc in range(eng.q_count):
        j, eps = eng.decode_q(qc)
        q = QElem(j, eps)
        for vc in range(eng.v_count):
            yield GElem(q, eng.decode_v(vc))


# -- fixed points and semiregularity -------------------------------------------


def _class_conjugators(ctx: GroupContext) -> dict[int, tuple[int, int]]:
    return engine(ctx.m).involution_class()


def fixed_point_free(ctx: GroupContext, g: GElem) -> bool:
    """Whether g moves every coset.  A non-identity element has a fixed
    coset exactly when it is conjugate to the half-turn involution."""
    if g == g_identity(ctx):
        raise ParameterError("the identity fixes everything; pass a non-identity element")
    eng = engine(ctx.m)
    if eng.encode_q(g.q.j, g.q.eps) != eng.t_qcode:
        return True
    return eng.encode_v(g.v) not in _class_conjugators(ctx)


def fixed_point_free_scan(ctx: GroupContext, g: GElem) -> bool:
    """Independent route: scan the whole coset space for a fixed point."""
    if g == g_identity(ctx):
        raise ParameterError("the identity fixes everything; pass a non-identity element")
    eng = engine(ctx.m)
    code = (eng.encode_q(g.q.j, g.q.eps), eng.encode_v(g.v))
    act = eng.act_vertex
    return all(act(vid, code) != vid for vid in range(eng.vertex_count))


def _prime_factors(k: int) -> list[int]:
    out = []
    d = 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def is_semiregular(ctx: GroupContext, g: GElem) -> SemiregReport:
    """Semiregularity via prime-order powers: fixed points of any power are
    fixed points of a prime-order power, so those are the only ones checked."""
    k = g_order(ctx, g)
    if k == 1:
        return SemiregReport(g, 1, True, None)
    eng = engine(ctx.m)
    for p in _prime_factors(k):
        h = g_pow(ctx, g, k // p)
        if not fixed_point_free(ctx, h):
            conj = _class_conjugators(ctx)[eng.encode_v(h.v)]
            qj, qe = eng.decode_q(conj[0])
            x = GElem(QElem(qj, qe), eng.decode_v(conj[1]))
            witness = canonical_coset(ctx, x)
            return SemiregReport(g, k, False, witness)
    return SemiregReport(g, k, True, None)


def max_semiregular_order(ctx: GroupContext) -> tuple[int, set[int]]:
    """Scan the whole group; returns the maximum semiregular order and the
    full set of orders attained by semiregular elements."""
    if ctx.m > 3:
        raise CapacityError(f"full-group scan supports m <= 3, got m={ctx.m}")
    spectrum = engine(ctx.m).semiregular_spectrum()
    return max(spectrum), spectrum

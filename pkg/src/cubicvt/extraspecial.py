"""The exponent-3 extraspecial group of order 3^(2^m + 1) in normal form,
together with the two automorphisms that generate a dihedral action on it.

Elements are written v_1^{x_1} ... v_n^{x_n} z^c with n = 2^m.  Multiplying
two normal forms adds the exponent vectors and corrects the central exponent
by the cocycle picked up when the right factor's generators are collected
past the left factor's.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import ff3
from .errors import ContractViolation, ParameterError


@dataclass(frozen=True, slots=True)
class VElem:
    """Normal-form element: exponent vector x over F3 plus central exponent c."""

    x: tuple[int, ...]
    c: int


@dataclass(frozen=True, slots=True)
class VAut:
    """Automorphism given by generator images and the exponent of z's image."""

    images: tuple[VElem, ...]
    z_image: int


class GroupContext:
    """Parameters derived from m, shared by every operation at that size."""

    def __init__(self, m: int):
        if not isinstance(m, int) or m < 1:
            raise ParameterError(f"m must be a positive integer, got {m!r}")
        self.m = m
        self.n = 2 ** m
        self.order_a = 2 ** (m + 1)
        self.order_q = 2 ** (m + 2)
        self.order_v = 3 ** (self.n + 1)
        self.jmat = ff3.build_J(m)
        self._aut_cache: dict[tuple[int, int], VAut] = {}

    def __repr__(self):
        return f"GroupContext(m={self.m})"

    def a_power_aut(self, j: int) -> VAut:
        return self.q_action_aut(j, 0)

    def q_action_aut(self, j: int, eps: int) -> VAut:
        """Automorphism table for a^j b^eps, memoized per context."""
        j %= self.order_a
        eps &= 1
        key = (j, eps)
        cached = self._aut_cache.get(key)
        if cached is not None:
            return cached
        if key == (0, 0):
            phi = identity_aut(self)
        elif eps == 0:
            phi = compose_auts(self, self.q_action_aut(j - 1, 0), aut_a(self))
        else:
            phi = compose_auts(self, self.q_action_aut(j, 0), aut_b(self))
        self._aut_cache[key] = phi
        return phi


@lru_cache(maxsize=None)
def context(m: int) -> GroupContext:
    return GroupContext(m)


def identity_v(ctx: GroupContext) -> VElem:
    return VElem((0,) * ctx.n, 0)


def gen_v(ctx: GroupContext, i: int, exponent: int = 1) -> VElem:
    """The generator v_i (1-based), optionally raised to a power."""
    if not 1 <= i <= ctx.n:
        raise ParameterError(f"generator index must be in [1, {ctx.n}], got {i}")
    return VElem(tuple(exponent % 3 if k == i - 1 else 0 for k in range(ctx.n)), 0)


def z_elem(ctx: GroupContext, exponent: int = 1) -> VElem:
    return VElem((0,) * ctx.n, exponent % 3)


def cocycle(ctx: GroupContext, x: tuple[int, ...], y: tuple[int, ...]) -> int:
    """Central correction picked up when y's generators move left past x's:
    sum over j > i of J[j][i] * x[j] * y[i]."""
    jm = ctx.jmat
    total = 0
    for j in range(1, ctx.n):
        xj = x[j]
        if xj:
            row = jm[j]
            total += xj * sum(row[i] * y[i] for i in range(j) if y[i])
    return total % 3


def v_mul(ctx: GroupContext, g: VElem, h: VElem) -> VElem:
    if len(g.x) != ctx.n or len(h.x) != ctx.n:
        raise ParameterError("element length does not match the context")
    x = tuple((a + b) % 3 for a, b in zip(g.x, h.x))
    return VElem(x, (g.c + h.c + cocycle(ctx, g.x, h.x)) % 3)


def v_inv(ctx: GroupContext, g: VElem) -> VElem:
    # Every element cubes to the identity, so the inverse is the square.
    return v_mul(ctx, g, g)


def v_pow(ctx: GroupContext, g: VElem, k: int) -> VElem:
    k %= 3
    if k == 0:
        return identity_v(ctx)
    if k == 1:
        return g
    return v_mul(ctx, g, g)


def v_commutator(ctx: GroupContext, g: VElem, h: VElem) -> VElem:
    gh = v_mul(ctx, g, h)
    hg = v_mul(ctx, h, g)
    return v_mul(ctx, v_inv(ctx, hg), gh)


def aut_a(ctx: GroupContext) -> VAut:
    """v_i -> v_{i+1} for i < n, v_n -> v_1^{-1}, z fixed."""
    images = tuple(
        gen_v(ctx, i + 1) if i < ctx.n else gen_v(ctx, 1, -1)
        for i in range(1, ctx.n + 1)
    )
    return VAut(images, 1)


def aut_b(ctx: GroupContext) -> VAut:
    """v_1 -> v_1^{-1}, v_i -> v_{n-i+2} for i > 1, z inverted."""
    images = tuple(
        gen_v(ctx, 1, -1) if i == 1 else gen_v(ctx, ctx.n - i + 2)
        for i in range(1, ctx.n + 1)
    )
    return VAut(images, 2)


def identity_aut(ctx: GroupContext) -> VAut:
    return VAut(tuple(gen_v(ctx, i) for i in range(1, ctx.n + 1)), 1)


def apply_aut(ctx: GroupContext, phi: VAut, g: VElem) -> VElem:
    """Image of g, recollected as the product of generator images."""
    acc = identity_v(ctx)
    for img, e in zip(phi.images, g.x):
        if e:
            acc = v_mul(ctx, acc, v_pow(ctx, img, e))
    if g.c:
        acc = v_mul(ctx, acc, z_elem(ctx, phi.z_image * g.c))
    return acc


def compose_auts(ctx: GroupContext, phi: VAut, psi: VAut) -> VAut:
    """Composite acting as phi first, then psi."""
    images = tuple(apply_aut(ctx, psi, img) for img in phi.images)
    return VAut(images, (phi.z_image * psi.z_image) % 3)


def is_identity_aut(ctx: GroupContext, phi: VAut) -> bool:
    return phi == identity_aut(ctx)


def verify_relations(ctx: GroupContext, phi: VAut) -> bool:
    """Whether phi preserves the defining relations: cubes trivial, central
    image central, and commutators matching the form matrix."""
    ident = identity_v(ctx)
    z_img = z_elem(ctx, phi.z_image)
    if phi.z_image % 3 == 0:
        return False
    for img in phi.images:
        if v_mul(ctx, v_mul(ctx, img, img), img) != ident:
            return False
        if v_commutator(ctx, img, z_img) != ident:
            return False
    for i in range(ctx.n):
        for j in range(ctx.n):
            want = z_elem(ctx, phi.z_image * ctx.jmat[i][j])
            if v_commutator(ctx, phi.images[i], phi.images[j]) != want:
                return False
    return True


def aut_order(ctx: GroupContext, phi: VAut) -> int:
    if not verify_relations(ctx, phi):
        raise ContractViolation("aut_order requires a relation-preserving map")
    ident = identity_aut(ctx)
    acc = phi
    limit = 4 * ctx.order_q
    for k in range(1, limit + 1):
        if acc == ident:
            return k
        acc = compose_auts(ctx, acc, phi)
    raise ContractViolation(f"order exceeds {limit}; map is not an automorphism")


def matrix_on_W(ctx: GroupContext, phi: VAut) -> ff3.Matrix:
    """Induced linear map on the quotient by the center; column i holds the
    exponent vector of the image of v_{i+1}."""
    return tuple(
        tuple(phi.images[col].x[row] for col in range(ctx.n)) for row in range(ctx.n)
    )

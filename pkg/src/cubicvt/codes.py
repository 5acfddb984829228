"""Mixed-radix integer encodings and precomputed action tables.

Every element of the exponent-3 group is packed into one int, every coset
vertex into one int, and the dihedral action is tabulated once per context.
The full-group scans and the larger graph builds run on these codes.

Encodings (n = 2^m):
  element code   vc = (sum of x_i * 3^(n-i)) * 3 + c
  rotation code  qc = j * 2 + eps                    (element a^j b^eps)
  vertex id      ((j * 2 + eps) * 3^n + x-code) * 3 + c   with j < 2^m
"""

from __future__ import annotations

from functools import lru_cache

from .errors import CapacityError
from .extraspecial import GroupContext, VElem, aut_a, aut_b, context

GCode = tuple[int, int]


def _digit_tuple(code: int, width: int) -> tuple[int, ...]:
    digits = []
    for _ in range(width):
        code, d = divmod(code, 3)
        digits.append(d)
    digits.reverse()
    return tuple(digits)


def _digit_code(digits) -> int:
    code = 0
    for d in digits:
        code = code * 3 + d
    return code


def _componentwise_add_table(width: int) -> list[list[int]]:
    size = 3 ** width
    digits = [_digit_tuple(c, width) for c in range(size)]
    table = []
    for a in range(size):
        da = digits[a]
        table.append(
            [_digit_code((p + q) % 3 for p, q in zip(da, digits[b])) for b in range(size)]
        )
    return table


class Engine:
    """Per-context lookup tables; valid for m <= 3 (element sets enumerable)."""

    def __init__(self, ctx: GroupContext):
        if ctx.m > 3:
            raise CapacityError(
                f"full enumeration needs 3^(2^m+1) elements; m={ctx.m} > 3"
            )
        self.ctx = ctx
        n = ctx.n
        self.n = n
        self.x_count = 3 ** n
        self.v_count = 3 ** (n + 1)
        self.q_count = ctx.order_q
        self.order_a = ctx.order_a
        self.half_turn = 2 ** ctx.m
        self.canon_q_count = 2 ** (ctx.m + 1)
        self.vertex_count = self.canon_q_count * self.v_count
        self.t_qcode = self.half_turn * 2

        self.xdigits = [_digit_tuple(c, n) for c in range(self.x_count)]
        jm = ctx.jmat
        self.uvec = [
            tuple(
                sum(jm[j][i] * yd[i] for i in range(j)) % 3 if j else 0
                for j in range(n)
            )
            for yd in self.xdigits
        ]
        lo_w = n // 2
        hi_w = n - lo_w
        self._pl = 3 ** lo_w
        self._hi = [c // self._pl for c in range(self.x_count)]
        self._lo = [c % self._pl for c in range(self.x_count)]
        self._add_hi = _componentwise_add_table(hi_w)
        self._add_lo = _componentwise_add_table(lo_w)
        self.vmul = self._make_vmul()

        self.qmul = [
            [self._qmul_raw(q1, q2) for q2 in range(self.q_count)]
            for q1 in range(self.q_count)
        ]
        self.qinv = [self._qinv_raw(q) for q in range(self.q_count)]
        self.qord = [self._qord_raw(q) for q in range(self.q_count)]
        self.act = self._build_action_tables()
        self._involution_class: dict[int, GCode] | None = None

    # -- scalar codecs ----------------------------------------------------

    def encode_x(self, x) -> int:
        return _digit_code(x)

    def encode_v(self, v: VElem) -> int:
        return _digit_code(v.x) * 3 + v.c

    def decode_v(self, vc: int) -> VElem:
        xc, c = divmod(vc, 3)
        return VElem(self.xdigits[xc], c)

    def encode_q(self, j: int, eps: int) -> int:
        return (j % self.order_a) * 2 + (eps & 1)

    def decode_q(self, qc: int) -> tuple[int, int]:
        return qc >> 1, qc & 1

    def vertex_id(self, j: int, eps: int, vc: int) -> int:
        return ((j % self.half_turn) * 2 + (eps & 1)) * self.v_count + vc

    def decode_vertex(self, vid: int) -> tuple[int, int, int]:
        qc, vc = divmod(vid, self.v_count)
        return qc >> 1, qc & 1, vc

    # -- group arithmetic on codes ----------------------------------------

    def _make_vmul(self):
        xd = self.xdigits
        uv = self.uvec
        ah = self._add_hi
        al = self._add_lo
        hi = self._hi
        lo = self._lo
        pl = self._pl

        def vmul(a: int, b: int) -> int:
            xa, ca = divmod(a, 3)
            xb, cb = divmod(b, 3)
            s = ca + cb
            for p, q in zip(xd[xa], uv[xb]):
                s += p * q
            return (ah[hi[xa]][hi[xb]] * pl + al[lo[xa]][lo[xb]]) * 3 + s % 3

        return vmul

    def _qmul_raw(self, q1: int, q2: int) -> int:
        j1, e1 = q1 >> 1, q1 & 1
        j2, e2 = q2 >> 1, q2 & 1
        j = (j1 + (j2 if e1 == 0 else -j2)) % self.order_a
        return j * 2 + (e1 ^ e2)

    def _qinv_raw(self, q: int) -> int:
        j, e = q >> 1, q & 1
        if e:
            return q
        return ((-j) % self.order_a) * 2

    def _qord_raw(self, q: int) -> int:
        k, acc = 1, q
        while acc != 0:
            acc = self.qmul[acc][q]
            k += 1
        return k

    def g_mul(self, g1: GCode, g2: GCode) -> GCode:
        q1, v1 = g1
        q2, v2 = g2
        return self.qmul[q1][q2], self.vmul(self.act[q2][v1], v2)

    def g_inv(self, g: GCode) -> GCode:
        q, v = g
        qi = self.qinv[q]
        return qi, self.act[qi][self.vmul(v, v)]

    def g_conj(self, g: GCode, x: GCode) -> GCode:
        return self.g_mul(self.g_inv(x), self.g_mul(g, x))

    # -- action tables ------------------------------------------------------

    def _table_from_aut(self, phi) -> list[int]:
        vmul = self.vmul
        imgpow = []
        for img in phi.images:
            c1 = self.encode_v(img)
            imgpow.append((0, c1, vmul(c1, c1)))
        zshift = phi.z_image % 3
        table = []
        for vc in range(self.v_count):
            xc, c = divmod(vc, 3)
            acc = 0
            for i, e in enumerate(self.xdigits[xc]):
                if e:
                    acc = vmul(acc, imgpow[i][e])
            if c:
                acc = vmul(acc, (zshift * c) % 3)
            table.append(acc)
        return table

    def _build_action_tables(self) -> list[list[int]]:
        ta = self._table_from_aut(aut_a(self.ctx))
        tb = self._table_from_aut(aut_b(self.ctx))
        tables: list[list[int]] = [None] * self.q_count  # type: ignore[list-item]
        cur = list(range(self.v_count))
        tables[0] = cur
        for j in range(1, self.order_a):
            cur = [ta[x] for x in cur]
            tables[j * 2] = cur
        for j in range(self.order_a):
            taj = tables[j * 2]
            tables[j * 2 + 1] = [tb[x] for x in taj]
        return tables

    # -- coset action -------------------------------------------------------

    def act_vertex(self, vid: int, g: GCode) -> int:
        """Right multiplication of the coset with this id by g."""
        qg, vg = g
        qr, vr = divmod(vid, self.v_count)
        qp = self.qmul[qr][qg]
        vp = self.vmul(self.act[qg][vr], vg)
        return (((qp >> 1) % self.half_turn) * 2 + (qp & 1)) * self.v_count + vp

    def neighbor_map(self, mult: GCode) -> list[int]:
        """Vertex map w -> coset of (mult * representative of w); left
        multiplication, used to lay down coset-graph arcs."""
        qs, vs = mult
        vmul = self.vmul
        v_count = self.v_count
        out = [0] * self.vertex_count
        for qr in range(self.canon_q_count):
            u = self.act[qr][vs]
            qp = self.qmul[qs][qr]
            base_t = (((qp >> 1) % self.half_turn) * 2 + (qp & 1)) * v_count
            base_r = qr * v_count
            out[base_r:base_r + v_count] = [
                base_t + vmul(u, vr) for vr in range(v_count)
            ]
        return out

    # -- conjugacy class of the central rotation involution ------------------

    def involution_class(self) -> dict[int, GCode]:
        """Element-of-V code -> conjugator, over the class of the order-2
        rotation; every class member has that rotation as its Q part."""
        if self._involution_class is not None:
            return self._involution_class
        tq = self.t_qcode
        identity: GCode = (0, 0)
        gens: list[GCode] = [
            (self.encode_q(1, 0), 0),          # a
            (self.encode_q(0, 1), 0),          # b
            (0, self.encode_v(VElem((1,) + (0,) * (self.n - 1), 0))),  # v_1
        ]
        conj = {0: identity}
        frontier: list[tuple[int, GCode]] = [(0, identity)]
        while frontier:
            vc, x = frontier.pop()
            h: GCode = (tq, vc)
            for gen in gens:
                hq, hv = self.g_conj(h, gen)
                if hq != tq:
                    raise AssertionError("class left the rotation-involution coset")
                if hv not in conj:
                    y = self.g_mul(x, gen)
                    conj[hv] = y
                    frontier.append((hv, y))
        self._involution_class = conj
        return conj

    # -- semiregular spectrum scan -------------------------------------------

    def semiregular_spectrum(self) -> set[int]:
        """Orders of semiregular elements, by scanning every group element.

        Only involutions can lie in a conjugate of the point stabilizer (it
        has order 2), so an element of even order k is semiregular exactly
        when its k/2-th power avoids the involution class; odd-order
        elements are always semiregular.
        """
        vmul = self.vmul
        v_count = self.v_count
        cls = frozenset(self.involution_class())
        tq = self.t_qcode
        spectrum: set[int] = set()
        for q in range(self.q_count):
            d = self.qord[q]
            if d == 1:
                # (1, v) has order 1 or 3; both orders avoid the class.
                spectrum.add(1)
                if v_count > 1:
                    spectrum.add(3)
                continue
            table = self.act[q]
            half = d // 2
            q_half = 0
            for _ in range(half):
                q_half = self.qmul[q_half][q]
            half_is_central = q_half == tq
            table_half = self.act[q_half]
            for vc in range(v_count):
                u = vc
                uh = vc if half == 1 else 0
                for k in range(2, d + 1):
                    u = vmul(table[u], vc)
                    if k == half:
                        uh = u
                if u == 0:
                    if not half_is_central or uh not in cls:
                        spectrum.add(d)
                else:
                    w = vmul(table_half[u], uh)
                    if not half_is_central or w not in cls:
                        spectrum.add(3 * d)
        return spectrum


@lru_cache(maxsize=None)
def engine(m: int) -> Engine:
    return Engine(context(m))

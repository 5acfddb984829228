"""Exact linear algebra over the field with three elements.

Scalars are ints in {0, 1, 2}, vectors are tuples of scalars, matrices are
tuples of row tuples, and polynomials are tuples of coefficients with the
lowest degree first (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

from .errors import CapacityError, ParameterError

Vec = tuple[int, ...]
Matrix = tuple[Vec, ...]
Poly = tuple[int, ...]

# Multiplicative inverses mod 3; index 0 unused.
_INV3 = (0, 1, 2)


def vec(values) -> Vec:
    return tuple(v % 3 for v in values)


def zero_vec(n: int) -> Vec:
    return (0,) * n


def unit_vec(n: int, i: int) -> Vec:
    return tuple(1 if k == i else 0 for k in range(n))


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple((x + y) % 3 for x, y in zip(a, b))


def vec_scale(a: Vec, s: int) -> Vec:
    return tuple((x * s) % 3 for x in a)


def matrix(rows) -> Matrix:
    out = tuple(vec(row) for row in rows)
    if any(len(row) != len(out) for row in out):
        raise ParameterError("matrix must be square")
    return out


def identity(n: int) -> Matrix:
    return tuple(unit_vec(n, i) for i in range(n))


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(vec_add(ra, rb) for ra, rb in zip(a, b))


def mat_neg(a: Matrix) -> Matrix:
    return tuple(vec_scale(r, 2) for r in a)


def mat_scale(a: Matrix, s: int) -> Matrix:
    return tuple(vec_scale(r, s) for r in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % 3 for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Vec) -> Vec:
    return tuple(sum(x * y for x, y in zip(row, v)) % 3 for row in a)


def mat_pow(a: Matrix, k: int) -> Matrix:
    n = len(a)
    out = identity(n)
    base = a
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def build_J(m: int):
    """Antisymmetric 2^m x 2^m matrix with entry (i, j) equal to
    (-1)^(i-j) below the diagonal and the negative of that above it."""
    if not isinstance(m, int) or not 1 <= m <= 16:
        raise ParameterError(f"m must be an integer in [1, 16], got {m!r}")
    n = 2 ** m
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(0)
            elif i > j:
                row.append((-1) ** (i - j) % 3)
            else:
                row.append(-((-1) ** (j - i)) % 3)
        rows.append(tuple(row))
    return tuple(rows)


def det(mat: Matrix) -> int:
    """Determinant by Gaussian elimination mod 3."""
    n = len(mat)
    rows = [list(r) for r in mat]
    result = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            rows[piv], rows[col] = rows[col], rows[piv]
            result = -result % 3
        pivot = rows[col][col]
        result = (result * pivot) % 3
        inv = _INV3[pivot]
        for r in range(col + 1, n):
            factor = (rows[r][col] * inv) % 3
            if factor:
                rows[r] = [(x - factor * y) % 3 for x, y in zip(rows[r], rows[col])]
    return result % 3


def _hessenberg(mat: Matrix) -> list[list[int]]:
    n = len(mat)
    h = [list(r) for r in mat]
    for j in range(n - 2):
        piv = next((i for i in range(j + 1, n) if h[i][j]), None)
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = _INV3[h[j + 1][j]]
        for i in range(j + 2, n):
            if h[i][j]:
                t = (h[i][j] * inv) % 3
                h[i] = [(x - t * y) % 3 for x, y in zip(h[i], h[j + 1])]
                for k in range(n):
                    h[k][j + 1] = (h[k][j + 1] + t * h[k][i]) % 3
    return h


def char_poly(mat: Matrix) -> Poly:
    """Monic characteristic polynomial, computed via Hessenberg reduction."""
    n = len(mat)
    if n == 0:
        return (1,)
    h = _hessenberg(mat)
    # c[k] is the characteristic polynomial of the leading k x k block.
    c: list[list[int]] = [[1]]
    for k in range(1, n + 1):
        prev = c[k - 1]
        cur = [0] + prev
        diag = h[k - 1][k - 1]
        for d in range(len(prev)):
            cur[d] = (cur[d] - diag * prev[d]) % 3
        t = 1
        for i in range(1, k):
            t = (t * h[k - i][k - i - 1]) % 3
            coeff = (t * h[k - i - 1][k - 1]) % 3
            if coeff:
                lower = c[k - i - 1]
                for d in range(len(lower)):
                    cur[d] = (cur[d] - coeff * lower[d]) % 3
        c.append([x % 3 for x in cur])
    return tuple(c[n])


def poly_normalize(p) -> Poly:
    coeffs = [x % 3 for x in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def poly_mul(p: Poly, q: Poly) -> Poly:
    p = poly_normalize(p)
    q = poly_normalize(q)
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] = (out[i + j] + a * b) % 3
    return poly_normalize(out)


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly_normalize(
        [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]
    )


def poly_eval_matrix(p: Poly, mat: Matrix) -> Matrix:
    """Evaluate p at a square matrix."""
    n = len(mat)
    out = mat_scale(identity(n), 0)
    power = identity(n)
    for coeff in p:
        if coeff:
            out = mat_add(out, mat_scale(power, coeff))
        power = mat_mul(power, mat)
    return out


def rref(rows) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column list)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = _INV3[mat[r][col]]
        mat[r] = [(x * inv) % 3 for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [(x - f * y) % 3 for x, y in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def kernel(mat: Matrix) -> list[Vec]:
    """Basis of the right null space {x : mat @ x = 0}."""
    n = len(mat)
    reduced, pivots = rref(mat)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        x = [0] * n
        x[fc] = 1
        for row, pc in zip(reduced, pivots):
            x[pc] = (-row[fc]) % 3
        basis.append(tuple(x))
    return basis


class _Echelon:
    """Incrementally maintained echelon basis for subspace spinning."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[list[int]] = []
        self.pivot_cols: list[int] = []

    def reduce(self, v) -> list[int]:
        v = list(v)
        for row, pc in zip(self.rows, self.pivot_cols):
            if v[pc]:
                f = v[pc]
                v = [(x - f * y) % 3 for x, y in zip(v, row)]
        return v

    def insert(self, v) -> bool:
        """Reduce v against the basis; absorb it if independent."""
        v = self.reduce(v)
        pc = next((c for c in range(self.n) if v[c]), None)
        if pc is None:
            return False
        inv = _INV3[v[pc]]
        v = [(x * inv) % 3 for x in v]
        for i in range(len(self.rows)):
            if self.rows[i][pc]:
                f = self.rows[i][pc]
                self.rows[i] = [(x - f * y) % 3 for x, y in zip(self.rows[i], v)]
        self.rows.append(v)
        self.pivot_cols.append(pc)
        return True

    def basis(self) -> list[Vec]:
        order = sorted(range(len(self.rows)), key=lambda i: self.pivot_cols[i])
        return [tuple(self.rows[i]) for i in order]


def spin(seed: Vec, gens: list[Matrix]) -> list[Vec]:
    """Basis of the smallest gens-invariant subspace containing seed."""
    if not any(x % 3 for x in seed):
        raise ParameterError("spin seed must be nonzero")
    n = len(seed)
    if any(len(g) != n for g in gens):
        raise ParameterError("generator dimensions must match the seed")
    ech = _Echelon(n)
    queue = [vec(seed)]
    ech.insert(seed)
    while queue and len(ech.rows) < n:
        v = queue.pop()
        for g in gens:
            w = mat_vec(g, v)
            if ech.insert(w):
                queue.append(w)
    return ech.basis()


def _projective_reps(n: int):
    """One representative per 1-dimensional subspace of F3^n: the vectors
    whose first nonzero coordinate is 1."""
    for code in range(1, 3 ** n):
        digits = []
        c = code
        for _ in range(n):
            c, d = divmod(c, 3)
            digits.append(d)
        digits.reverse()
        first = next(d for d in digits if d)
        if first == 1:
            yield tuple(digits)


def is_irreducible(gens: list[Matrix]) -> bool:
    """Whether the given matrices act irreducibly, checked by spinning one
    seed per projective point and demanding the full space every time."""
    if not gens:
        raise ParameterError("need at least one generator")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ParameterError("generators must share one dimension")
    if n > 10:
        raise CapacityError(f"irreducibility scan enumerates 3^n seeds; n={n} > 10")
    for seed in _projective_reps(n):
        if len(spin(seed, gens)) < n:
            return False
    return True


def span_equal(basis_a, basis_b) -> bool:
    """Whether two collections of vectors span the same subspace."""
    ra, _ = rref(basis_a)
    rb, _ = rref(basis_b)
    return [tuple(r) for r in ra] == [tuple(r) for r in rb]

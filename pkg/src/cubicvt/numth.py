"""Primitive prime divisors and multiplicative orders.

A prime r is a primitive prime divisor of x^f - 1 when it divides x^f - 1
but no x^s - 1 with s < f.  Stripping from x^f - 1 every factor shared with
the x^s - 1 over proper divisors s of f leaves exactly the product of the
primitive primes, so existence is a gcd computation and the smallest one is
the least prime factor of that remainder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, ParameterError

# Deterministic Miller-Rabin witnesses for n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_CAPACITY_BITS = 512


@dataclass(frozen=True)
class PpdResult:
    exists: bool
    prime: int | None
    exception_kind: str | None
    primitive_part: int
    factors: tuple[tuple[int, int], ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = 2 + seed, 1 + seed, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def factorize(n: int) -> dict[int, int]:
    """Complete prime factorization: trial division, then rho splitting."""
    if n < 1:
        raise ParameterError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    w = 0
    while d * d <= n and d < 1_000_000:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += wheel[w]
        w = (w + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        n = stack.pop()
        if n == 1:
            continue
        if is_prime(n):
            out[n] = out.get(n, 0) + 1
            continue
        g = _pollard_rho(n)
        stack.append(g)
        stack.append(n // g)
    return out


def _proper_divisors(f: int) -> list[int]:
    return [s for s in range(1, f) if f % s == 0]


def primitive_part(x: int, f: int) -> int:
    """x^f - 1 with every factor shared by some smaller x^s - 1 removed.
    What remains is exactly the product of the primitive prime powers."""
    n = x ** f - 1
    for s in _proper_divisors(f):
        d = x ** s - 1
        g = math.gcd(n, d)
        while g > 1:
            n //= g
            g = math.gcd(n, d)
    return n


def _iroot(n: int, e: int) -> int:
    """Floor of the e-th root, in integer arithmetic (no float range cap)."""
    if n < 2 or e == 1:
        return n
    x = 1 << ((n.bit_length() + e - 1) // e)  # upper bound
    while True:
        y = ((e - 1) * x + n // x ** (e - 1)) // e
        if y >= x:
            return x
        x = y


def _perfect_power_base(x: int) -> tuple[int, int] | None:
    """(y, e) with y^e = x and e maximal, or None when x is not a power."""
    for e in range(x.bit_length() - 1, 1, -1):
        y = _iroot(x, e)
        if y >= 2 and y ** e == x:
            return y, e
    return None


def _split_by_base_orders(x: int, f: int, part: int) -> list[tuple[int, int]]:
    """Split a primitive part into pieces keyed by the multiplicative order
    of the smallest root of x.  When x = y^e, a prime with ord(x) = f has
    ord(y) = f*g for some divisor g of e with gcd(f*g, e) = g, and it lies
    in y^(f*g) - 1; extracting ascending orders separates the pieces."""
    power = _perfect_power_base(x)
    if power is None:
        return [(part, f)]
    y, e = power
    orders = sorted(
        f * g for g in range(1, e + 1) if e % g == 0 and math.gcd(f * g, e) == g
    )
    pieces = []
    rem = part
    for d in orders:
        block = y ** d - 1
        g = math.gcd(rem, block)
        piece = 1
        while g > 1:
            piece *= g
            rem //= g
            g = math.gcd(rem, block)
        if piece > 1:
            pieces.append((piece, d))
    if rem > 1:
        pieces.append((rem, f))
    return pieces


def _smallest_prime_in_piece(piece: int, d: int) -> int:
    """Least prime factor of a piece whose primes are all 1 mod d: test
    primality, walk the progression, and only then fall back to a full
    factorization (delegated to sympy for the handful of stubborn
    cofactors whose least factors exceed the trial range)."""
    if is_prime(piece):
        return piece
    if d <= 1:
        step = 1
    elif d % 2:
        step = 2 * d if piece % 2 else d
    else:
        step = d
    c = 1 + step
    limit = math.isqrt(piece)
    while c <= min(limit, 200_000):
        if piece % c == 0:
            return c
        c += step
    if c > limit:
        return piece  # unreachable after the primality test; safety net
    from sympy import factorint

    return min(factorint(piece))


def _smallest_prime_factor_of_part(x: int, f: int, part: int) -> int:
    return min(
        _smallest_prime_in_piece(piece, d)
        for piece, d in _split_by_base_orders(x, f, part)
    )


def primitive_prime_divisor(x: int, f: int, full_factorization: bool = False) -> PpdResult:
    """Smallest primitive prime divisor of x^f - 1, or the reason none
    exists: the two classical exceptions plus the degenerate x=2, f=1."""
    if x < 2 or f < 1:
        raise ParameterError("need x >= 2 and f >= 1")
    if (x.bit_length() - 1) * f > _CAPACITY_BITS:
        raise CapacityError(f"x^f beyond the {_CAPACITY_BITS}-bit working cap")
    part = primitive_part(x, f)
    if part == 1:
        if (x, f) == (2, 6):
            kind = "two_six"
        elif (x, f) == (2, 1):
            kind = "degenerate"
        elif f == 2 and (x + 1) & x == 0:
            kind = "mersenne_f2"  # x = 2^y - 1
        else:
            kind = None
        return PpdResult(False, None, kind, 1, ())
    if full_factorization:
        factors = tuple(sorted(factorize(part).items()))
        return PpdResult(True, factors[0][0], None, part, factors)
    return PpdResult(True, _smallest_prime_factor_of_part(x, f, part), None, part, ())


def ppd_lower_bound_check(x: int, f: int) -> bool:
    """Any primitive prime divisor r satisfies r >= f + 1 (its
    multiplicative order mod r is exactly f, which divides r - 1);
    vacuously true when none exists."""
    res = primitive_prime_divisor(x, f)
    return (not res.exists) or res.prime >= f + 1


def multiplicative_order(x: int, n: int) -> int:
    if n < 1:
        raise ParameterError("modulus must be positive")
    if math.gcd(x, n) != 1:
        raise ParameterError(f"gcd({x}, {n}) != 1")
    if n == 1:
        return 1
    acc = x % n
    k = 1
    while acc != 1:
        acc = acc * x % n
        k += 1
    return k

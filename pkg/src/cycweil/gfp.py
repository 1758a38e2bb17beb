"""Dense polynomials over a prime field F_p.

Polynomials are little-endian lists of ints in [0, p); the zero polynomial
is the empty list.
"""

from __future__ import annotations

import random


def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def normalize(a, p: int) -> list[int]:
    return trim([c % p for c in a])


def add(a: list[int], b: list[int], p: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out)


def sub(a: list[int], b: list[int], p: int) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return trim(out)


def mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return normalize(out, p)


def divmod_poly(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(rem) <= db:
        return [], trim(rem)
    quo = [0] * (len(rem) - db)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k] * inv_lead % p
        if c:
            quo[k - db] = c
            for i, bi in enumerate(b):
                rem[k - db + i] = (rem[k - db + i] - c * bi) % p
    return trim(quo), trim(rem[:db])


def mod(a: list[int], b: list[int], p: int) -> list[int]:
    return divmod_poly(a, b, p)[1]


def monic(a: list[int], p: int) -> list[int]:
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = normalize(a, p), normalize(b, p)
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def xgcd(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int], list[int]]:
    """Return (g, s, t) with s*a + t*b = g and g monic."""
    r0, r1 = normalize(a, p), normalize(b, p)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        qt, rr = divmod_poly(r0, r1, p)
        r0, r1 = r1, rr
        s0, s1 = s1, sub(s0, mul(qt, s1, p), p)
        t0, t1 = t1, sub(t0, mul(qt, t1, p), p)
    if not r0:
        return [], s0, t0
    inv = pow(r0[-1], -1, p)
    scale = lambda v: [c * inv % p for c in v]  # noqa: E731
    return scale(r0), scale(s0), scale(t0)


def powmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1] if len(m) > 1 else []
    base = mod(base, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = mod(mul(base, base, p), m, p)
    return result


def prime_factors(m: int) -> list[int]:
    out, k = [], 2
    while k * k <= m:
        if m % k == 0:
            out.append(k)
            while m % k == 0:
                m //= k
        k += 1
    if m > 1:
        out.append(m)
    return out


def is_irreducible(f, p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = normalize(f, p)
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if powmod(x, p**m, f, p) != mod(x, f, p):
        return False
    for ell in prime_factors(m):
        h = sub(powmod(x, p ** (m // ell), f, p), x, p)
        if len(gcd(h, f, p)) != 1:
            return False
    return True


def random_irreducible(p: int, m: int, seed: int = 0) -> list[int]:
    """A monic irreducible polynomial of degree m, deterministic in (p, m, seed)."""
    if m < 1:
        raise ValueError("degree must be positive")
    rng = random.Random(f"{p}:{m}:{seed}")
    while True:
        f = [rng.randrange(p) for _ in range(m)] + [1]
        if is_irreducible(f, p):
            return f

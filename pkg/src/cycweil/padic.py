"""Fixed-precision arithmetic in Z_q = Z_p[t]/(Q(t)).

Elements are n-tuples of integers reduced mod p^W (little-endian in the
generator t).  The context methods ending in ``_raw`` work on bare tuples and
are what the heavy kernels call; the ``zq_*`` functions wrap them for the
typed :class:`ZqElem` / :class:`ScaledZq` API.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2

from . import gfp
from .errors import NonUnitError


def is_prime(m: int) -> bool:
    return m >= 2 and bool(gmpy2.is_prime(m))


def valuation(m: int, p: int) -> int:
    if m == 0:
        raise ValueError("valuation of zero")
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True)
class ZqElem:
    coeffs: tuple[int, ...]


@dataclass(frozen=True)
class ScaledZq:
    """The value p^shift * mantissa."""

    shift: int
    mantissa: ZqElem

    def is_zero(self) -> bool:
        return not any(self.mantissa.coeffs)


class ZqContext:
    """Z_q modulo p^W, with Q the trivial lift of a monic irreducible mod p."""

    def __init__(self, p: int, n: int, prec: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if n < 1 or prec < 1:
            raise ValueError("need n >= 1 and W >= 1")
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] % p != 1:
            raise ValueError("defining polynomial must be monic of degree n")
        self.p = p
        self.n = n
        self.prec = prec
        self.M = p**prec
        self.modulus = modulus
        self.Q = tuple(c % self.M for c in modulus)
        self.zero = (0,) * n
        self.one = (1,) + (0,) * (n - 1)
        self._children: dict[int, ZqContext] = {}
        self.gen = ((-self.Q[0]) % self.M,) if n == 1 else (0, 1) + (0,) * (n - 2)
        self.sigma_gen = self._newton_sigma_gen()
        self._sigma_tables = self._build_sigma_tables()

    @property
    def q(self) -> int:
        return self.p**self.n

    def __repr__(self) -> str:
        return f"ZqContext(p={self.p}, n={self.n}, W={self.prec}, Q={list(self.modulus)})"

    def __reduce__(self):
        return (ZqContext, (self.p, self.n, self.prec, self.modulus))

    def with_precision(self, prec: int) -> ZqContext:
        if prec == self.prec:
            return self
        ctx = self._children.get(prec)
        if ctx is None:
            ctx = ZqContext(self.p, self.n, prec, self.modulus)
            self._children[prec] = ctx
        return ctx

    # raw tuple arithmetic

    def reduce_raw(self, a: Iterable[int]) -> tuple[int, ...]:
        M = self.M
        return tuple(c % M for c in a)

    def add_raw(self, a, b):
        M = self.M
        return tuple((x + y) % M for x, y in zip(a, b))

    def sub_raw(self, a, b):
        M = self.M
        return tuple((x - y) % M for x, y in zip(a, b))

    def neg_raw(self, a):
        M = self.M
        return tuple(-x % M for x in a)

    def scale_raw(self, c: int, a):
        M = self.M
        return tuple(c * x % M for x in a)

    def fold_raw(self, v: list[int]) -> tuple[int, ...]:
        """Reduce a coefficient list of any length modulo (Q, p^W)."""
        n, Q = self.n, self.Q
        for k in range(len(v) - 1, n - 1, -1):
            c = v[k]
            if c:
                base = k - n
                for i in range(n):
                    v[base + i] -= c * Q[i]
        M = self.M
        out = [c % M for c in v[:n]]
        out.extend([0] * (n - len(out)))
        return tuple(out)

    def mul_raw(self, a, b):
        if self.n == 1:
            return (a[0] * b[0] % self.M,)
        prod = [0] * (2 * self.n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return self.fold_raw(prod)

    def pow_raw(self, a, e: int):
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul_raw(result, base)
            e >>= 1
            if e:
                base = self.mul_raw(base, base)
        return result

    def is_unit_raw(self, a) -> bool:
        if self.n == 1:
            return a[0] % self.p != 0
        return any(c % self.p for c in a)

    def inv_raw(self, a):
        p = self.p
        if self.n == 1:
            if a[0] % p == 0:
                raise NonUnitError("inverse of a non-unit")
            return (pow(a[0], -1, self.M),)
        g, s, _ = gfp.xgcd(list(a), list(self.modulus), p)
        if g != [1]:
            raise NonUnitError("inverse of a non-unit")
        x = tuple(s) + (0,) * (self.n - len(s))
        k = 1
        while k < self.prec:
            k = min(2 * k, self.prec)
            ctx = self.with_precision(k)
            ax = ctx.mul_raw(ctx.reduce_raw(a), x)
            x = ctx.mul_raw(x, ctx.sub_raw((2,) + (0,) * (self.n - 1), ax))
        return self.reduce_raw(x)

    def horner_raw(self, poly: Sequence[int], z):
        """Evaluate an integer polynomial (little-endian) at z."""
        acc = self.zero
        for c in reversed(poly):
            acc = self.mul_raw(acc, z)
            acc = ((acc[0] + c) % self.M,) + acc[1:]
        return acc

    # Frobenius

    def _newton_sigma_gen(self):
        if self.n == 1:
            return self.gen
        p = self.p
        base = self.with_precision(1) if self.prec > 1 else self
        z = base.pow_raw(base.gen, p)
        dQ = [i * c for i, c in enumerate(self.modulus)][1:]
        if not base.is_unit_raw(base.horner_raw(dQ, z)):
            raise AssertionError("Q' vanishes at the Frobenius root")
        k = 1
        while k < self.prec:
            k = min(2 * k, self.prec)
            ctx = self.with_precision(k)
            val = ctx.horner_raw(self.modulus, z)
            der = ctx.horner_raw(dQ, z)
            z = ctx.sub_raw(z, ctx.mul_raw(val, ctx.inv_raw(der)))
        return z

    def _build_sigma_tables(self):
        """tables[k][c] = sigma^k(t)^c as a tuple, for 0 <= k, c < n."""
        n = self.n
        powers1 = [self.one]
        for _ in range(1, n):
            powers1.append(self.mul_raw(powers1[-1], self.sigma_gen))
        tables = []
        image = self.gen
        for k in range(n):
            if k:
                image = self._apply_powers(image, powers1)
            pw = [self.one]
            for _ in range(1, n):
                pw.append(self.mul_raw(pw[-1], image))
            tables.append(pw)
        return tables

    def _apply_powers(self, x, powers):
        M, n = self.M, self.n
        out = [0] * n
        for c, xc in enumerate(x):
            if xc:
                img = powers[c]
                for i in range(n):
                    out[i] += xc * img[i]
        return tuple(v % M for v in out)

    def sigma_raw(self, x, k: int = 1):
        k %= self.n
        if k == 0:
            return tuple(x)
        return self._apply_powers(x, self._sigma_tables[k])

    # scaled values

    def canonical_raw(self, shift: int, m) -> tuple[int, tuple[int, ...]]:
        if not any(m):
            return 0, self.zero
        p = self.p
        while all(c % p == 0 for c in m):
            m = tuple(c // p for c in m)
            shift += 1
        return shift, tuple(m)


def make_context(p: int, n: int, W: int, Q_mod_p: Sequence[int] | None = None, seed: int = 0) -> ZqContext:
    """Build a Z_q context; a defining polynomial is generated when none is given."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be positive")
    if Q_mod_p is None:
        Q_mod_p = gfp.random_irreducible(p, n, seed)
    Q_mod_p = [int(c) % p for c in Q_mod_p]
    if len(Q_mod_p) != n + 1 or Q_mod_p[-1] != 1:
        raise ValueError("defining polynomial must be monic of degree n")
    if not gfp.is_irreducible(Q_mod_p, p):
        raise ValueError("defining polynomial is reducible mod p")
    return ZqContext(p, n, W, Q_mod_p)


def elem(ctx: ZqContext, coeffs: Sequence[int] | int) -> ZqElem:
    if isinstance(coeffs, int):
        coeffs = [coeffs]
    coeffs = list(coeffs) + [0] * (ctx.n - len(coeffs))
    return ZqElem(ctx.fold_raw(coeffs))


def zq_add(ctx: ZqContext, a: ZqElem, b: ZqElem) -> ZqElem:
    return ZqElem(ctx.add_raw(a.coeffs, b.coeffs))


def zq_sub(ctx: ZqContext, a: ZqElem, b: ZqElem) -> ZqElem:
    return ZqElem(ctx.sub_raw(a.coeffs, b.coeffs))


def zq_mul(ctx: ZqContext, a: ZqElem, b: ZqElem) -> ZqElem:
    return ZqElem(ctx.mul_raw(a.coeffs, b.coeffs))


def zq_inv(ctx: ZqContext, a: ZqElem) -> ZqElem:
    return ZqElem(ctx.inv_raw(a.coeffs))


def sigma_generator_image(ctx: ZqContext) -> ZqElem:
    return ZqElem(ctx.sigma_gen)


def apply_sigma(ctx: ZqContext, x: ZqElem, k: int = 1) -> ZqElem:
    return ZqElem(ctx.sigma_raw(x.coeffs, k))


def scaled(ctx: ZqContext, value: ZqElem | Sequence[int] | int, shift: int = 0) -> ScaledZq:
    """Canonical ScaledZq for p^shift * value."""
    raw = value.coeffs if isinstance(value, ZqElem) else elem(ctx, value).coeffs
    s, m = ctx.canonical_raw(shift, raw)
    return ScaledZq(s, ZqElem(m))


def canonicalize(ctx: ZqContext, x: ScaledZq) -> ScaledZq:
    s, m = ctx.canonical_raw(x.shift, x.mantissa.coeffs)
    return ScaledZq(s, ZqElem(m))


def scaled_add(ctx: ZqContext, x: ScaledZq, y: ScaledZq) -> ScaledZq:
    if x.is_zero():
        return y
    if y.is_zero():
        return x
    if x.shift > y.shift:
        x, y = y, x
    lift = ctx.p ** (y.shift - x.shift)
    m = tuple((a + lift * b) % ctx.M for a, b in zip(x.mantissa.coeffs, y.mantissa.coeffs))
    return scaled(ctx, m, x.shift)


def scaled_neg(ctx: ZqContext, x: ScaledZq) -> ScaledZq:
    return ScaledZq(x.shift, ZqElem(ctx.neg_raw(x.mantissa.coeffs)))


def scaled_mul(ctx: ZqContext, x: ScaledZq, y: ScaledZq) -> ScaledZq:
    return scaled(ctx, ctx.mul_raw(x.mantissa.coeffs, y.mantissa.coeffs), x.shift + y.shift)


def zq_div_exact_int(ctx: ZqContext, x: ScaledZq, m: int) -> ScaledZq:
    """Divide by a nonzero integer, moving its p-part into the shift."""
    if m == 0:
        raise ZeroDivisionError("division by zero")
    v = valuation(m, ctx.p)
    u = m // ctx.p**v
    inv = pow(u, -1, ctx.M)
    return scaled(ctx, ctx.scale_raw(inv, x.mantissa.coeffs), x.shift - v)


def scaled_value_mod(ctx: ZqContext, x: ScaledZq, prec: int) -> tuple[int, ...]:
    """The value of x reduced mod p^prec, as an integral tuple.

    Raises ArithmeticError if x is not integral to that precision.
    """
    p = ctx.p
    Mp = p**prec
    if x.shift >= 0:
        return tuple(c * p**x.shift % Mp for c in x.mantissa.coeffs)
    den = p ** (-x.shift)
    out = []
    for c in x.mantissa.coeffs:
        c %= Mp * den
        if c % den:
            raise ArithmeticError("value is not integral at the requested precision")
        out.append(c // den)
    return tuple(out)

"""Polynomials over Z_q with a common p-power shift.

A :class:`ZqPoly` stores its mantissa component-major: ``comps[c][i]`` is the
t^c component of the coefficient of x^i.  This layout lets products and
matrix-vector kernels run over plain integer lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from . import kronecker
from .errors import NotSquarefreeError
from .padic import ScaledZq, ZqContext, ZqElem

SCHOOLBOOK_LIMIT = 24


def _as_raw(ctx: ZqContext, c) -> tuple[int, ...]:
    if isinstance(c, ZqElem):
        return c.coeffs
    if isinstance(c, int):
        return (c % ctx.M,) + (0,) * (ctx.n - 1)
    c = list(c) + [0] * (ctx.n - len(c))
    return ctx.fold_raw(c)


def fold_comps(ctx: ZqContext, out: list[list[int]]) -> list[list[int]]:
    """Reduce 2n-1 product components modulo Q(t) and p^W."""
    n, Q, M = ctx.n, ctx.Q, ctx.M
    for c in range(len(out) - 1, n - 1, -1):
        oc = out[c]
        for i in range(n):
            qi = Q[i]
            if qi:
                tgt = out[c - n + i]
                out[c - n + i] = [x - qi * y for x, y in zip(tgt, oc)]
    return [[x % M for x in comp] for comp in out[:n]]


def mul_comps(ctx: ZqContext, A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    la, lb = len(A[0]), len(B[0])
    if not la or not lb:
        return [[] for _ in range(ctx.n)]
    n, M = ctx.n, ctx.M
    size = la + lb - 1
    if min(la, lb) <= SCHOOLBOOK_LIMIT and n == 1:
        a, b = A[0], B[0]
        o = [0] * size
        if la < lb:
            a, b = b, a
        for j, y in enumerate(b):
            if y:
                for i, x in enumerate(a):
                    o[i + j] += x * y
        return [[v % M for v in o]]
    stride = 2 * n - 1
    nb = kronecker.slot_bytes(M, M, min(la, lb) * n)
    za = kronecker.pack(kronecker.interleave(A, stride), nb)
    zb = za if A is B else kronecker.pack(kronecker.interleave(B, stride), nb)
    flat = kronecker.unpack(za * zb, nb, size * stride)
    return fold_comps(ctx, [flat[c::stride] for c in range(stride)])


class ZqPoly:
    """p^shift * sum_i m_i x^i with mantissas m_i in Z_q / p^W."""

    __slots__ = ("ctx", "comps", "shift")
    __hash__ = None

    def __init__(self, ctx: ZqContext, comps: list[list[int]], shift: int = 0):
        self.ctx = ctx
        self.comps = comps
        self.shift = shift
        self._trim()

    def _trim(self) -> None:
        comps = self.comps
        length = len(comps[0])
        while length and not any(comp[length - 1] for comp in comps):
            length -= 1
        if length != len(comps[0]):
            for comp in comps:
                del comp[length:]
        if not length:
            self.shift = 0

    @classmethod
    def zero(cls, ctx: ZqContext) -> ZqPoly:
        return cls(ctx, [[] for _ in range(ctx.n)])

    @classmethod
    def from_coeffs(cls, ctx: ZqContext, coeffs: Sequence, shift: int = 0) -> ZqPoly:
        raws = [_as_raw(ctx, c) for c in coeffs]
        return cls(ctx, [[r[c] for r in raws] for c in range(ctx.n)], shift)

    @classmethod
    def from_scaled(cls, ctx: ZqContext, coeffs: Sequence[ScaledZq]) -> ZqPoly:
        live = [c.shift for c in coeffs if not c.is_zero()]
        if not live:
            return cls.zero(ctx)
        s = min(live)
        p, M = ctx.p, ctx.M
        raws = [tuple(v * p ** (c.shift - s) % M for v in c.mantissa.coeffs) for c in coeffs]
        return cls(ctx, [[r[c] for r in raws] for c in range(ctx.n)], s)

    @classmethod
    def monomial(cls, ctx: ZqContext, k: int, c=1) -> ZqPoly:
        return cls.from_coeffs(ctx, [0] * k + [c])

    def __len__(self) -> int:
        return len(self.comps[0])

    @property
    def degree(self) -> int:
        return len(self) - 1

    def is_zero(self) -> bool:
        return not len(self)

    def mantissa(self, i: int) -> tuple[int, ...]:
        if i >= len(self):
            return self.ctx.zero
        return tuple(comp[i] for comp in self.comps)

    def coeff(self, i: int) -> ScaledZq:
        s, m = self.ctx.canonical_raw(self.shift, self.mantissa(i))
        return ScaledZq(s, ZqElem(m))

    def coeffs(self) -> list[ScaledZq]:
        return [self.coeff(i) for i in range(len(self))]

    def copy(self) -> ZqPoly:
        return ZqPoly(self.ctx, [list(c) for c in self.comps], self.shift)

    def aligned_comps(self, shift: int, length: int | None = None) -> list[list[int]]:
        """Mantissa components rescaled to a smaller (or equal) shift and padded."""
        ctx = self.ctx
        if length is None:
            length = len(self)
        pad = length - len(self)
        if self.is_zero():
            return [[0] * length for _ in range(ctx.n)]
        if shift > self.shift:
            raise ValueError("can only align to a smaller shift")
        if shift == self.shift:
            return [comp + [0] * pad for comp in self.comps]
        f, M = ctx.p ** (self.shift - shift), ctx.M
        return [[v * f % M for v in comp] + [0] * pad for comp in self.comps]

    def canonical(self) -> ZqPoly:
        if self.is_zero():
            return self
        p, s = self.ctx.p, self.shift
        comps = self.comps
        while all(v % p == 0 for comp in comps for v in comp):
            comps = [[v // p for v in comp] for comp in comps]
            s += 1
        return ZqPoly(self.ctx, [list(c) for c in comps], s)

    def in_context(self, ctx: ZqContext) -> ZqPoly:
        """Reinterpret the mantissas in another precision of the same ring."""
        M = ctx.M
        return ZqPoly(ctx, [[v % M for v in comp] for comp in self.comps], self.shift)

    def _combine(self, other: ZqPoly, sign: int) -> ZqPoly:
        if other.is_zero():
            return self.copy()
        if self.is_zero():
            return other.copy() if sign > 0 else -other
        s = min(self.shift, other.shift)
        length = max(len(self), len(other))
        a = self.aligned_comps(s, length)
        b = other.aligned_comps(s, length)
        M = self.ctx.M
        if sign > 0:
            comps = [[(x + y) % M for x, y in zip(ca, cb)] for ca, cb in zip(a, b)]
        else:
            comps = [[(x - y) % M for x, y in zip(ca, cb)] for ca, cb in zip(a, b)]
        return ZqPoly(self.ctx, comps, s)

    def __add__(self, other: ZqPoly) -> ZqPoly:
        return self._combine(other, 1)

    def __sub__(self, other: ZqPoly) -> ZqPoly:
        return self._combine(other, -1)

    def __neg__(self) -> ZqPoly:
        M = self.ctx.M
        return ZqPoly(self.ctx, [[-v % M for v in comp] for comp in self.comps], self.shift)

    def __mul__(self, other) -> ZqPoly:
        ctx = self.ctx
        if isinstance(other, ZqPoly):
            if self.is_zero() or other.is_zero():
                return ZqPoly.zero(ctx)
            return ZqPoly(ctx, mul_comps(ctx, self.comps, other.comps), self.shift + other.shift)
        if isinstance(other, ScaledZq):
            return self.scale(other.mantissa.coeffs, other.shift)
        return self.scale(_as_raw(ctx, other))

    __rmul__ = __mul__

    def scale(self, c: tuple[int, ...], shift: int = 0) -> ZqPoly:
        """Multiply by p^shift * c for a Z_q mantissa c."""
        ctx = self.ctx
        M = ctx.M
        if ctx.n == 1:
            c0 = c[0]
            return ZqPoly(ctx, [[v * c0 % M for v in self.comps[0]]], self.shift + shift)
        const = [[ci] for ci in c]
        return ZqPoly(ctx, mul_comps(ctx, self.comps, const), self.shift + shift)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZqPoly):
            return NotImplemented
        return (self - other).is_zero()

    def derivative(self) -> ZqPoly:
        M = self.ctx.M
        return ZqPoly(self.ctx, [[i * v % M for i, v in enumerate(comp)][1:] for comp in self.comps], self.shift)

    def mul_xpow(self, m: int) -> ZqPoly:
        return ZqPoly(self.ctx, [[0] * m + comp for comp in self.comps], self.shift)

    def sigma(self, k: int = 1) -> ZqPoly:
        ctx = self.ctx
        raws = [ctx.sigma_raw(self.mantissa(i), k) for i in range(len(self))]
        return ZqPoly(ctx, [[r[c] for r in raws] for c in range(ctx.n)], self.shift)

    def truncate(self, length: int) -> ZqPoly:
        return ZqPoly(self.ctx, [comp[:length] for comp in self.comps], self.shift)

    def evaluate(self, z) -> ScaledZq:
        ctx = self.ctx
        z = _as_raw(ctx, z)
        acc = ctx.zero
        for i in range(len(self) - 1, -1, -1):
            acc = ctx.add_raw(ctx.mul_raw(acc, z), self.mantissa(i))
        s, m = ctx.canonical_raw(self.shift, acc)
        return ScaledZq(s, ZqElem(m))

    def is_monic(self) -> bool:
        return not self.is_zero() and self.shift == 0 and self.mantissa(self.degree) == self.ctx.one

    def __repr__(self) -> str:
        terms = [str(self.mantissa(i) if self.ctx.n > 1 else self.mantissa(i)[0]) for i in range(len(self))]
        return f"ZqPoly(p^{self.shift} * [{', '.join(terms)}])"


def poly_divmod_monic(u: ZqPoly, v: ZqPoly) -> tuple[ZqPoly, ZqPoly]:
    """Division by a monic polynomial; quotient and remainder keep u's shift."""
    if not v.is_monic():
        raise ValueError("divisor must be monic")
    ctx = u.ctx
    dv, du = v.degree, u.degree
    if du < dv:
        return ZqPoly.zero(ctx), u.copy()
    M = ctx.M
    if ctx.n == 1:
        rem = list(u.comps[0])
        vc = v.comps[0][:dv]
        quo = [0] * (du - dv + 1)
        for k in range(du, dv - 1, -1):
            c = rem[k] % M
            if c:
                quo[k - dv] = c
                base = k - dv
                for i, vi in enumerate(vc):
                    rem[base + i] -= c * vi
        return (
            ZqPoly(ctx, [quo], u.shift),
            ZqPoly(ctx, [[x % M for x in rem[:dv]]], u.shift),
        )
    rem = [u.mantissa(i) for i in range(du + 1)]
    vc = [v.mantissa(i) for i in range(dv)]
    quo = [ctx.zero] * (du - dv + 1)
    for k in range(du, dv - 1, -1):
        c = rem[k]
        if any(c):
            quo[k - dv] = c
            base = k - dv
            for i, vi in enumerate(vc):
                rem[base + i] = ctx.sub_raw(rem[base + i], ctx.mul_raw(c, vi))
    return ZqPoly.from_coeffs(ctx, quo, u.shift), ZqPoly.from_coeffs(ctx, rem[:dv], u.shift)


# Euclid over F_q = Z_q / p, on coefficient-major lists of tuples.


def _fq_trim(a):
    while a and not any(a[-1]):
        a.pop()
    return a


def _fq_sub(k: ZqContext, a, b):
    n = max(len(a), len(b))
    a = a + [k.zero] * (n - len(a))
    b = b + [k.zero] * (n - len(b))
    return _fq_trim([k.sub_raw(x, y) for x, y in zip(a, b)])


def _fq_mul(k: ZqContext, a, b):
    if not a or not b:
        return []
    out = [k.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if any(x):
            for j, y in enumerate(b):
                out[i + j] = k.add_raw(out[i + j], k.mul_raw(x, y))
    return _fq_trim(out)


def _fq_divmod(k: ZqContext, a, b):
    rem = list(a)
    inv = k.inv_raw(b[-1])
    db = len(b) - 1
    if len(rem) <= db:
        return [], rem
    quo = [k.zero] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = k.mul_raw(rem[i], inv)
        if any(c):
            quo[i - db] = c
            for j, bj in enumerate(b):
                rem[i - db + j] = k.sub_raw(rem[i - db + j], k.mul_raw(c, bj))
    return _fq_trim(quo), _fq_trim(rem[:db])


def fq_xgcd(k: ZqContext, a, b):
    """Return (g, s, t) with s*a + t*b = g monic, over the residue field."""
    r0, r1 = _fq_trim(list(a)), _fq_trim(list(b))
    s0, s1, t0, t1 = [k.one], [], [], [k.one]
    while r1:
        qt, rr = _fq_divmod(k, r0, r1)
        r0, r1 = r1, rr
        s0, s1 = s1, _fq_sub(k, s0, _fq_mul(k, qt, s1))
        t0, t1 = t1, _fq_sub(k, t0, _fq_mul(k, qt, t1))
    inv = k.inv_raw(r0[-1])
    return tuple([k.mul_raw(c, inv) for c in v] for v in (r0, s0, t0))


def residue_gcd_degree(fbar: ZqPoly) -> int:
    """Degree of gcd(f, f') over the residue field F_q."""
    k = fbar.ctx.with_precision(1)
    f = fbar.in_context(k)
    df = f.derivative()
    if df.is_zero():
        return f.degree
    g, _, _ = fq_xgcd(k, [f.mantissa(i) for i in range(len(f))], [df.mantissa(i) for i in range(len(df))])
    return len(g) - 1


@dataclass
class BezoutPair:
    """a*fbar + b*fbar' = 1 mod p^W."""

    a: ZqPoly
    b: ZqPoly


def bezout_pair(fbar: ZqPoly) -> BezoutPair:
    """Residue-field extended Euclid, then quadratic Hensel lifting to p^W."""
    if not fbar.is_monic():
        raise ValueError("fbar must be monic")
    ctx = fbar.ctx
    k1 = ctx.with_precision(1)
    f1 = fbar.in_context(k1)
    df1 = f1.derivative()
    if df1.is_zero() and f1.degree > 0:
        raise NotSquarefreeError("f' vanishes mod p")
    g, _, t = fq_xgcd(k1, [f1.mantissa(i) for i in range(len(f1))], [df1.mantissa(i) for i in range(len(df1))])
    if len(g) != 1:
        raise NotSquarefreeError("gcd(f, f') is not constant mod p")
    b = poly_divmod_monic(ZqPoly.from_coeffs(k1, t), f1)[1]
    prec = 1
    while prec < ctx.prec:
        prec = min(2 * prec, ctx.prec)
        kk = ctx.with_precision(prec)
        f, df = fbar.in_context(kk), fbar.derivative().in_context(kk)
        b = b.in_context(kk)
        one = ZqPoly.from_coeffs(kk, [1])
        e = poly_divmod_monic(one - b * df, f)[1]
        b = poly_divmod_monic(b * (one + e), f)[1]
    one = ZqPoly.from_coeffs(ctx, [1])
    a, rem = poly_divmod_monic(one - b * fbar.derivative(), fbar)
    if not rem.is_zero():
        raise AssertionError("Hensel lifting of the Bezout identity failed")
    return BezoutPair(a, b)


def split_bezout(R: ZqPoly, fbar: ZqPoly, pair: BezoutPair) -> tuple[ZqPoly, ZqPoly]:
    """Write R = A*fbar + B*fbar' with deg B < d and deg A < d - 1."""
    B = poly_divmod_monic(pair.b * R, fbar)[1]
    A, rem = poly_divmod_monic(R - B * fbar.derivative(), fbar)
    if not rem.is_zero():
        raise AssertionError("inexact division in Bezout split")
    return A, B


def normalize_tau_series(
    terms: Mapping[int, ZqPoly], fbar: ZqPoly, keep_polynomial_part: bool = False
) -> dict[int, ZqPoly]:
    """Rewrite sum_k P_k tau^k so that every P_k has degree < d, using fbar*tau = 1.

    The quotient of P_k by fbar moves to index k - 1.  An index-0 term of degree
    >= d would need tau^-1; it is kept as a polynomial part when
    ``keep_polynomial_part`` is set and rejected otherwise.
    """
    if not terms:
        return {}
    d = fbar.degree
    out = {k: v for k, v in terms.items() if not v.is_zero()}
    if not out:
        return {}
    if min(out) < 0:
        raise ValueError("negative tau index")
    for k in range(max(out), -1, -1):
        P = out.get(k)
        if P is None or P.degree < d:
            continue
        if k == 0:
            if keep_polynomial_part:
                break
            raise ValueError("normalization would produce a negative tau index")
        quo, rem = poly_divmod_monic(P, fbar)
        if rem.is_zero():
            del out[k]
        else:
            out[k] = rem
        out[k - 1] = out[k - 1] + quo if k - 1 in out else quo
    return {k: v for k, v in sorted(out.items()) if not v.is_zero()}

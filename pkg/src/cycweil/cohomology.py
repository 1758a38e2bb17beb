"""Frobenius on differential forms of y^r = f(x) and the reduction to a basis.

Forms are written sum_k R_k(x) tau^k dx / y^ell with tau = 1/fbar = y^-r.
The Frobenius lift sends y to y^p (R)^(1/r) where R = 1 + (fbar^sigma(x^p) -
fbar(x)^p) tau^p, so F(dx/y^j) needs the series S^j with S = R^(-1/r).  Two
reductions bring a form back to the span of the basis:

* the tau-reduction lowers the tau-degree one step at a time through the
  Bezout split R_k = A_k fbar + B_k fbar';
* the x-reduction lowers the degree of a pure polynomial form
  T(x) dx / y^ell below d - 1.

Heavy kernels keep coefficients component-major (see :mod:`cycweil.polyring`)
and multiply whole tau-series with one Kronecker product.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from operator import mul
from typing import TYPE_CHECKING, Iterator, Sequence

import gmpy2

from . import gfp, kronecker
from .errors import CharacteristicDividesDegreeError, MalformedInputError, NotSquarefreeError
from .padic import ScaledZq, ZqContext, ZqElem, is_prime, valuation
from .polyring import (
    ZqPoly,
    bezout_pair,
    fold_comps,
    poly_divmod_monic,
    residue_gcd_degree,
    split_bezout,
)

if TYPE_CHECKING:
    from .weil import PrecisionPlan


class BasisKind(enum.Enum):
    B = "b"
    BPRIME = "bprime"


def genus_delta(r: int, d: int) -> tuple[int, int]:
    delta = math.gcd(r, d)
    twice = (r - 1) * (d - 1) - (delta - 1)
    assert twice % 2 == 0
    return twice // 2, delta


@lru_cache(maxsize=None)
def _context(p: int, n: int, prec: int, modulus: tuple[int, ...]) -> ZqContext:
    return ZqContext(p, n, prec, modulus)


@dataclass(frozen=True)
class Curve:
    """y^r = f(x) over F_q, q = p^n, with f monic and squarefree.

    ``field_poly`` is the little-endian defining polynomial of F_q over F_p and
    every coefficient of ``f`` is an n-tuple in the field generator.
    """

    p: int
    n: int
    field_poly: tuple[int, ...]
    r: int
    f: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        p, n = self.p, self.n
        if not isinstance(p, int) or not is_prime(p):
            raise MalformedInputError(f"p = {p} is not prime")
        if n < 1:
            raise MalformedInputError("n must be at least 1")
        fp = tuple(int(c) % p for c in self.field_poly)
        if len(fp) != n + 1 or fp[-1] != 1 or not gfp.is_irreducible(list(fp), p):
            raise MalformedInputError("field polynomial must be monic irreducible of degree n over F_p")
        if self.r < 2:
            raise MalformedInputError("r must be at least 2")
        coeffs = []
        for c in self.f:
            c = (c,) if isinstance(c, int) else tuple(c)
            if len(c) > n:
                raise MalformedInputError("coefficient of f has more than n components")
            coeffs.append(tuple(int(v) % p for v in c) + (0,) * (n - len(c)))
        while coeffs and not any(coeffs[-1]):
            coeffs.pop()
        if len(coeffs) < 3:
            raise MalformedInputError("f must have degree at least 2")
        if coeffs[-1] != (1,) + (0,) * (n - 1):
            raise MalformedInputError("f must be monic")
        object.__setattr__(self, "field_poly", fp)
        object.__setattr__(self, "f", tuple(coeffs))
        if self.r % p == 0:
            raise CharacteristicDividesDegreeError(f"p = {p} divides r = {self.r}")
        if residue_gcd_degree(self.fbar(self.context(1))) > 0:
            raise NotSquarefreeError("f is not squarefree over F_q")

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def d(self) -> int:
        return len(self.f) - 1

    @property
    def genus(self) -> int:
        return genus_delta(self.r, self.d)[0]

    @property
    def delta(self) -> int:
        return math.gcd(self.r, self.d)

    def context(self, prec: int) -> ZqContext:
        return _context(self.p, self.n, prec, self.field_poly)

    def fbar(self, ctx: ZqContext) -> ZqPoly:
        return ZqPoly.from_coeffs(ctx, self.f)

    def lift(self, prec: int) -> LiftedCurve:
        return _lifted(self, prec)


@lru_cache(maxsize=64)
def _lifted(curve: Curve, prec: int) -> LiftedCurve:
    return LiftedCurve(curve, prec)


def matvec(ctx: ZqContext, mat: list[list[list[int]]], vec: list[list[int]]) -> list[list[int]]:
    """Product of a component-major matrix and a component-major vector over Z_q."""
    M = ctx.M
    if ctx.n == 1:
        v = vec[0]
        return [[sum(map(mul, row, v)) % M for row in mat[0]]]
    n = ctx.n
    rows = len(mat[0])
    out = [[0] * rows for _ in range(2 * n - 1)]
    for b in range(n):
        vb = vec[b]
        if not any(vb):
            continue
        for a in range(n):
            o = out[a + b]
            for i, row in enumerate(mat[a]):
                o[i] += sum(map(mul, row, vb))
    return fold_comps(ctx, out)


def _comps_of(polys: Sequence[ZqPoly], ctx: ZqContext, width: int) -> list[list[list[int]]]:
    """Component-major matrix whose column c holds the coefficients of polys[c]."""
    n = ctx.n
    mat = [[[0] * len(polys) for _ in range(width)] for _ in range(n)]
    for col, P in enumerate(polys):
        for i in range(min(len(P), width)):
            m = P.mantissa(i)
            for a in range(n):
                mat[a][i][col] = m[a]
    return mat


class LiftedCurve:
    """The curve over Z_q / p^prec with tables for the reduction kernels."""

    def __init__(self, curve: Curve, prec: int):
        self.curve = curve
        self.prec = prec
        self.ctx = curve.context(prec)
        self.p, self.r, self.d, self.n = curve.p, curve.r, curve.d, curve.n
        self.fbar = curve.fbar(self.ctx)
        self.dfbar = self.fbar.derivative()
        self._fb_raw = [self.fbar.mantissa(i) for i in range(self.d)]

    def __reduce__(self):
        return (_lifted, (self.curve, self.prec))

    def at(self, prec: int) -> LiftedCurve:
        return self.curve.lift(prec)

    @cached_property
    def pair(self):
        return bezout_pair(self.fbar)

    @cached_property
    def product_tables(self) -> list[list[list[int]]]:
        """Stacked matrix sending the top coefficients (x^d..x^(2d-2)) to (remainder; quotient)."""
        d, ctx = self.d, self.ctx
        rems, quos = [], []
        for D in range(d, 2 * d - 1):
            quo, rem = poly_divmod_monic(ZqPoly.monomial(ctx, D), self.fbar)
            rems.append(rem)
            quos.append(quo)
        top = _comps_of(rems, ctx, d)
        bottom = _comps_of(quos, ctx, d - 1)
        return [top[a] + bottom[a] for a in range(ctx.n)]

    @cached_property
    def red1_tables(self) -> list[list[list[int]]]:
        """Stacked matrix sending R (deg < d) to (A; B') of its Bezout split."""
        d, ctx = self.d, self.ctx
        As, dBs = [], []
        for i in range(d):
            A, B = split_bezout(ZqPoly.monomial(ctx, i), self.fbar, self.pair)
            As.append(A)
            dBs.append(B.derivative())
        top = _comps_of(As, ctx, d - 1)
        bottom = _comps_of(dBs, ctx, d - 1)
        return [top[a] + bottom[a] for a in range(ctx.n)]

    def divmod_fbar(self, P: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
        """Quotient and remainder of a component-major mantissa by fbar."""
        ctx, d = self.ctx, self.d
        M = ctx.M
        length = len(P[0])
        if length <= d:
            return [[] for _ in range(ctx.n)], [comp + [0] * (d - length) for comp in P]
        if ctx.n == 1:
            rem = list(P[0])
            fb = [c[0] for c in self._fb_raw]
            quo = [0] * (length - d)
            for k in range(length - 1, d - 1, -1):
                c = rem[k] % M
                if c:
                    quo[k - d] = c
                    base = k - d
                    for i, fi in enumerate(fb):
                        rem[base + i] -= c * fi
            return [quo], [[x % M for x in rem[:d]]]
        rem = [tuple(comp[i] for comp in P) for i in range(length)]
        quo = [ctx.zero] * (length - d)
        fb = self._fb_raw
        for k in range(length - 1, d - 1, -1):
            c = ctx.reduce_raw(rem[k])
            if any(c):
                quo[k - d] = c
                base = k - d
                for i, fi in enumerate(fb):
                    rem[base + i] = ctx.sub_raw(rem[base + i], ctx.mul_raw(c, fi))
        n = ctx.n
        return (
            [[v[a] for v in quo] for a in range(n)],
            [[v[a] % M for v in rem[:d]] for a in range(n)],
        )


# tau-series with integral coefficients, as lists of component-major terms


Terms = list[list[list[int]]]


def _zero_term(n: int, d: int) -> list[list[int]]:
    return [[0] * d for _ in range(n)]


def series_mul(lc: LiftedCurve, A: Terms, B: Terms, length: int) -> Terms:
    """Normalized product of two tau-series, truncated to ``length`` terms."""
    ctx, n, d = lc.ctx, lc.n, lc.d
    M = ctx.M
    La, Lb = min(len(A), length + 1), min(len(B), length + 1)
    if not La or not Lb:
        return [_zero_term(n, d) for _ in range(length)]
    stride = 2 * n - 1
    X = 2 * d - 1
    Sk = X * stride

    def flatten(T: Terms, L: int) -> list[int]:
        flat = [0] * (L * Sk)
        for k in range(L):
            term = T[k]
            base = k * Sk
            for c in range(n):
                if len(term[c]) != d:
                    raise ValueError("series terms must have exactly d coefficients")
                flat[base + c : base + c + d * stride : stride] = term[c]
        return flat

    nb = kronecker.slot_bytes(M, M, min(La, Lb) * d * n)
    za = kronecker.pack(flatten(A, La), nb)
    zb = za if (A is B and La == Lb) else kronecker.pack(flatten(B, Lb), nb)
    prod = za * zb
    count = min(La + Lb - 1, length + 1) * Sk
    prod = gmpy2.f_mod_2exp(prod, 8 * nb * count)
    flat = kronecker.unpack(prod, nb, count)
    tables = lc.product_tables
    lows, carries = [], []
    nterms = count // Sk
    for K in range(nterms):
        block = flat[K * Sk : (K + 1) * Sk]
        if n == 1:
            raw = [[v % M for v in block]]
        else:
            raw = fold_comps(ctx, [block[c::stride] for c in range(stride)])
        top = [comp[d:] for comp in raw]
        low = [comp[:d] for comp in raw]
        if any(any(t) for t in top):
            if K == 0:
                raise ValueError("product has a polynomial part of degree >= d")
            red = matvec(ctx, tables, top)
            low = [[(x + y) % M for x, y in zip(lw, rd[:d])] for lw, rd in zip(low, red)]
            carries.append([rd[d:] for rd in red])
        else:
            carries.append(None)
        lows.append(low)
    out = []
    for K in range(length):
        if K >= nterms:
            out.append(_zero_term(n, d))
            continue
        term = lows[K]
        carry = carries[K + 1] if K + 1 < nterms else None
        if carry is not None:
            term = [[(x + y) % M for x, y in zip(tc, cc + [0])] for tc, cc in zip(term, carry)]
        out.append(term)
    return out


def series_pow(lc: LiftedCurve, S: Terms, e: int, length: int) -> Terms:
    result = None
    base = S
    while e:
        if e & 1:
            result = base if result is None else series_mul(lc, result, base, length)
        e >>= 1
        if e:
            base = series_mul(lc, base, base, length)
    return result


def _reduce_terms(lc: LiftedCurve, T: Terms, length: int) -> Terms:
    M = lc.ctx.M
    out = [[[v % M for v in comp] for comp in term] for term in T[:length]]
    out.extend(_zero_term(lc.n, lc.d) for _ in range(length - len(out)))
    return out


@dataclass
class TauSeries:
    """Integral truncated series sum_{k < len} R_k tau^k, deg R_k < d, mod p^prec."""

    lifted: LiftedCurve
    terms: Terms

    def __len__(self) -> int:
        return len(self.terms)

    def mul(self, other: TauSeries, length: int | None = None) -> TauSeries:
        length = length or max(len(self), len(other))
        return TauSeries(self.lifted, series_mul(self.lifted, self.terms, other.terms, length))

    def to_polys(self) -> dict[int, ZqPoly]:
        ctx = self.lifted.ctx
        out = {}
        for k, term in enumerate(self.terms):
            P = ZqPoly(ctx, [list(c) for c in term])
            if not P.is_zero():
                out[k] = P
        return out


def frobenius_R(lc: LiftedCurve) -> Terms:
    """R = 1 + (fbar^sigma(x^p) - fbar(x)^p) tau^p, normalized; p | the bracket."""
    ctx, p, d = lc.ctx, lc.p, lc.d
    fb = lc.fbar
    twisted = fb.sigma(1)
    spread = []
    for comp in twisted.comps:
        row = [0] * (p * d + 1)
        row[::p] = comp
        spread.append(row)
    fsig = ZqPoly(ctx, spread)
    power = ZqPoly.from_coeffs(ctx, [1])
    for _ in range(p):
        power = power * fb
    H = fsig - power
    if any(v % p for comp in H.comps for v in comp):
        raise AssertionError("Frobenius lift of f is not congruent to f^p mod p")
    terms = [_zero_term(lc.n, d) for _ in range(p + 1)]
    terms[0][0][0] = 1
    k = p
    while not H.is_zero():
        if k < 1:
            raise AssertionError("fbar-adic expansion did not terminate")
        quo, rem = poly_divmod_monic(H, fb)
        for a in range(lc.n):
            for i in range(len(rem)):
                terms[k][a][i] = rem.comps[a][i]
        H = quo
        k -= 1
    return terms


def frob_y_inv_series(curve: Curve, plan: PrecisionPlan) -> TauSeries:
    """S = R^(-1/r) mod p^N, truncated after tau^(pN-1), by Newton iteration."""
    return TauSeries(curve.lift(plan.N), y_inv_terms(curve.lift(plan.N), plan.N))


def y_inv_terms(lcN: LiftedCurve, N: int) -> Terms:
    p, r = lcN.p, lcN.r
    R_full = frobenius_R(lcN)
    S = [_zero_term(lcN.n, lcN.d)]
    S[0][0][0] = 1
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        lc = lcN.at(prec)
        M = lc.ctx.M
        L = p * prec
        R = _reduce_terms(lc, R_full, min(L, len(R_full)))
        S = _reduce_terms(lc, S, L)
        RSr = series_mul(lc, R, series_pow(lc, S, r, L), L)
        eps = [[[-v % M for v in comp] for comp in term] for term in RSr]
        eps[0][0][0] = (eps[0][0][0] + 1) % M
        corr = series_mul(lc, S, eps, L)
        rinv = pow(r, -1, M)
        S = [
            [[(x + rinv * y) % M for x, y in zip(cs, cc)] for cs, cc in zip(ts, tc)]
            for ts, tc in zip(S, corr)
        ]
    if N == 1:
        S = _reduce_terms(lcN, S, p)
    return S


def basis_shape(p: int, r: int, j: int, basis: BasisKind) -> tuple[int, int, int, int]:
    """(ell, a, y-power of S, tau preshift) for the image of dx/y^j or dx/y^(r+j)."""
    ell, a = (j * p) % r, (j * p) // r
    if basis is BasisKind.B:
        return ell, a, j, a
    return r + ell, a, r + j, a + p - 1


@dataclass
class TauSeriesForm:
    """sum_k terms[k] tau^k dx / y^ell; terms[0] may carry a polynomial part."""

    ell: int
    terms: dict[int, ZqPoly]

    def max_index(self) -> int:
        return max(self.terms, default=-1)


def _form_from_terms(lc: LiftedCurve, ell: int, T: Terms, shift: int, ctx: ZqContext) -> TauSeriesForm:
    out = {}
    M = ctx.M
    for k, term in enumerate(T):
        P = ZqPoly(ctx, [[v % M for v in comp] for comp in term], shift)
        if not P.is_zero():
            out[k] = P
    return TauSeriesForm(ell, out)


def _add_comps(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    out = []
    for ca, cb in zip(a, b):
        if len(ca) < len(cb):
            ca, cb = cb, ca
        row = list(ca)
        for i, v in enumerate(cb):
            row[i] += v
        out.append(row)
    return out


def _times_xpow(lc: LiftedCurve, T: Terms, m: int) -> Terms:
    """Multiply sum_k T_k tau^k by x^m and renormalize; index 0 keeps a polynomial part."""
    out: Terms = [None] * len(T)  # type: ignore[list-item]
    carry = None
    for k in range(len(T) - 1, -1, -1):
        P = [[0] * m + comp for comp in T[k]]
        if carry is not None:
            P = _add_comps(P, carry)
        if k == 0:
            M = lc.ctx.M
            out[0] = [[v % M for v in comp] for comp in P]
        else:
            quo, rem = lc.divmod_fbar(P)
            out[k] = rem
            carry = quo if quo[0] else None
    return out


def _initial_form_terms(lc: LiftedCurve, Spow: Terms, preshift: int, mu: int) -> Terms:
    n, d = lc.n, lc.d
    T = [_zero_term(n, d) for _ in range(min(preshift, mu + 1))]
    T.extend(Spow[: max(0, mu + 1 - preshift)])
    return T


def frob_basis_forms(
    lc: LiftedCurve, plan: PrecisionPlan, j: int, Spow: Terms, basis: BasisKind
) -> Iterator[tuple[int, Terms]]:
    """Mantissas of F(x^i dx/y^j) / p for i = 0..d-2, built by repeated x^p steps.

    The true forms are p times the yielded series; everything is exact mod p^N.
    """
    p, d = lc.p, lc.d
    ell, a, _, preshift = basis_shape(p, lc.r, j, basis)
    T = _initial_form_terms(lc, Spow, preshift, plan.mu(j))
    T = _times_xpow(lc, T, p - 1)
    for i in range(d - 1):
        if i:
            T = _times_xpow(lc, T, p)
        yield i, T


def frob_basis_form(curve: Curve, plan: PrecisionPlan, i: int, j: int, S: TauSeries, basis: BasisKind) -> TauSeriesForm:
    """F(x^i dx/y^j) (basis B) or F(x^i dx/y^(r+j)) (basis B'), in the working precision."""
    lc = S.lifted
    ell, _, e, preshift = basis_shape(curve.p, curve.r, j, basis)
    Spow = series_pow(lc, S.terms, e, len(S.terms))
    T = _initial_form_terms(lc, Spow, preshift, plan.mu(j))
    T = _times_xpow(lc, T, curve.p * (i + 1) - 1)
    return _form_from_terms(lc, ell, T, 1, curve.context(plan.W))


@dataclass
class ReductionStats:
    min_shift: int = 0
    red2_steps: int = 0
    forms: int = 0

    def merge(self, other: ReductionStats) -> None:
        self.min_shift = min(self.min_shift, other.min_shift)
        self.red2_steps += other.red2_steps
        self.forms += other.forms


def _canonical_comps(p: int, comps: list[list[int]], shift: int) -> tuple[list[list[int]], int]:
    if not any(v for comp in comps for v in comp):
        return comps, shift
    while all(v % p == 0 for comp in comps for v in comp):
        comps = [[v // p for v in comp] for comp in comps]
        shift += 1
    return comps, shift


def reduce_tau(form: TauSeriesForm, lc: LiftedCurve, stats: ReductionStats | None = None) -> ZqPoly:
    """Lower the tau-degree to zero; returns the index-0 polynomial with its shift.

    Each step replaces R_k tau^k by (A_k + r/(r(k-1)+ell) B_k') tau^(k-1).
    """
    ctx, d, r, p = lc.ctx, lc.d, lc.r, lc.p
    M = ctx.M
    tables = lc.red1_tables
    acc = None
    acc_shift = 0
    for k in range(form.max_index(), 0, -1):
        term = form.terms.get(k)
        if term is not None and not term.is_zero():
            if acc is None:
                cur, s = term.aligned_comps(term.shift, d), term.shift
            else:
                s = min(acc_shift, term.shift)
                cur = term.aligned_comps(s, d)
                f = p ** (acc_shift - s)
                cur = [[(x + f * y) % M for x, y in zip(cc, ca)] for cc, ca in zip(cur, acc)]
        elif acc is not None:
            cur, s = acc, acc_shift
        else:
            continue
        out = matvec(ctx, tables, cur)
        e = r * (k - 1) + form.ell
        v = valuation(e, p)
        unit = r * pow(e // p**v, -1, M) % M
        pv = p**v
        nxt = [[(pv * x + unit * y) % M for x, y in zip(comp[: d - 1], comp[d - 1 :])] + [0] for comp in out]
        acc, acc_shift = _canonical_comps(p, nxt, s - v)
        if not any(x for comp in acc for x in comp):
            acc, acc_shift = None, 0
        elif stats is not None:
            stats.min_shift = min(stats.min_shift, acc_shift)
    T0 = form.terms.get(0, ZqPoly.zero(ctx))
    if acc is not None:
        T0 = T0 + ZqPoly(ctx, acc, acc_shift)
    return T0.canonical()


def red1_step(R: ZqPoly, k: int, ell: int, lc: LiftedCurve) -> ZqPoly:
    """Contribution of R tau^k dx/y^ell at index k - 1, via an explicit Bezout split."""
    A, B = split_bezout(R, lc.fbar, lc.pair)
    e = lc.r * (k - 1) + ell
    return (A + _div_int(B.derivative(), e, lc.r)).canonical()


def red1_witness(R: ZqPoly, k: int, ell: int, lc: LiftedCurve) -> tuple[ZqPoly, int]:
    """Q = P y^(-E) with (before - after) = dQ for one tau-reduction step."""
    _, B = split_bezout(R, lc.fbar, lc.pair)
    e = lc.r * (k - 1) + ell
    return -_div_int(B, e, lc.r), e


def _div_int(P: ZqPoly, den: int, num: int = 1) -> ZqPoly:
    """P * num / den with the p-part of den moved into the shift."""
    ctx = P.ctx
    v = valuation(den, ctx.p)
    c = num * pow(den // ctx.p**v, -1, ctx.M) % ctx.M
    return P.scale((c,) + (0,) * (ctx.n - 1), -v)


def _red2_parts(T: ZqPoly, ell: int, lc: LiftedCurve) -> tuple[ScaledZq, ZqPoly, int]:
    r, d, ctx = lc.r, lc.d, lc.ctx
    m = T.degree
    Tt = lc.dfbar.mul_xpow(m - d + 1) * (r - ell)
    if m >= d:
        Tt = Tt + lc.fbar.mul_xpow(m - d) * (r * (m - d + 1))
    L = r * (m + 1) - ell * d
    v = valuation(L, ctx.p)
    # canonical, so that the leading coefficients cancel exactly at T's shift
    s, c = ctx.canonical_raw(T.shift - v, ctx.scale_raw(pow(L // ctx.p**v, -1, ctx.M), T.mantissa(m)))
    return ScaledZq(s, ZqElem(c)), Tt, m


def red2_step(T: ZqPoly, ell: int, lc: LiftedCurve) -> ZqPoly:
    """Subtract (LC(T)/LC(T~)) T~ from a polynomial form T dx/y^ell, lowering its degree."""
    if ell >= lc.r:
        raise AssertionError("x-reduction needs a pole order below r")
    c, Tt, m = _red2_parts(T, ell, lc)
    out = T - Tt * c
    if out.degree >= m:
        raise AssertionError("leading coefficient did not cancel")
    return out.canonical()


def red2_witness(T: ZqPoly, ell: int, lc: LiftedCurve) -> tuple[ZqPoly, int]:
    c, _, m = _red2_parts(T, ell, lc)
    P = ZqPoly.monomial(lc.ctx, m - lc.d + 1, lc.r) * c
    return P, ell - lc.r


def reduce_x(T: ZqPoly, ell: int, lc: LiftedCurve, stats: ReductionStats | None = None) -> ZqPoly:
    """Lower deg T below d - 1 for a form T dx / y^ell."""
    while T.degree >= lc.d - 1:
        T = red2_step(T, ell, lc)
        if stats is not None:
            stats.red2_steps += 1
            if not T.is_zero():
                stats.min_shift = min(stats.min_shift, T.shift)
    return T


def reduce_form(form: TauSeriesForm, lc: LiftedCurve, basis: BasisKind, stats: ReductionStats | None = None) -> list[ScaledZq]:
    """Coefficients of x^0..x^(d-2) of the reduced form."""
    T = reduce_tau(form, lc, stats)
    if basis is BasisKind.BPRIME:
        if T.degree > lc.d - 2:
            raise AssertionError("tau-reduction left degree >= d-1 in the B' basis")
    else:
        T = reduce_x(T, form.ell, lc, stats)
    if stats is not None:
        stats.forms += 1
        if not T.is_zero():
            stats.min_shift = min(stats.min_shift, T.shift)
    return [T.coeff(i) for i in range(lc.d - 1)]


def exact_differential(P: ZqPoly, E: int, ell: int, lc: LiftedCurve) -> dict[int, ZqPoly]:
    """d(P y^-E) as sum_k terms[k] tau^k dx/y^ell, using r y^(r-1) dy = fbar' dx.

    d(P y^-E) = (P' y^-E - (E/r) P fbar' y^(-E-r)) dx; requires E = ell mod r.
    """
    if (E - ell) % lc.r:
        raise ValueError("pole orders differ by a non-multiple of r")
    k1 = (E - ell) // lc.r
    return {k1: P.derivative(), k1 + 1: -_div_int(P * lc.dfbar, lc.r, E)}


def form_numerator(terms: dict[int, ZqPoly], fbar: ZqPoly) -> ZqPoly:
    """sum_k P_k fbar^(K-k) for K = max index: zero iff the form vanishes."""
    live = {k: v for k, v in terms.items() if not v.is_zero()}
    if not live:
        return ZqPoly.zero(fbar.ctx)
    K = max(live)
    total = ZqPoly.zero(fbar.ctx)
    for k, P in live.items():
        for _ in range(K - k):
            P = P * fbar
        total = total + P
    return total


def combine_forms(*signed: tuple[int, dict[int, ZqPoly]]) -> dict[int, ZqPoly]:
    out: dict[int, ZqPoly] = {}
    for sign, terms in signed:
        for k, P in terms.items():
            P = P if sign > 0 else -P
            out[k] = out[k] + P if k in out else P
    return out

"""Block matrices of Frobenius, their sigma-twisted norm, and characteristic polynomials.

The matrix of the p-power Frobenius on the basis x^i dx/y^j has one nonzero
(d-1)x(d-1) block per block row: row block j maps to column block jp mod r.
Entry [(d-1)(j-1)+i][(d-1)(ell-1)+k] is the coefficient of x^k dx/y^ell in
the image of the i-th form with pole index j (rows are images).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from operator import mul
from typing import TYPE_CHECKING, Sequence

from .cohomology import (
    BasisKind,
    Curve,
    ReductionStats,
    _form_from_terms,
    basis_shape,
    frob_basis_forms,
    reduce_form,
    series_mul,
    series_pow,
    y_inv_terms,
)
from .padic import ScaledZq, ZqContext, ZqElem

if TYPE_CHECKING:
    from .weil import PrecisionPlan


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[tuple[int, ...], ...]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)


def cycle_decomposition(r: int, q: int) -> CycleDecomposition:
    """Orbits of j -> qj mod r on {1..r-1}, each starting at its smallest element."""
    if math.gcd(q, r) != 1:
        raise ValueError("q and r must be coprime")
    seen, cycles = set(), []
    for j in range(1, r):
        if j in seen:
            continue
        cyc, k = [], j
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = k * q % r
        cycles.append(tuple(cyc))
    return CycleDecomposition(tuple(cycles))


class ZqMatrix:
    """p^shift * Y for an integral matrix Y over Z_q / p^W, stored component-major."""

    __slots__ = ("ctx", "comps", "shift")

    def __init__(self, ctx: ZqContext, comps: list[list[list[int]]], shift: int = 0):
        self.ctx = ctx
        self.comps = comps
        self.shift = shift

    @classmethod
    def from_scaled(cls, ctx: ZqContext, entries: Sequence[Sequence[ScaledZq]], shift: int | None = None) -> ZqMatrix:
        live = [e.shift for row in entries for e in row if not e.is_zero()]
        if shift is None:
            shift = min(live, default=0)
        elif live and min(live) < shift:
            raise ValueError("entry below the requested common shift")
        p, M, n = ctx.p, ctx.M, ctx.n
        comps = [[[0] * len(row) for row in entries] for _ in range(n)]
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                if not e.is_zero():
                    f = p ** (e.shift - shift)
                    for a, v in enumerate(e.mantissa.coeffs):
                        comps[a][i][j] = v * f % M
        return cls(ctx, comps, shift)

    @classmethod
    def identity(cls, ctx: ZqContext, m: int) -> ZqMatrix:
        comps = [[[int(i == j and a == 0) for j in range(m)] for i in range(m)] for a in range(ctx.n)]
        return cls(ctx, comps, 0)

    @property
    def size(self) -> int:
        return len(self.comps[0])

    def raw(self, i: int, j: int) -> tuple[int, ...]:
        return tuple(c[i][j] for c in self.comps)

    def entry(self, i: int, j: int) -> ScaledZq:
        s, m = self.ctx.canonical_raw(self.shift, self.raw(i, j))
        return ScaledZq(s, ZqElem(m))

    def entries(self) -> list[list[ScaledZq]]:
        return [[self.entry(i, j) for j in range(len(self.comps[0][0]))] for i in range(self.size)]

    def __matmul__(self, other: ZqMatrix) -> ZqMatrix:
        ctx = self.ctx
        n, M, Q = ctx.n, ctx.M, ctx.Q
        rows, inner, cols = self.size, len(other.comps[0]), len(other.comps[0][0])
        colsT = [[list(col) for col in zip(*other.comps[b])] for b in range(n)]
        out = [[[0] * cols for _ in range(rows)] for _ in range(2 * n - 1)]
        for a in range(n):
            A = self.comps[a]
            for b in range(n):
                o, BT = out[a + b], colsT[b]
                for i in range(rows):
                    Ai, oi = A[i], o[i]
                    for j in range(cols):
                        oi[j] += sum(map(mul, Ai, BT[j]))
        for c in range(2 * n - 2, n - 1, -1):
            for i in range(n):
                if Q[i]:
                    tgt, src = out[c - n + i], out[c]
                    for r_ in range(rows):
                        tr, sr = tgt[r_], src[r_]
                        for j in range(cols):
                            tr[j] -= Q[i] * sr[j]
        comps = [[[v % M for v in row] for row in out[a]] for a in range(n)]
        return ZqMatrix(ctx, comps, self.shift + other.shift)

    def sigma(self, k: int = 1) -> ZqMatrix:
        ctx = self.ctx
        if k % ctx.n == 0:
            return self
        rows, cols = self.size, len(self.comps[0][0])
        n = ctx.n
        comps = [[[0] * cols for _ in range(rows)] for _ in range(n)]
        for i in range(rows):
            for j in range(cols):
                img = ctx.sigma_raw(self.raw(i, j), k)
                for a in range(n):
                    comps[a][i][j] = img[a]
        return ZqMatrix(ctx, comps, self.shift)

    def rescaled(self, shift: int) -> ZqMatrix:
        if shift > self.shift:
            raise ValueError("can only rescale to a smaller shift")
        f, M = self.ctx.p ** (self.shift - shift), self.ctx.M
        return ZqMatrix(self.ctx, [[[v * f % M for v in row] for row in comp] for comp in self.comps], shift)


@dataclass
class FrobBlockMatrix:
    """A (r-1)(d-1) square matrix with one nonzero block per block row."""

    r: int
    d: int
    ctx: ZqContext
    entries: list[list[ScaledZq]]
    block_perm: dict[int, int]

    @property
    def size(self) -> int:
        return (self.r - 1) * (self.d - 1)

    def _span(self, j: int) -> range:
        return range((self.d - 1) * (j - 1), (self.d - 1) * j)

    def block_entries(self, j: int, ell: int | None = None) -> list[list[ScaledZq]]:
        ell = self.block_perm[j] if ell is None else ell
        cols = self._span(ell)
        return [[self.entries[i][c] for c in cols] for i in self._span(j)]

    def block(self, j: int, shift: int | None = None) -> ZqMatrix:
        return ZqMatrix.from_scaled(self.ctx, self.block_entries(j), shift)

    def min_shift(self) -> int:
        return min((e.shift for row in self.entries for e in row if not e.is_zero()), default=0)

    def check_block_support(self) -> None:
        """Raise unless every nonzero entry sits in block (j, block_perm[j])."""
        for j in range(1, self.r):
            allowed = self._span(self.block_perm[j])
            for i in self._span(j):
                for c, e in enumerate(self.entries[i]):
                    if c not in allowed and not e.is_zero():
                        raise AssertionError(f"entry ({i}, {c}) outside the permitted block")

    def dense(self) -> ZqMatrix:
        return ZqMatrix.from_scaled(self.ctx, self.entries)

    @classmethod
    def from_blocks(cls, r: int, d: int, ctx: ZqContext, blocks: dict[int, ZqMatrix], perm: dict[int, int]) -> FrobBlockMatrix:
        size = (r - 1) * (d - 1)
        zero = ScaledZq(0, ZqElem(ctx.zero))
        entries = [[zero] * size for _ in range(size)]
        for j, blk in blocks.items():
            r0, c0 = (d - 1) * (j - 1), (d - 1) * (perm[j] - 1)
            for i, row in enumerate(blk.entries()):
                entries[r0 + i][c0 : c0 + d - 1] = row
        return cls(r, d, ctx, entries, dict(perm))


def _rows_for_j(curve: Curve, plan: PrecisionPlan, basis: BasisKind, j: int, Spow) -> tuple[list[list[ScaledZq]], ReductionStats]:
    lcN, lcW = curve.lift(plan.N), curve.lift(plan.W)
    ctxW = lcW.ctx
    ell = basis_shape(curve.p, curve.r, j, basis)[0]
    stats = ReductionStats()
    rows = []
    for _, T in frob_basis_forms(lcN, plan, j, Spow, basis):
        if basis is BasisKind.BPRIME and any(v for comp in T[0] for v in comp[curve.d - 1 :]):
            raise AssertionError("polynomial part of degree >= d-1 in the B' basis")
        form = _form_from_terms(lcN, ell, T, 1, ctxW)
        rows.append(reduce_form(form, lcW, basis, stats))
    return rows, stats


def _rows_worker(args):
    curve, plan, basis, j, S, e = args
    lcN = curve.lift(plan.N)
    return j, _rows_for_j(curve, plan, basis, j, series_pow(lcN, S, e, len(S)))


def assemble_frobenius_matrix(
    curve: Curve, plan: PrecisionPlan, basis: BasisKind, threads: int = 1
) -> tuple[FrobBlockMatrix, ReductionStats]:
    """The p-power Frobenius matrix on the chosen basis, plus reduction statistics."""
    p, r, d = curve.p, curve.r, curve.d
    lcN = curve.lift(plan.N)
    ctxW = curve.context(plan.W)
    S = y_inv_terms(lcN, plan.N)
    L = len(S)
    exps = {j: basis_shape(p, r, j, basis)[2] for j in range(1, r)}
    results: dict[int, tuple] = {}
    if threads > 1 and r > 2:
        jobs = [(curve, plan, basis, j, S, exps[j]) for j in range(1, r)]
        with ProcessPoolExecutor(max_workers=min(threads, r - 1)) as pool:
            for j, res in pool.map(_rows_worker, jobs):
                results[j] = res
    else:
        # powers of S built incrementally in increasing exponent order
        power, current = None, 0
        for j in range(1, r):
            e = exps[j]
            if power is None:
                power = series_pow(lcN, S, e, L)
            else:
                for _ in range(e - current):
                    power = series_mul(lcN, power, S, L)
            current = e
            results[j] = _rows_for_j(curve, plan, basis, j, power)
    size = (r - 1) * (d - 1)
    zero = ScaledZq(0, ZqElem(ctxW.zero))
    entries = [[zero] * size for _ in range(size)]
    stats = ReductionStats()
    perm = {j: basis_shape(p, r, j, basis)[0] % r for j in range(1, r)}
    for j, (rows, st) in results.items():
        stats.merge(st)
        c0 = (d - 1) * (perm[j] - 1)
        for i, row in enumerate(rows):
            entries[(d - 1) * (j - 1) + i][c0 : c0 + d - 1] = row
    Mf = FrobBlockMatrix(r, d, ctxW, entries, perm)
    Mf.check_block_support()
    return Mf, stats


def frobenius_norm(Mf: FrobBlockMatrix, n: int) -> FrobBlockMatrix:
    """Matrix of the q-power Frobenius, q = p^n, from that of the p-power one.

    With rows as images, F^n has matrix sigma^(n-1)(Mf) ... sigma(Mf) Mf; block
    row j therefore multiplies the n blocks met along j, pj, p^2 j, ... with the
    first one twisted n-1 times.  Built by Horner: X <- sigma(X) * block.
    """
    if n == 1:
        return FrobBlockMatrix(Mf.r, Mf.d, Mf.ctx, [list(row) for row in Mf.entries], dict(Mf.block_perm))
    r = Mf.r
    blocks, perm = {}, {}
    for j in range(1, r):
        chain = [j]
        for _ in range(n):
            chain.append(Mf.block_perm[chain[-1]])
        X = Mf.block(chain[0])
        for k in range(1, n):
            X = X.sigma(1) @ Mf.block(chain[k])
        blocks[j] = X
        perm[j] = chain[n]
    return FrobBlockMatrix.from_blocks(r, Mf.d, Mf.ctx, blocks, perm)


def dense_frobenius_norm(Mf: FrobBlockMatrix, n: int) -> ZqMatrix:
    """Reference: the plain product sigma^(n-1)(Mf) ... sigma(Mf) Mf of full matrices."""
    A = Mf.dense()
    X = A
    for k in range(1, n):
        X = A.sigma(k) @ X
    return X


def berkowitz(ctx: ZqContext, A: Sequence[Sequence[tuple[int, ...]]]) -> list[tuple[int, ...]]:
    """Coefficients (leading first) of det(tI - A), without divisions."""
    m = len(A)
    poly = [ctx.one]
    mulr, addr, neg = ctx.mul_raw, ctx.add_raw, ctx.neg_raw

    def dot(u, v):
        acc = ctx.zero
        for x, y in zip(u, v):
            if any(x) and any(y):
                acc = addr(acc, mulr(x, y))
        return acc

    for k in range(1, m + 1):
        a = A[k - 1][k - 1]
        R = A[k - 1][: k - 1]
        vec = [A[i][k - 1] for i in range(k - 1)]
        B = [row[: k - 1] for row in A[: k - 1]]
        T = [ctx.one, neg(a)]
        for _ in range(k - 1):
            T.append(neg(dot(R, vec)))
            vec = [dot(row, vec) for row in B]
        new = []
        for i in range(k + 1):
            acc = ctx.zero
            for j in range(max(0, i - k), min(i, k - 1) + 1):
                acc = addr(acc, mulr(T[i - j], poly[j]))
            new.append(acc)
        poly = new
    return poly


def _matrix_raw(X: ZqMatrix) -> list[list[tuple[int, ...]]]:
    return [[X.raw(i, j) for j in range(len(X.comps[0][0]))] for i in range(X.size)]


def charpoly_scaled(M: FrobBlockMatrix, cycles: CycleDecomposition) -> list[ScaledZq]:
    """Characteristic polynomial of M (ascending coefficients) from its cycle blocks.

    All blocks are put on the common shift s of M, M = p^s Y; a cycle
    (j_1..j_c) contributes chi_Pi(t^c) with Pi the product of its blocks.
    """
    ctx = M.ctx
    s = M.min_shift()
    total = [ctx.one]
    for cyc in cycles.cycles:
        P = M.block(cyc[0], s)
        for j in cyc[1:]:
            P = P @ M.block(j, s)
        desc = berkowitz(ctx, _matrix_raw(P))
        c = len(cyc)
        asc = [ctx.zero] * (c * (len(desc) - 1) + 1)
        for k, coef in enumerate(desc):
            asc[c * (len(desc) - 1 - k)] = coef
        total = _poly_mul_raw(ctx, total, asc)
    deg = len(total) - 1
    out = []
    for i, coef in enumerate(total):
        sh, m = ctx.canonical_raw(s * (deg - i), coef)
        out.append(ScaledZq(sh, ZqElem(m)))
    return out


def _poly_mul_raw(ctx: ZqContext, a, b):
    out = [ctx.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if any(x):
            for j, y in enumerate(b):
                if any(y):
                    out[i + j] = ctx.add_raw(out[i + j], ctx.mul_raw(x, y))
    return out


def dense_charpoly_scaled(X: ZqMatrix) -> list[ScaledZq]:
    """Reference: Berkowitz on the full matrix."""
    ctx = X.ctx
    desc = berkowitz(ctx, _matrix_raw(X))
    deg = len(desc) - 1
    out = []
    for i in range(deg + 1):
        sh, m = ctx.canonical_raw(X.shift * (deg - i), desc[deg - i])
        out.append(ScaledZq(sh, ZqElem(m)))
    return out


def charpoly(M: FrobBlockMatrix, cycles: CycleDecomposition, precision: int | Sequence[int]) -> list[int]:
    """Integer coefficients (ascending) of chi_M, coefficient i reduced mod p^precision[i].

    Raises ArithmeticError when a coefficient is not in Z_p to its precision.
    """
    from .padic import scaled_value_mod

    ctx = M.ctx
    coeffs = charpoly_scaled(M, cycles)
    deg = len(coeffs) - 1
    if isinstance(precision, int):
        precision = [precision] * (deg + 1)
    out = []
    for i, c in enumerate(coeffs):
        prec = precision[i]
        if prec <= 0:
            out.append(0)
            continue
        v = scaled_value_mod(ctx, c, prec)
        if any(v[1:]):
            raise ArithmeticError(f"coefficient of t^{i} is not in Z_p")
        out.append(v[0])
    return out

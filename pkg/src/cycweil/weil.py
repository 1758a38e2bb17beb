"""Weil polynomials of cyclic covers y^r = f(x): precision policy and the full pipeline."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import gfp
from .cohomology import BasisKind, Curve, genus_delta
from .errors import PrecisionError, VerificationError
from .frobmatrix import (
    CycleDecomposition,
    assemble_frobenius_matrix,
    charpoly,
    cycle_decomposition,
    frobenius_norm,
)


def ilog(p: int, num: int, den: int = 1) -> int:
    """floor(log_p(num/den)) for a positive rational, in exact arithmetic."""
    if num <= 0 or den <= 0:
        raise ValueError("logarithm of a non-positive number")
    e = 0
    if num >= den:
        while num >= den * p ** (e + 1):
            e += 1
    else:
        while num * p ** (-e) < den:
            e -= 1
    return e


def weil_n0(g: int, q: int, p: int) -> int:
    """Smallest N0 with p^(2 N0) >= (2 binom(2g, g))^2 q^g."""
    bound = (2 * math.comb(2 * g, g)) ** 2 * q**g
    n0 = 0
    while p ** (2 * n0) < bound:
        n0 += 1
    return n0


def select_basis(p: int, r: int, g: int, delta: int, override: BasisKind | str | None = None) -> BasisKind:
    if override is not None and override != "auto":
        return BasisKind(override) if isinstance(override, str) else override
    if p >= 2 * r:
        return BasisKind.BPRIME
    num = 2 * g - (delta - 2)
    other = ilog(p, num, delta) if num > 0 else ilog(p, r)
    if ilog(p, 2 * r - 1) <= max(ilog(p, r), other):
        return BasisKind.BPRIME
    return BasisKind.B


def denominator_bound(p: int, r: int, d: int, delta: int, basis: BasisKind) -> int:
    """Bound on the p-adic denominators of the Frobenius matrix entries."""
    if basis is BasisKind.BPRIME:
        return max(0, ilog(p, 2 * r - 1))
    span = d * (r - 1) - r
    return max(0, ilog(p, r)) + (max(0, ilog(p, span, delta)) if span > 0 else 0)


@dataclass(frozen=True)
class PrecisionPlan:
    """Digit budgets: Frobenius matrix correct to ``target`` digits when series are kept mod p^N."""

    basis: BasisKind
    p: int
    r: int
    N0: int
    target: int
    denom_bound: int
    N: int
    G: int
    extra: int = 0

    @property
    def W(self) -> int:
        return self.N + self.G

    def mu(self, j: int) -> int:
        a = (j * self.p) // self.r
        if self.basis is BasisKind.B:
            return self.p * (self.N - 1) + a - 1
        return self.p * self.N + a - 2

    @property
    def mu_of_j(self) -> dict[int, int]:
        return {j: self.mu(j) for j in range(1, self.r)}


def _digits_needed(p: int, r: int, d: int, delta: int, basis: BasisKind, target: int) -> int:
    n = 1
    if basis is BasisKind.B:
        rhs = target + ilog(p, d * p * (r - 1) + r, delta)
        while n - ilog(p, p * (r * n - 1) - r) < rhs:
            n += 1
    else:
        while n - ilog(p, p * r * (n + 1) - 3 * r) < target:
            n += 1
    return n


def _guard(p: int, r: int, d: int, delta: int, basis: BasisKind, N: int) -> int:
    if basis is BasisKind.B:
        return ilog(p, p * (r * N - 1) - r) + ilog(p, d * p * (r - 1) + r, delta)
    return ilog(p, p * r * (N + 1) - 3 * r)


def precision_plan(
    curve: Curve,
    basis: BasisKind,
    extra_digits: int = 0,
    denom_bound: int | None = None,
    target: int | None = None,
) -> PrecisionPlan:
    """``target`` overrides the digits demanded of the Frobenius matrix."""
    p, r, d, n = curve.p, curve.r, curve.d, curve.n
    g, delta = genus_delta(r, d)
    N0 = weil_n0(g, curve.q, p)
    if denom_bound is None:
        denom_bound = denominator_bound(p, r, d, delta, basis)
    # the charpoly divides by p^(n e) per power of t; the top g coefficients need this much more
    if target is None:
        target = N0 + denom_bound * max(0, n * g - 1)
    N = _digits_needed(p, r, d, delta, basis, target) + extra_digits
    return PrecisionPlan(basis, p, r, N0, target, denom_bound, N, _guard(p, r, d, delta, basis, N), extra_digits)


def euler_phi(m: int) -> int:
    out = m
    for ell in gfp.prime_factors(m):
        out -= out // ell
    return out


def multiplicative_order(a: int, m: int) -> int:
    if m == 1:
        return 1
    if math.gcd(a, m) != 1:
        raise ValueError("not invertible")
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


def _int_poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def extra_factor(delta: int, q: int, basis: BasisKind, literal: bool = False) -> list[int]:
    """Ascending integer coefficients of the factor of chi_M that is not the Weil polynomial.

    Each divisor i > 1 of delta contributes (t^k - c)^(phi(i)/k) with k the
    order of q mod i and c = q^k (basis B) or 1 (basis B').  ``literal`` uses
    k = order of q mod phi(i) and c = q for B instead; it is kept for comparison.
    """
    U = [1]
    for i in range(2, delta + 1):
        if delta % i:
            continue
        phi = euler_phi(i)
        if literal:
            k = multiplicative_order(q, phi) if math.gcd(q, phi) == 1 else 1
            c = q if basis is BasisKind.B else 1
        else:
            k = multiplicative_order(q, i)
            c = q**k if basis is BasisKind.B else 1
        if phi % k:
            raise ValueError("cycle length does not divide phi(i)")
        factor = [-c] + [0] * (k - 1) + [1]
        for _ in range(phi // k):
            U = _int_poly_mul(U, factor)
    return U


@dataclass(frozen=True)
class WeilPolynomial:
    """t^(2g) + a_1 t^(2g-1) + ... + a_g t^g + q a_(g-1) t^(g-1) + ... + q^g."""

    g: int
    q: int
    a: tuple[int, ...]

    def descending(self) -> list[int]:
        g, q = self.g, self.q
        top = [1, *self.a]
        return top + [q ** (g - i) * top[i] for i in range(g - 1, -1, -1)]

    def coefficients(self) -> list[int]:
        """Ascending coefficients (constant term first)."""
        return self.descending()[::-1]

    def __call__(self, t: int) -> int:
        acc = 0
        for c in self.descending():
            acc = acc * t + c
        return acc

    @property
    def jacobian_order(self) -> int:
        return self(1)

    def power_sums(self, count: int) -> list[int]:
        """s_e = sum of e-th powers of the roots, e = 1..count (Newton's identities)."""
        desc = self.descending()
        deg = 2 * self.g
        e_sym = [(-1) ** i * desc[i] if i <= deg else 0 for i in range(count + 1)]
        s: list[int] = []
        for e in range(1, count + 1):
            val = (-1) ** (e - 1) * e * e_sym[e] if e <= deg else 0
            for i in range(1, e):
                val += (-1) ** (i - 1) * e_sym[i] * s[e - i - 1] if i <= deg else 0
            s.append(val)
        return s

    def point_counts(self, count: int) -> list[int]:
        """#C(F_(q^e)) for e = 1..count."""
        return [self.q**e + 1 - s for e, s in enumerate(self.power_sums(count), start=1)]

    def check_weil_bounds(self) -> bool:
        g, q = self.g, self.q
        return all(a * a <= math.comb(2 * g, i) ** 2 * q**i for i, a in enumerate(self.a, start=1))


def symmetric_lift(x: int, modulus: int) -> int:
    x %= modulus
    return x - modulus if 2 * x > modulus else x


def lift_weil(
    chi: Sequence[int],
    U: Sequence[int],
    g: int,
    q: int,
    N0: int,
    precisions: Sequence[int] | None = None,
) -> WeilPolynomial:
    """Divide chi (ascending, known mod p^N0 or per-coefficient precisions) by U and lift.

    Checks exact division, the Weil bounds, the functional equation and P(1) > 0
    to the precision available for each coefficient.
    """
    p = gfp.prime_factors(q)[0]
    m = len(chi) - 1
    if m != len(U) - 1 + 2 * g:
        raise VerificationError(f"characteristic polynomial has degree {m}, expected {len(U) - 1 + 2 * g}")
    if precisions is None:
        precisions = [N0] * (m + 1)
    # work leading-first: c[k] is the coefficient of t^(m-k)
    c = list(chi[::-1])
    prec = list(precisions[::-1])
    u = list(U[::-1])
    mod = p**N0
    P = []
    for k in range(2 * g + 1):
        val = c[k] - sum(u[j] * P[k - j] for j in range(1, min(k, len(u) - 1) + 1))
        P.append(val)
    for k in range(2 * g + 1, m + 1):
        rem = c[k] - sum(u[j] * P[k - j] for j in range(k - 2 * g, min(k, len(u) - 1) + 1))
        digits = min(N0, prec[k])
        if digits > 0 and rem % p**digits:
            raise VerificationError("division by the extra factor is not exact")
    if P[0] % mod != 1 % mod:
        raise VerificationError("quotient is not monic")
    a = tuple(symmetric_lift(P[i], mod) for i in range(1, g + 1))
    W = WeilPolynomial(g, q, a)
    if not W.check_weil_bounds():
        raise VerificationError("Weil bound violated")
    full = W.descending()
    for k in range(g + 1, 2 * g + 1):
        digits = min(N0, prec[k])
        if digits > 0 and (full[k] - P[k]) % p**digits:
            raise VerificationError("functional equation violated")
    if W.jacobian_order <= 0:
        raise VerificationError("P(1) is not positive")
    return W


@dataclass
class Diagnostics:
    basis: BasisKind
    genus: int
    delta: int
    N0: int = 0
    target: int = 0
    N: int = 0
    G: int = 0
    W: int = 0
    denom_bound: int = 0
    observed_denominator: int = 0
    worst_shift: int = 0
    red2_steps: int = 0
    cycles_p: tuple = ()
    cycles_q: tuple = ()
    chi_degree: int = 0
    extra_factor: tuple = ()
    retries: int = 0
    timings: dict[str, float] = field(default_factory=dict)


def coefficient_precisions(plan: PrecisionPlan, n: int, e_obs: int, degree: int) -> list[int]:
    """Known digits of each chi_M coefficient (ascending), capped at N0."""
    out = []
    for i in range(degree + 1):
        k = degree - i
        out.append(min(plan.N0, plan.target + e_obs - n * e_obs * k))
    return out


def weil_polynomial(
    curve: Curve,
    basis: BasisKind | str | None = None,
    extra_digits: int = 0,
    threads: int = 1,
    literal_extra_factor: bool = False,
    max_retries: int = 2,
) -> tuple[WeilPolynomial, Diagnostics]:
    """The Weil polynomial of the smooth projective model of y^r = f(x)."""
    p, r, n, q = curve.p, curve.r, curve.n, curve.q
    g, delta = curve.genus, curve.delta
    kind = select_basis(p, r, g, delta, basis)
    diag = Diagnostics(kind, g, delta)
    if g == 0:
        return WeilPolynomial(0, q, ()), diag
    plan = precision_plan(curve, kind, extra_digits)
    clock = time.perf_counter()
    for attempt in range(max_retries + 1):
        Mf, stats = assemble_frobenius_matrix(curve, plan, kind, threads)
        if stats.min_shift < -plan.G:
            raise PrecisionError(f"precision exhausted: shift {stats.min_shift} below guard -{plan.G}")
        e_obs = max(0, -Mf.min_shift())
        if e_obs <= plan.denom_bound:
            break
        if attempt == max_retries:
            raise PrecisionError("matrix denominators exceed every planned bound")
        plan = precision_plan(curve, kind, extra_digits, denom_bound=e_obs)
        diag.retries += 1
    diag.timings["frobenius_matrix"] = time.perf_counter() - clock
    diag.N0, diag.target, diag.N, diag.G, diag.W = plan.N0, plan.target, plan.N, plan.G, plan.W
    diag.denom_bound, diag.observed_denominator = plan.denom_bound, e_obs
    diag.worst_shift, diag.red2_steps = stats.min_shift, stats.red2_steps
    diag.cycles_p = cycle_decomposition(r, p).cycles

    clock = time.perf_counter()
    M = frobenius_norm(Mf, n)
    cycles: CycleDecomposition = cycle_decomposition(r, q)
    diag.cycles_q = cycles.cycles
    degree = (r - 1) * (curve.d - 1)
    precs = coefficient_precisions(plan, n, e_obs, degree)
    try:
        chi = charpoly(M, cycles, precs)
    except ArithmeticError as exc:
        raise PrecisionError(str(exc)) from exc
    diag.chi_degree = len(chi) - 1
    diag.timings["charpoly"] = time.perf_counter() - clock

    U = extra_factor(delta, q, kind, literal_extra_factor)
    diag.extra_factor = tuple(U)
    P = lift_weil(chi, U, g, q, plan.N0, precs)
    return P, diag


def weil_from_power_sums(s: Sequence[int], g: int, q: int) -> WeilPolynomial:
    """Weil polynomial from the power sums s_1..s_g of its 2g roots."""
    e = [Fraction(1)]
    for k in range(1, g + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * s[i - 1]
        e.append(acc / k)
    if any(x.denominator != 1 for x in e):
        raise ValueError("power sums give non-integral symmetric functions")
    return WeilPolynomial(g, q, tuple((-1) ** i * int(e[i]) for i in range(1, g + 1)))

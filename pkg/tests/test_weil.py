import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from cycweil.cohomology import BasisKind, Curve
from cycweil.errors import VerificationError
from cycweil.oracle import oracle_weil_polynomial, points_at_infinity, random_curve
from cycweil.weil import (
    WeilPolynomial,
    extra_factor,
    ilog,
    lift_weil,
    multiplicative_order,
    precision_plan,
    select_basis,
    symmetric_lift,
    weil_from_power_sums,
    weil_n0,
    weil_polynomial,
)

B, BP = BasisKind.B, BasisKind.BPRIME


@given(st.integers(2, 50), st.integers(1, 10**12), st.integers(1, 10**6))
def test_ilog_is_exact_floor(p, num, den):
    e = ilog(p, num, den)
    assert p**e * den <= num if e >= 0 else den <= num * p ** (-e)
    assert p ** (e + 1) * den > num if e + 1 >= 0 else den > num * p ** (-e - 1)


def test_precision_plan_examples():
    c = Curve(7, 1, (0, 1), 3, (1, 0, 0, 1))
    assert weil_n0(1, 7, 7) == 2
    plan = precision_plan(c, B)
    assert (plan.N0, plan.N) == (2, 5)
    assert plan.mu(1) == 7 * 4 + 2 - 1
    plan = precision_plan(c, BP)
    assert (plan.N0, plan.N) == (2, 4)
    assert plan.mu_of_j == {1: 7 * 4 + 2 - 2, 2: 7 * 4 + 4 - 2}
    assert plan.W == plan.N + plan.G


@given(st.integers(1, 60), st.sampled_from([3, 5, 7, 9, 25, 49, 121, 169, 343]))
def test_n0_is_minimal(g, q):
    p = [x for x in (3, 5, 7, 11, 13) if q % x == 0][0]
    n0 = weil_n0(g, q, p)
    bound = (2 * math.comb(2 * g, g)) ** 2 * q**g
    assert p ** (2 * n0) >= bound and p ** (2 * n0 - 2) < bound


def test_select_basis_examples():
    assert select_basis(7, 3, 13, 3) is BP
    assert select_basis(7, 11, 45, 11) is BP
    assert select_basis(7, 3, 13, 3, "b") is B
    assert select_basis(7, 3, 13, 3, B) is B


def test_extra_factor_examples():
    assert extra_factor(1, 49, B) == [1]
    assert extra_factor(3, 49, B) == [49**2, -98, 1]
    # (t - 7)(t^2 - 49) and (t - 1)(t^2 - 1)
    assert extra_factor(4, 7, B) == [343, -49, -7, 1]
    assert extra_factor(4, 7, BP) == [1, -1, -1, 1]
    # the literal variant differs once some cycle has length > 1
    assert extra_factor(4, 7, B, literal=True) != extra_factor(4, 7, B)


def _power_sums(asc, count):
    desc = asc[::-1]
    deg = len(desc) - 1
    e = [(-1) ** i * desc[i] for i in range(deg + 1)]
    s = []
    for k in range(1, count + 1):
        v = (-1) ** (k - 1) * k * (e[k] if k <= deg else 0)
        for i in range(1, min(k, deg + 1)):
            v += (-1) ** (i - 1) * e[i] * s[k - i - 1]
        s.append(v)
    return s


@given(st.integers(1, 40), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 23, 25, 27, 49, 121, 169]))
def test_extra_factor_power_sums(delta, q):
    if math.gcd(delta, q) != 1:
        return
    for basis in (B, BP):
        U = extra_factor(delta, q, basis)
        assert len(U) - 1 == delta - 1 and U[-1] == 1
        sums = _power_sums(U, 6)
        for e, s in enumerate(sums, start=1):
            scale = q**e if basis is B else 1
            assert s == scale * (points_at_infinity(delta, q**e) - 1)


def test_lift_weil_examples():
    N0 = 4
    m = 7**N0
    assert lift_weil([7, 3, 1], [1], 1, 7, N0).a == (3,)
    assert symmetric_lift(m - 2, m) == -2
    assert symmetric_lift(m // 2, m) == m // 2
    chi = [49 * 49 * 49, -4 * 49 * 49 - 98 * 49, 49 * 49 + 4 * 98 + 49 * 49 + 49, -4 - 98, 1]
    # (t - 49)^2 (t^2 - 4t + 49), ascending
    U = [2401, -98, 1]
    prod = [0] * 5
    for i, x in enumerate(U):
        for j, y in enumerate([49, -4, 1]):
            prod[i + j] += x * y
    assert lift_weil([c % 49**4 for c in prod], U, 1, 49, 4).a == (-4,)


def test_lift_weil_failures():
    N0 = 4
    m = 7**N0
    with pytest.raises(VerificationError, match="extra factor"):
        lift_weil([7 + 1, 3, 1, 0], [1, 1], 1, 7, N0)
    with pytest.raises(VerificationError, match="Weil bound"):
        lift_weil([7, 9, 1], [1], 1, 7, N0)
    with pytest.raises(VerificationError, match="functional equation"):
        lift_weil([8, 3, 1], [1], 1, 7, N0)


@st.composite
def weil_polys(draw):
    """Products of quadratics t^2 - c t + q with |c| <= 2 sqrt(q): genuine Weil polynomials."""
    q = draw(st.sampled_from([3, 5, 7, 25, 49, 121]))
    g = draw(st.integers(1, 5))
    poly = [1]
    for _ in range(g):
        c = draw(st.integers(-math.isqrt(4 * q), math.isqrt(4 * q)))
        quad = [q, -c, 1]
        out = [0] * (len(poly) + 2)
        for i, x in enumerate(poly):
            for j, y in enumerate(quad):
                out[i + j] += x * y
        poly = out
    desc = poly[::-1]
    return WeilPolynomial(g, q, tuple(desc[1 : g + 1]))


@given(weil_polys())
def test_weil_polynomial_roundtrips(P):
    assert P.check_weil_bounds()
    assert weil_from_power_sums(P.power_sums(P.g), P.g, P.q) == P
    asc = P.coefficients()
    assert all(asc[i] == P.q ** (P.g - i) * asc[2 * P.g - i] for i in range(P.g + 1))
    assert P.jacobian_order > 0


def test_multiplicative_order():
    assert multiplicative_order(7, 4) == 2
    assert multiplicative_order(49, 3) == 1


def test_elliptic_example():
    c = Curve(7, 1, (0, 1), 2, (0, -1, 0, 1))
    P, _ = weil_polynomial(c)
    assert P.coefficients() == [7, 0, 1]


def test_r3_d3_matches_oracle():
    c = Curve(7, 1, (0, 1), 3, (1, 0, 0, 1))
    assert weil_polynomial(c)[0] == oracle_weil_polynomial(c)


def test_genus_zero_short_circuit():
    c = Curve(5, 1, (0, 1), 2, (1, 0, 1))
    P, _ = weil_polynomial(c)
    assert P.g == 0 and P.coefficients() == [1]


SMALL = [(p, n, r, d) for p in (3, 5, 7, 11) for n in (1, 2) for r in (2, 3, 4) for d in (3, 4, 5) if r % p]


@settings(max_examples=12)
@given(st.sampled_from(SMALL), st.integers(0, 1000))
def test_bases_agree_and_extra_digits_are_stable(shape, seed):
    curve = random_curve(*shape, seed)
    if curve.q**curve.genus > 10**9:
        return
    Pb, _ = weil_polynomial(curve, basis="b")
    Pp, _ = weil_polynomial(curve, basis="bprime")
    assert Pb == Pp
    assert weil_polynomial(curve, basis="bprime", extra_digits=2)[0] == Pp
    # (sqrt q - 1)^2g <= P(1) <= (sqrt q + 1)^2g, widened to integer square roots
    lo = (math.isqrt(curve.q) - 1) ** (2 * curve.genus)
    hi = (math.isqrt(curve.q - 1) + 2) ** (2 * curve.genus)
    assert lo <= Pp.jacobian_order <= hi

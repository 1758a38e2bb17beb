import itertools

import pytest
from hypothesis import given, strategies as st

from cycweil.padic import (
    ScaledZq,
    ZqElem,
    apply_sigma,
    canonicalize,
    elem,
    make_context,
    scaled,
    scaled_add,
    scaled_mul,
    scaled_value_mod,
    sigma_generator_image,
    zq_add,
    zq_div_exact_int,
    zq_inv,
    zq_mul,
    zq_sub,
)
from cycweil.padic import NonUnitError

F49 = (4, -1, 1)


def test_prime_field_context():
    ctx = make_context(7, 1, 3, (0, 1))
    assert ctx.q == 7
    assert sigma_generator_image(ctx).coeffs == (0,)


def test_f49_context_sigma_gen():
    ctx = make_context(7, 2, 1, F49)
    assert ctx.q == 49
    # the conjugate root 1 - t
    assert sigma_generator_image(ctx).coeffs == (1, 6)


def test_sigma_gen_satisfies_modulus_at_higher_precision():
    ctx = make_context(7, 2, 6, F49)
    z = sigma_generator_image(ctx).coeffs
    Q = list(ctx.Q)
    val = ctx.horner_raw(Q, z)
    assert val == (0, 0)
    # z = t^7 mod 7
    t7 = ctx.pow_raw(ctx.gen, 7)
    assert all((a - b) % 7 == 0 for a, b in zip(z, t7))


def test_context_rejects_bad_input():
    with pytest.raises(ValueError):
        make_context(8, 1, 2, (0, 1))
    with pytest.raises(ValueError):
        make_context(7, 0, 2, ())
    with pytest.raises(ValueError):
        make_context(5, 2, 2, (4, 0, 1))  # x^2 - 1


def test_ring_examples():
    ctx = make_context(7, 2, 1, F49)
    a = elem(ctx, (0, 1))
    assert zq_mul(ctx, a, elem(ctx, 1)) == a
    assert zq_mul(ctx, a, a).coeffs == (3, 1)
    z = make_context(7, 1, 2, (0, 1))
    assert zq_inv(z, elem(z, 2)).coeffs == (25,)


def test_inverse_of_non_unit():
    ctx = make_context(7, 2, 3, F49)
    with pytest.raises(NonUnitError):
        zq_inv(ctx, elem(ctx, (7, 14)))


def test_div_exact_int_examples():
    ctx = make_context(7, 1, 2, (0, 1))
    assert zq_div_exact_int(ctx, scaled(ctx, 6), 3) == ScaledZq(0, ZqElem((2,)))
    assert zq_div_exact_int(ctx, scaled(ctx, 1), 7) == ScaledZq(-1, ZqElem((1,)))
    assert zq_div_exact_int(ctx, ScaledZq(1, ZqElem((3,))), 14) == ScaledZq(0, ZqElem((26,)))


def test_apply_sigma_examples():
    ctx = make_context(7, 2, 1, F49)
    alpha = elem(ctx, (0, 1))
    assert apply_sigma(ctx, alpha, 2) == alpha
    assert apply_sigma(ctx, alpha, 1).coeffs == (1, 6)
    assert apply_sigma(ctx, elem(ctx, 5), 1) == elem(ctx, 5)


def _elements(ctx):
    return [elem(ctx, c) for c in itertools.product(range(ctx.M), repeat=ctx.n)]


@pytest.mark.parametrize("p,n,W,mod", [(2, 1, 2, (0, 1)), (3, 2, 1, (2, 2, 1)), (5, 1, 2, (0, 1)), (7, 2, 1, F49)])
def test_ring_axioms_exhaustive(p, n, W, mod):
    ctx = make_context(p, n, W, mod)
    els = _elements(ctx)
    sample = els[:: max(1, len(els) // 12)]
    for a in sample:
        if ctx.is_unit_raw(a.coeffs):
            assert zq_mul(ctx, a, zq_inv(ctx, a)) == elem(ctx, 1)
        for b in sample:
            assert zq_sub(ctx, zq_add(ctx, a, b), b) == a
            for c in sample:
                assert zq_add(ctx, zq_add(ctx, a, b), c) == zq_add(ctx, a, zq_add(ctx, b, c))
                left = zq_mul(ctx, a, zq_add(ctx, b, c))
                assert left == zq_add(ctx, zq_mul(ctx, a, b), zq_mul(ctx, a, c))


CONTEXTS = [
    make_context(3, 3, 5, (1, 2, 0, 1)),
    make_context(7, 2, 4, F49),
    make_context(11, 2, 3, (4, 10, 1)),
    make_context(5, 1, 6, (0, 1)),
]


@st.composite
def ctx_and_elems(draw, count=2):
    ctx = draw(st.sampled_from(CONTEXTS))
    els = [elem(ctx, tuple(draw(st.integers(0, ctx.M - 1)) for _ in range(ctx.n))) for _ in range(count)]
    return ctx, els


@given(ctx_and_elems())
def test_sigma_is_multiplicative(data):
    ctx, (a, b) = data
    lhs = apply_sigma(ctx, zq_mul(ctx, a, b))
    rhs = zq_mul(ctx, apply_sigma(ctx, a), apply_sigma(ctx, b))
    assert lhs == rhs


@given(ctx_and_elems(1))
def test_sigma_lifts_frobenius(data):
    ctx, (a,) = data
    lhs = apply_sigma(ctx, a).coeffs
    rhs = ctx.pow_raw(a.coeffs, ctx.p)
    assert all((x - y) % ctx.p == 0 for x, y in zip(lhs, rhs))


@given(ctx_and_elems(1))
def test_sigma_has_order_n(data):
    ctx, (a,) = data
    assert apply_sigma(ctx, a, ctx.n) == a


@given(ctx_and_elems(2), st.integers(-3, 3), st.integers(-3, 3))
def test_scaled_arithmetic_preserves_values(data, s, t):
    ctx, (a, b) = data
    x, y = ScaledZq(s, a), ScaledZq(t, b)
    cx = canonicalize(ctx, x)
    assert canonicalize(ctx, cx) == cx
    lo = min(s, t)
    # compare p^-lo * value mod p^(W - max shift gap)
    prec = ctx.prec - abs(s - t)
    if prec > 0:
        shifted = lambda z: ScaledZq(z.shift - lo, z.mantissa)
        total = scaled_add(ctx, x, y)
        expect = ctx.add_raw(
            ctx.scale_raw(ctx.p ** (s - lo), a.coeffs), ctx.scale_raw(ctx.p ** (t - lo), b.coeffs)
        )
        got = scaled_value_mod(ctx, shifted(total), prec)
        assert got == tuple(v % ctx.p**prec for v in expect)
    prod = scaled_mul(ctx, x, y)
    expect = ctx.mul_raw(a.coeffs, b.coeffs)
    got = scaled_value_mod(ctx, ScaledZq(prod.shift - s - t, prod.mantissa), ctx.prec)
    assert got == expect


@given(ctx_and_elems(1), st.integers(1, 500).filter(lambda m: m % 2))
def test_div_exact_int_roundtrip(data, m):
    ctx, (a,) = data
    x = ScaledZq(0, a)
    y = zq_div_exact_int(ctx, x, m)
    back = scaled_mul(ctx, y, scaled(ctx, m))
    got = scaled_value_mod(ctx, back, ctx.prec - 3) if ctx.prec > 3 else None
    if got is not None:
        assert got == tuple(v % ctx.p ** (ctx.prec - 3) for v in a.coeffs)

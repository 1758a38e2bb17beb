"""Exactness checks for single reduction steps: (before - after) = dQ on the curve.

A step that divides by an integer of valuation v only determines its output to
W + shift - v digits, so residuals are checked to that many digits.
"""

import random

from cycweil.cohomology import (
    combine_forms,
    exact_differential,
    form_numerator,
    red1_step,
    red1_witness,
    red2_step,
    red2_witness,
)
from cycweil.oracle import random_curve
from cycweil.padic import valuation
from cycweil.polyring import ZqPoly


def random_poly(rng, ctx, length):
    return ZqPoly.from_coeffs(ctx, [tuple(rng.randrange(ctx.M) for _ in range(ctx.n)) for _ in range(length)])


def vanishes(residual, digits):
    return residual.is_zero() or residual.canonical().shift >= digits


def red1_residual(lc, R, k, ell):
    """(residual, digits) for one tau-reduction step."""
    after = red1_step(R, k, ell, lc)
    P, E = red1_witness(R, k, ell, lc)
    dQ = exact_differential(P, E, ell, lc)
    digits = lc.ctx.prec + R.shift - valuation(lc.r * (k - 1) + ell, lc.ctx.p)
    return form_numerator(combine_forms((1, {k: R}), (-1, {k - 1: after}), (-1, dQ)), lc.fbar), digits


def red2_residual(lc, T, ell):
    """(residual, digits) for one x-reduction step."""
    after = red2_step(T, ell, lc)
    assert after.degree < T.degree
    P, E = red2_witness(T, ell, lc)
    dQ = exact_differential(P, E, ell, lc)
    digits = lc.ctx.prec + T.shift - valuation(lc.r * (T.degree + 1) - ell * lc.d, lc.ctx.p)
    return form_numerator(combine_forms((1, {0: T}), (-1, {0: after}), (-1, dQ)), lc.fbar), digits


def random_step_case(seed):
    """(kind, residual, digits) for one randomized Red1 or Red2 step on a random small curve."""
    rng = random.Random(seed)
    p = rng.choice([3, 5, 7, 11])
    n = rng.choice([1, 1, 2])
    r = rng.choice([x for x in (2, 3, 4, 5, 6) if x % p])
    d = rng.randint(2, 7)
    curve = random_curve(p, n, r, d, seed)
    lc = curve.lift(rng.randint(2, 6))
    if rng.random() < 0.5:
        ell = rng.choice(list(range(1, r)) + list(range(r + 1, 2 * r)))
        k = rng.randint(1, 3 * p)
        R = random_poly(rng, lc.ctx, d)
        return ("red1", *red1_residual(lc, R, k, ell))
    ell = rng.randint(1, r - 1)
    T = random_poly(rng, lc.ctx, rng.randint(d - 1, 3 * d)) + ZqPoly.monomial(lc.ctx, rng.randint(d - 1, 3 * d))
    if T.degree < d - 1:
        T = T + ZqPoly.monomial(lc.ctx, d - 1)
    return ("red2", *red2_residual(lc, T, ell))

"""Acceptance suite: one PASS/FAIL line per criterion.

Criteria 3 to 6 are audited on every curve used by criteria 1, 2 and 8, under
each basis that curve is run with.
"""

import math
import random
import time
from dataclasses import dataclass, field

import pytest

from _witness import random_step_case, vanishes
from cycweil.catalog import GENUS13_F49, GENUS26_F121
from cycweil.cohomology import BasisKind, Curve
from cycweil.frobmatrix import assemble_frobenius_matrix, charpoly, cycle_decomposition, frobenius_norm
from cycweil.oracle import oracle_weil_polynomial, random_curve
from cycweil.weil import WeilPolynomial, extra_factor, ilog, precision_plan, weil_polynomial

B, BP = BasisKind.B, BasisKind.BPRIME
SAMPLE_SIZE = 32
SAMPLE_BUDGET = 600.0
WITNESS_CASES = 500


@pytest.fixture(scope="module")
def say(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(line):
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)

    return emit


def verdict(say, k, ok, detail):
    say(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {k}: {detail}"


@dataclass
class Audit:
    """Everything criteria 3 to 6 look at for one (curve, basis) run."""

    curve: Curve
    basis: BasisKind
    P: WeilPolynomial
    diag: object
    seconds: float
    problems: dict = field(default_factory=dict)

    def flag(self, k, msg):
        self.problems.setdefault(k, []).append(msg)


def _poly_divmod_int(num, den):
    """Ascending integer polynomials, den monic; returns (quotient, remainder)."""
    num = list(num)
    dq = len(den) - 1
    quo = [0] * max(1, len(num) - dq)
    for k in range(len(num) - 1, dq - 1, -1):
        c = num[k]
        quo[k - dq] = c
        for i in range(dq + 1):
            num[k - dq + i] -= c * den[i]
    return quo, num[:dq]


def audit(curve, basis):
    start = time.perf_counter()
    P, diag = weil_polynomial(curve, basis=basis)
    a = Audit(curve, diag.basis, P, diag, time.perf_counter() - start)
    g, q, p, n, r, delta = curve.genus, curve.q, curve.p, curve.n, curve.r, curve.delta
    mod = p**diag.N0

    # 3: degree of chi and exact division by U, with every coefficient known to N0 digits
    if diag.chi_degree != 2 * g + delta - 1:
        a.flag(3, f"deg chi = {diag.chi_degree}")
    U = extra_factor(delta, q, diag.basis)
    if delta == 1 and U != [1]:
        a.flag(3, f"U = {U} for delta 1")
    degree = (r - 1) * (curve.d - 1)
    full = precision_plan(curve, diag.basis, target=diag.N0 + diag.denom_bound * max(0, n * degree - 1))
    Mf, stats = assemble_frobenius_matrix(curve, full, diag.basis)
    e_obs = max(0, -Mf.min_shift())
    if e_obs > full.denom_bound:
        a.flag(3, f"observed denominator {e_obs} over bound {full.denom_bound}")
    try:
        chi = charpoly(frobenius_norm(Mf, n), cycle_decomposition(r, q), diag.N0)
    except ArithmeticError as exc:
        a.flag(6, f"chi not in Z_p: {exc}")
        chi = None
    if chi is not None:
        quo, rem = _poly_divmod_int(chi, U)
        if any(c % mod for c in rem):
            a.flag(3, "division by U leaves a remainder mod p^N0")
        if [c % mod for c in quo] != [c % mod for c in P.coefficients()]:
            a.flag(3, "chi / U disagrees with the emitted P mod p^N0")

    # 4: two extra digits change nothing; reductions stay inside the guard
    P2, diag2 = weil_polynomial(curve, basis=diag.basis, extra_digits=2)
    if P2.a != P.a:
        a.flag(4, "extra_digits=2 changed the result")
    for d_ in (diag, diag2):
        if d_.worst_shift < -d_.G:
            a.flag(4, f"worst shift {d_.worst_shift} below guard -{d_.G}")

    # 5: integrality of the pseudo-basis matrix
    if diag.basis is BP:
        floor = 0 if p >= 2 * r else -ilog(p, 2 * r - 1)
        for shift in (Mf.min_shift(), -diag.observed_denominator):
            if shift < floor:
                a.flag(5, f"shift {shift} below {floor}")

    # 6: structure of M_F and of the emitted polynomial
    try:
        Mf.check_block_support()
    except AssertionError as exc:
        a.flag(6, str(exc))
    if diag.basis is BP and (diag.red2_steps or stats.red2_steps):
        a.flag(6, "x-degree reduction ran in pseudo-basis mode")
    coeffs = P.coefficients()
    if any(coeffs[i] != q ** (g - i) * coeffs[2 * g - i] for i in range(g + 1)):
        a.flag(6, "functional equation fails")
    if not P.check_weil_bounds():
        a.flag(6, "Weil bounds fail")
    if P.jacobian_order <= 0:
        a.flag(6, "P(1) <= 0")
    return a


def sample_curves(count, seed=2024):
    """Random curves inside the oracle's reach, over the allowed parameter grid."""
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < count:
        p = rng.choice([3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
        n = rng.choice([1, 2])
        r = rng.choice([2, 3, 4, 5, 6])
        d = rng.randint(3, 9)
        if r % p == 0:
            continue
        g = ((r - 1) * (d - 1) - (math.gcd(r, d) - 1)) // 2
        if g == 0 or (p**n) ** g > 10**7 or (p, n, r, d) in seen:
            continue
        seen.add((p, n, r, d))
        out.append(random_curve(p, n, r, d, seed=rng.randrange(10**6)))
    return out


AUDITS = []


def test_criterion_1_reference_example(say):
    ref = GENUS13_F49
    start = time.perf_counter()
    a = audit(ref.curve, None)
    AUDITS.append(a)
    elapsed = time.perf_counter() - start
    ok = a.P.a == ref.weil_a
    verdict(say, 1, ok, f"genus {ref.curve.genus} over F_{ref.curve.q}: a_1..a_13 {'match' if ok else 'differ'} ({elapsed:.1f}s incl. audit)")


def test_criterion_2_oracle_equivalence(say):
    curves = sample_curves(SAMPLE_SIZE)
    bad, elapsed = [], 0.0
    for c in curves:
        start = time.perf_counter()
        want = oracle_weil_polynomial(c)
        elapsed += time.perf_counter() - start
        for basis in (B, BP):
            a = audit(c, basis)
            AUDITS.append(a)
            elapsed += a.seconds
            if a.P.a != want.a:
                bad.append((c.p, c.n, c.r, c.d, basis.value))
    ok = not bad and elapsed < SAMPLE_BUDGET
    deltas = sum(c.delta > 1 for c in curves)
    verdict(
        say, 2, ok,
        f"{len(curves)} curves x 2 bases ({deltas} with delta > 1), mismatches {bad or 'none'}, {elapsed:.0f}s of {SAMPLE_BUDGET:.0f}s for oracle plus both bases",
    )


def _audit_verdict(say, k, label):
    assert AUDITS, "criteria 1 and 2 must run first"
    failures = [(a.curve.p, a.curve.n, a.curve.r, a.curve.d, a.basis.value, a.problems[k]) for a in AUDITS if k in a.problems]
    verdict(say, k, not failures, f"{label} on {len(AUDITS)} runs; failures {failures or 'none'}")


def test_criterion_3_extra_factor(say):
    _audit_verdict(say, 3, "deg chi = 2g + delta - 1 and exact division by U mod p^N0")


def test_criterion_4_precision(say):
    _audit_verdict(say, 4, "stable under 2 extra digits, worst shift within guard")


def test_criterion_5_pseudo_basis_integrality(say):
    n_bp = sum(a.basis is BP for a in AUDITS)
    _audit_verdict(say, 5, f"pseudo-basis shift floor ({n_bp} pseudo-basis runs)")


def test_criterion_6_structure(say):
    _audit_verdict(say, 6, "block support, no x-reduction in pseudo-basis, Z_p, functional equation, Weil bounds, P(1) > 0")


def test_criterion_7_witnesses(say):
    kinds, bad = {"red1": 0, "red2": 0}, []
    for seed in range(WITNESS_CASES):
        kind, residual, digits = random_step_case(seed)
        kinds[kind] += 1
        if not vanishes(residual, digits):
            bad.append(seed)
    verdict(say, 7, not bad, f"{WITNESS_CASES} single steps ({kinds['red1']} Red1, {kinds['red2']} Red2), failing seeds {bad or 'none'}")


def test_criterion_8_larger_genus(say):
    ref = GENUS26_F121
    start = time.perf_counter()
    a = audit(ref.curve, None)
    elapsed = time.perf_counter() - start
    stretch = a.P.a == ref.weil_a
    ok = not a.problems
    verdict(
        say, 8, ok,
        f"genus {ref.curve.genus} over F_{ref.curve.q}, basis {a.basis.value}: criteria 3-6 "
        f"{'hold' if ok else a.problems}; recorded coefficients {'match' if stretch else 'differ'} ({elapsed:.0f}s)",
    )

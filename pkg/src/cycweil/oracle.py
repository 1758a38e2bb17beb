"""Brute-force ground truth: point counts over F_{q^e} and the Weil polynomial they determine.

Field elements of F_{p^m} are encoded as integers sum c_i p^i (little-endian
coefficient vectors in the tower generator). Multiplication and the power
test go through exp/log tables of a primitive element, built with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np

from . import gfp
from .cohomology import Curve
from .gfp import random_irreducible
from .weil import WeilPolynomial

DEFAULT_CAP = 10**7
CHUNK = 1 << 18

__all__ = [
    "DEFAULT_CAP",
    "FqTower",
    "naive_curve_count",
    "points_at_infinity",
    "points_at_infinity_enumerated",
    "curve_counts",
    "weil_from_counts",
    "oracle_weil_polynomial",
    "random_irreducible",
    "random_curve",
]


def _digits(v: np.ndarray, p: int, m: int) -> np.ndarray:
    out = np.empty((v.shape[0], m), dtype=np.int64)
    for i in range(m):
        v, out[:, i] = np.divmod(v, p)
    return out


def _encode(digits: np.ndarray, p: int) -> np.ndarray:
    weights = p ** np.arange(digits.shape[1], dtype=np.int64)
    return digits @ weights


def _mult_matrix(elem: list[int], modulus: list[int], p: int) -> np.ndarray:
    """Matrix of v -> v*elem acting on row vectors of coefficients."""
    m = len(modulus) - 1
    rows = []
    for i in range(m):
        prod = gfp.mod(gfp.mul(elem, [0] * i + [1], p), modulus, p)
        rows.append(prod + [0] * (m - len(prod)))
    return np.array(rows, dtype=np.float64)


@dataclass
class FqTower:
    """F_{p^(n e)} containing F_{p^n} = F_p[alpha]/(base_modulus)."""

    p: int
    n: int
    e: int
    base_modulus: tuple[int, ...]
    seed: int = 0
    modulus: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        p, m = self.p, self.n * self.e
        base = gfp.normalize(self.base_modulus, p)
        if len(base) != self.n + 1 or base[-1] != 1 or not gfp.is_irreducible(base, p):
            raise ValueError("base modulus must be monic irreducible of degree n")
        self.base_modulus = tuple(base)
        mod = base if self.e == 1 else random_irreducible(p, m, self.seed)
        if not gfp.is_irreducible(mod, p):
            raise ValueError("tower modulus is reducible")
        self.modulus = tuple(mod)

    @property
    def m(self) -> int:
        return self.n * self.e

    @property
    def size(self) -> int:
        return self.p**self.m

    @cached_property
    def primitive(self) -> list[int]:
        p, mod, order = self.p, list(self.modulus), self.size - 1
        primes = gfp.prime_factors(order) if order > 1 else []
        for code in range(1, self.size):
            cand = gfp.trim([(code // p**i) % p for i in range(self.m)])
            if all(gfp.powmod(cand, order // ell, mod, p) != [1] for ell in primes):
                return cand
        raise AssertionError("no primitive element found")

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(exp, log): exp[k] = g^k for 0 <= k < Q-1; log[0] is unused."""
        p, m, Q = self.p, self.m, self.size
        mod = list(self.modulus)
        exp = np.empty(Q - 1, dtype=np.int64)
        exp[0] = 1
        filled = 1
        step = list(self.primitive)
        while filled < Q - 1:
            # rows [filled, 2*filled) are rows [0, filled) times g^filled; float64 matmul is exact here
            mat = _mult_matrix(step, mod, p)
            count = min(filled, Q - 1 - filled)
            for lo in range(0, count, CHUNK):
                hi = min(count, lo + CHUNK)
                block = np.mod(_digits(exp[lo:hi], p, m).astype(np.float64) @ mat, p)
                exp[filled + lo : filled + hi] = _encode(block.astype(np.int64), p)
            filled += count
            step = gfp.mod(gfp.mul(step, step, p), mod, p)
        log = np.zeros(Q, dtype=np.int64)
        log[exp] = np.arange(Q - 1, dtype=np.int64)
        if len(np.unique(exp)) != Q - 1:
            raise AssertionError("primitive element tables are not a bijection")
        return exp, log

    def encode(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def mul(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        exp, log = self.tables
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        out = exp[(log[a] + log[b]) % (self.size - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def add(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        p, m = self.p, self.m
        b = np.broadcast_to(np.asarray(b, dtype=np.int64), a.shape)
        return _encode((_digits(a, p, m) + _digits(b, p, m)) % p, p)

    def poly_eval_all(self, coeffs: Sequence[int]) -> np.ndarray:
        """Values of a polynomial with encoded coefficients at every element, by encoding order."""
        out = np.empty(self.size, dtype=np.int64)
        for lo in range(0, self.size, CHUNK):
            xs = np.arange(lo, min(self.size, lo + CHUNK), dtype=np.int64)
            acc = np.zeros_like(xs)
            for c in reversed(coeffs):
                acc = self.add(self.mul(acc, xs), c)
            out[lo : lo + len(xs)] = acc
        return out

    def poly_eval_scalar(self, coeffs: Sequence[int], x: int) -> int:
        """Evaluate a little-endian polynomial with encoded coefficients at one element."""
        acc = np.zeros(1, dtype=np.int64)
        xs = np.array([x], dtype=np.int64)
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, xs), c)
        return int(acc[0])

    @cached_property
    def base_embedding(self) -> int:
        """Encoded image of alpha: the smallest root of the base modulus in the tower."""
        if self.e == 1:
            return self.encode([0, 1]) if self.n > 1 else 0
        enc_base = [self.encode([c]) for c in self.base_modulus]
        roots = np.nonzero(self.poly_eval_all(enc_base) == 0)[0]
        if len(roots) == 0:
            raise AssertionError("base modulus has no root in the tower")
        root = int(roots[0])
        if self.poly_eval_scalar(enc_base, root) != 0:
            raise AssertionError("embedding check failed")
        return root

    def embed(self, coeffs: Sequence[int]) -> int:
        """Image of sum c_i alpha^i from F_{p^n}."""
        if self.n == 1:
            return self.encode([coeffs[0]])
        return self.poly_eval_scalar([self.encode([c]) for c in coeffs], self.base_embedding)


def points_at_infinity(delta: int, Q: int) -> int:
    return gcd(delta, Q - 1)


def points_at_infinity_enumerated(r: int, d: int, Q: int) -> int:
    """Count solutions of Y^r = X^d with X, Y nonzero, modulo the weighted scaling.

    The weights (r, d)/delta are coprime, so F_Q^* acts freely and every orbit
    has Q - 1 elements. Elements are handled through their discrete logs.
    """
    order = Q - 1
    m = gcd(r, order)
    logs = np.arange(order, dtype=np.int64)
    good = int(np.count_nonzero((logs * d) % m == 0))
    total = good * m
    if total % order:
        raise AssertionError("orbit count is not integral")
    return total // order


def naive_curve_count(curve: Curve, e: int, cap: int = DEFAULT_CAP, seed: int = 0) -> int:
    """#C(F_{q^e}) for the smooth projective model of y^r = f(x)."""
    Q = curve.q**e
    if Q > cap:
        raise ValueError(f"q^e = {Q} exceeds the enumeration cap {cap}")
    tower = FqTower(curve.p, curve.n, e, curve.field_poly, seed)
    coeffs = [tower.embed(c) for c in curve.f]
    vals = tower.poly_eval_all(coeffs)
    _, log = tower.tables
    m = gcd(curve.r, Q - 1)
    nonzero = vals != 0
    # f(x)^((Q-1)/m) = 1 exactly when m divides the log of f(x)
    powers = np.count_nonzero(nonzero & (log[vals] % m == 0))
    affine = int(np.count_nonzero(~nonzero)) + m * int(powers)
    return affine + points_at_infinity(curve.delta, Q)


def curve_counts(curve: Curve, count: int, cap: int = DEFAULT_CAP, seed: int = 0) -> list[int]:
    return [naive_curve_count(curve, e, cap, seed) for e in range(1, count + 1)]


def weil_from_counts(counts: Sequence[int], g: int, q: int) -> WeilPolynomial:
    """Weil polynomial from #C(F_{q^e}), e = 1..g, via Newton's identities."""
    if len(counts) < g:
        raise ValueError(f"need {g} counts, got {len(counts)}")
    s = [q**e + 1 - counts[e - 1] for e in range(1, g + 1)]
    # k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} s_i
    elem = [1]
    for k in range(1, g + 1):
        acc = sum((-1) ** (i - 1) * elem[k - i] * s[i - 1] for i in range(1, k + 1))
        if acc % k:
            raise ValueError(f"non-integral elementary symmetric function e_{k}; counts are inconsistent")
        elem.append(acc // k)
    return WeilPolynomial(g, q, tuple((-1) ** k * elem[k] for k in range(1, g + 1)))


def oracle_weil_polynomial(curve: Curve, cap: int = DEFAULT_CAP, seed: int = 0) -> WeilPolynomial:
    g = curve.genus
    if g == 0:
        return WeilPolynomial(0, curve.q, ())
    return weil_from_counts(curve_counts(curve, g, cap, seed), g, curve.q)


def random_curve(p: int, n: int, r: int, d: int, seed: int = 0) -> Curve:
    """A random y^r = f(x) over F_{p^n} with f monic squarefree of degree d."""
    import random

    from .errors import NotSquarefreeError

    rng = random.Random(f"curve:{p}:{n}:{r}:{d}:{seed}")
    field_poly = tuple(random_irreducible(p, n, seed)) if n > 1 else (0, 1)
    while True:
        f = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(d)] + [(1,) + (0,) * (n - 1)]
        try:
            return Curve(p, n, field_poly, r, tuple(f))
        except NotSquarefreeError:
            continue

"""Compare weil_polynomial with brute-force point counts on random curves.

usage: python scripts/oracle_sweep.py [--count 50] [--seed 0] [--cap 10000000] [--p 3,5,7]
"""

import argparse
import math
import random
import sys
import time

from cycweil.cohomology import BasisKind
from cycweil.oracle import oracle_weil_polynomial, random_curve
from cycweil.weil import weil_polynomial


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, default=10**7, help="largest q^g to enumerate")
    ap.add_argument("--p", default="3,5,7,11,13,17,19,23,29,31")
    ap.add_argument("--n", default="1,2")
    ap.add_argument("--r", default="2,3,4,5,6")
    ap.add_argument("--d", default="3,4,5,6,7,8,9")
    args = ap.parse_args(argv)
    grid = {k: [int(v) for v in getattr(args, k).split(",")] for k in ("p", "n", "r", "d")}

    rng = random.Random(args.seed)
    failures, done, attempts = 0, 0, 0
    while done < args.count and attempts < 100 * args.count:
        attempts += 1
        p, n, r, d = (rng.choice(grid[k]) for k in ("p", "n", "r", "d"))
        g = ((r - 1) * (d - 1) - (math.gcd(r, d) - 1)) // 2
        if r % p == 0 or g == 0 or (p**n) ** g > args.cap:
            continue
        curve = random_curve(p, n, r, d, seed=rng.randrange(10**6))
        clock = time.perf_counter()
        want = oracle_weil_polynomial(curve, args.cap)
        t_oracle = time.perf_counter() - clock
        cells = []
        for basis in (BasisKind.B, BasisKind.BPRIME):
            clock = time.perf_counter()
            got, _ = weil_polynomial(curve, basis=basis)
            ok = got.a == want.a
            failures += not ok
            cells.append(f"{basis.value}={'ok' if ok else 'MISMATCH'} {time.perf_counter() - clock:.2f}s")
        done += 1
        print(f"p={p:<2} n={n} r={r} d={d} g={g:<2} delta={curve.delta}  oracle {t_oracle:.2f}s  " + "  ".join(cells))
    print(f"{done} curves, {failures} mismatches")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())

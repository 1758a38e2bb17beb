"""Command-line front end.

A job file is a JSON object with keys p, n, r, f and optionally field_poly and
any of the option keys (basis, guard_extra, verify, oracle_cap, format,
threads, seed). Command-line flags override the file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import oracle
from .cohomology import Curve
from .errors import CycweilError, MalformedInputError, OracleMismatchError
from .weil import weil_polynomial

REPORT_KEYS = (
    "field_poly", "genus", "delta", "basis", "N0", "N", "W",
    "cycles", "weil_coefficients", "coefficients", "jacobian_order", "timings", "verify",
)


@dataclass
class JobSpec:
    p: int
    n: int
    r: int
    f: list
    field_poly: list[int] | None = None
    basis: str = "auto"
    guard_extra: int = 0
    verify: bool = False
    oracle_cap: int = oracle.DEFAULT_CAP
    format: str = "json"
    threads: int = 1
    seed: int = 0

    def curve(self) -> Curve:
        if self.field_poly is None:
            self.field_poly = [0, 1] if self.n == 1 else oracle.random_irreducible(self.p, self.n, self.seed)
        coeffs = []
        for c in self.f:
            if isinstance(c, bool) or not isinstance(c, (int, list, tuple)):
                raise MalformedInputError(f"bad coefficient {c!r}")
            if isinstance(c, int):
                coeffs.append((c,))
            else:
                if not all(isinstance(v, int) and not isinstance(v, bool) for v in c):
                    raise MalformedInputError(f"bad coefficient {c!r}")
                coeffs.append(tuple(c))
        return Curve(self.p, self.n, tuple(self.field_poly), self.r, tuple(coeffs))


_INT_KEYS = ("p", "n", "r", "guard_extra", "oracle_cap", "threads", "seed")


def parse_job(data: dict[str, Any]) -> JobSpec:
    if not isinstance(data, dict):
        raise MalformedInputError("job must be a key/value object")
    missing = [k for k in ("p", "n", "r", "f") if k not in data]
    if missing:
        raise MalformedInputError(f"missing keys: {', '.join(missing)}")
    unknown = set(data) - set(JobSpec.__dataclass_fields__)
    if unknown:
        raise MalformedInputError(f"unknown keys: {', '.join(sorted(unknown))}")
    for k in _INT_KEYS:
        if k in data and (not isinstance(data[k], int) or isinstance(data[k], bool)):
            raise MalformedInputError(f"{k} must be an integer")
    if not isinstance(data["f"], list):
        raise MalformedInputError("f must be a list of coefficients")
    fp = data.get("field_poly")
    if fp is not None and (not isinstance(fp, list) or not all(isinstance(v, int) for v in fp)):
        raise MalformedInputError("field_poly must be a list of integers")
    if data.get("basis", "auto") not in ("auto", "b", "bprime"):
        raise MalformedInputError("basis must be auto, b or bprime")
    if data.get("format", "json") not in ("json", "text"):
        raise MalformedInputError("format must be json or text")
    return JobSpec(**data)


def load_job(path: str) -> dict[str, Any]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedInputError("input is not UTF-8") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"cannot parse {path}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cycweil", description="Weil polynomial of y^r = f(x) over F_q.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="FILE", help="JSON job file")
    src.add_argument("--job", metavar="JSON", help="inline job object")
    ap.add_argument("--basis", choices=("auto", "b", "bprime"))
    ap.add_argument("--guard-extra", type=int, metavar="K")
    ap.add_argument("--verify", action="store_true", default=None)
    ap.add_argument("--oracle-cap", type=int, metavar="M")
    fmt = ap.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    ap.add_argument("--threads", type=int, metavar="T")
    ap.add_argument("--seed", type=int, metavar="S")
    return ap


def compute_report(job: JobSpec, curve: Curve | None = None) -> dict[str, Any]:
    curve = curve or job.curve()
    start = time.perf_counter()
    basis = None if job.basis == "auto" else job.basis
    P, diag = weil_polynomial(curve, basis=basis, extra_digits=job.guard_extra, threads=job.threads)
    timings = {"total": time.perf_counter() - start, **diag.timings}
    verify: dict[str, Any] | None = None
    if job.verify:
        needed = curve.q**curve.genus
        if needed > job.oracle_cap:
            verify = {"status": "skipped", "reason": f"q^g = {needed} exceeds oracle cap {job.oracle_cap}"}
        else:
            clock = time.perf_counter()
            O = oracle.oracle_weil_polynomial(curve, job.oracle_cap, job.seed)
            timings["oracle"] = time.perf_counter() - clock
            verify = {"status": "match" if O.a == P.a else "mismatch", "oracle_weil_coefficients": list(O.a)}
    report = {
        "field_poly": list(curve.field_poly),
        "genus": curve.genus,
        "delta": curve.delta,
        "basis": diag.basis.value,
        "N0": diag.N0,
        "N": diag.N,
        "W": diag.W,
        "cycles": [list(c) for c in diag.cycles_q],
        "weil_coefficients": list(P.a),
        "coefficients": P.coefficients(),
        "jacobian_order": str(P.jacobian_order),
        "timings": {k: round(v, 6) for k, v in timings.items()},
        "verify": verify,
    }
    assert tuple(report) == REPORT_KEYS
    return report


def render_text(rep: dict[str, Any], curve: Curve) -> str:
    lines = [
        f"curve     y^{curve.r} = f(x), deg f = {curve.d}, over F_{curve.q} (p={curve.p}, n={curve.n})",
        f"field     {rep['field_poly']}",
        f"genus     {rep['genus']}   delta {rep['delta']}   basis {rep['basis']}",
        f"precision N0={rep['N0']} N={rep['N']} W={rep['W']}",
        f"cycles    {rep['cycles']}",
    ]
    lines += [f"a_{i:<3d} {a}" for i, a in enumerate(rep["weil_coefficients"], start=1)]
    lines.append(f"#Jac      {rep['jacobian_order']}")
    lines.append(f"P(t)      {rep['coefficients']}  (ascending)")
    lines.append("timings   " + ", ".join(f"{k}={v:.3f}s" for k, v in rep["timings"].items()))
    if rep["verify"] is not None:
        lines.append(f"verify    {rep['verify']['status']}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        if args.input is not None:
            data = load_job(args.input)
        else:
            try:
                data = json.loads(args.job)
            except json.JSONDecodeError as exc:
                raise MalformedInputError(f"cannot parse inline job: {exc}") from exc
        if isinstance(data, dict):
            overrides = {
                "basis": args.basis,
                "guard_extra": args.guard_extra,
                "verify": args.verify,
                "oracle_cap": args.oracle_cap,
                "format": args.format,
                "threads": args.threads,
                "seed": args.seed,
            }
            data = {**data, **{k: v for k, v in overrides.items() if v is not None}}
        job = parse_job(data)
        curve = job.curve()
        report = compute_report(job, curve)
    except CycweilError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.exit_code
    if job.format == "json":
        print(json.dumps(report), file=stdout)
    else:
        print(render_text(report, curve), file=stdout)
    if report["verify"] is not None and report["verify"]["status"] == "mismatch":
        print(f"error: {OracleMismatchError.__name__}: oracle disagrees", file=stderr)
        return OracleMismatchError.exit_code
    return 0


def main() -> None:
    sys.exit(run())

import io
import json

import pytest

from cycweil.catalog import GENUS13_F49
from cycweil.cli import REPORT_KEYS, run


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _job(**kw):
    return ["--job", json.dumps(kw)]


def test_elliptic_report_keys_and_verify():
    code, out, _ = _run(_job(p=7, n=1, r=2, f=[0, -1, 0, 1]) + ["--verify"])
    assert code == 0
    rep = json.loads(out)
    assert tuple(rep) == REPORT_KEYS
    assert rep["weil_coefficients"] == [0]
    assert rep["coefficients"] == [7, 0, 1]
    assert rep["jacobian_order"] == "8"
    assert rep["verify"]["status"] == "match"


def test_exit_codes():
    assert _run(_job(p=7, n=1, r=4, f=[0, 0, 1, 1]))[0] == 3
    assert _run(_job(p=3, n=1, r=3, f=[1, 1, 0, 1]))[0] == 4
    assert _run(_job(p=7, n=1, r=3, f=[1, 1, 0, 2]))[0] == 2
    assert _run(_job(p=7, n=1, r=3))[0] == 2
    assert _run(_job(p=7, n=1, r=3, f="x^3"))[0] == 2
    assert _run(["--job", "{not json"])[0] == 2
    assert _run(["--input", "/nonexistent/job.json"])[0] == 2


def test_input_file_and_text(tmp_path):
    job = tmp_path / "job.json"
    job.write_text(json.dumps({"p": 5, "n": 1, "r": 3, "f": [1, 2, 0, 1], "basis": "b"}))
    code, out, _ = _run(["--input", str(job), "--text"])
    assert code == 0
    assert "basis b" in out and "a_1" in out


def test_generated_field_polynomial_is_echoed_and_deterministic():
    argv = _job(p=5, n=2, r=3, f=[[1, 2], [0, 1], [3], [0, 0], [1]]) + ["--seed", "4"]
    a = json.loads(_run(argv)[1])
    b = json.loads(_run(argv)[1])
    a.pop("timings"), b.pop("timings")
    assert json.dumps(a) == json.dumps(b)
    assert len(a["field_poly"]) == 3 and a["field_poly"][-1] == 1
    P = a["coefficients"]
    g, q = a["genus"], 25
    # functional equation on the emitted list
    assert all(P[i] == q ** (g - i) * P[2 * g - i] for i in range(g + 1))
    assert P[::-1][1 : g + 1] == a["weil_coefficients"]


def test_oracle_cap_skips_verification():
    code, out, _ = _run(_job(p=5, n=1, r=3, f=[1, 2, 0, 1]) + ["--verify", "--oracle-cap", "4"])
    assert code == 0
    assert json.loads(out)["verify"]["status"] == "skipped"


@pytest.mark.slow
def test_reference_curve_report():
    c = GENUS13_F49.curve
    job = {"p": c.p, "n": c.n, "field_poly": [4, -1, 1], "r": c.r, "f": [list(x) for x in c.f]}
    code, out, _ = _run(["--job", json.dumps(job), "--threads", "2"])
    assert code == 0
    rep = json.loads(out)
    assert rep["weil_coefficients"][:2] == [4, -88]
    assert rep["field_poly"] == [4, 6, 1]

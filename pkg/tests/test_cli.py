"""Command line: parsing, serialisation, exit codes and presets."""

import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrt_waves import cli
from nrt_waves.cli import (EXIT_GATE, EXIT_INVALID, EXIT_OK, Table, main, parse_constants,
                           parse_number, parse_perturb, to_csv, to_json, write_atomic)
from nrt_waves.errors import ValidationError


def run(argv, capsys):
    rc = main(argv)
    out, err = capsys.readouterr()
    return rc, out, err


# ---------------------------------------------------------------------------
# parsing


@pytest.mark.parametrize("text,want", [
    ("1", 1.0), ("-2.5", -2.5), ("7/3", 7 / 3), ("i", 1j), ("-i/2", -0.5j), ("2j", 2j),
    ("1+2i", 1 + 2j), ("1e-3", 1e-3), ("0.5-0.25i", 0.5 - 0.25j),
])
def test_parse_number(text, want):
    got = parse_number(text)
    assert got == want
    assert isinstance(got, float) == (want.imag == 0 if isinstance(want, complex) else True)


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1/2/3"])
def test_parse_number_rejects(text):
    with pytest.raises(ValidationError):
        parse_number(text)


def test_parse_perturb():
    assert parse_perturb("beta=1.01x") == ("beta", 1.01)
    assert parse_perturb("b=0.99") == ("b", 0.99)
    with pytest.raises(ValidationError):
        parse_perturb("beta")
    with pytest.raises(ValidationError):
        parse_perturb("beta=1+1ix")


def test_parse_constants():
    assert parse_constants(["--alpha", "i", "--K1=1", "--m", "2"]) == {
        "alpha": 1j, "K1": 1.0, "m": 2.0}
    with pytest.raises(ValidationError):
        parse_constants(["--alpha"])
    with pytest.raises(ValidationError):
        parse_constants(["alpha", "1"])


# ---------------------------------------------------------------------------
# serialisation

values = st.one_of(st.none(), st.floats(allow_nan=False, allow_infinity=False, width=64))
cvalues = st.one_of(st.none(), st.complex_numbers(allow_nan=False, allow_infinity=False,
                                                  max_magnitude=1e300))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(values, cvalues), min_size=1, max_size=8))
def test_csv_json_round_trip(rows):
    t = Table()
    t.add("r", [r for r, _ in rows])
    t.add("c", [c for _, c in rows], is_complex=True)
    parsed = list(csv.DictReader(io.StringIO(to_csv(t))))
    assert list(parsed[0].keys()) == ["r", "c_re", "c_im"]
    doc = json.loads(to_json(t, {"command": "test"}))
    for (r, c), line, jr, jc in zip(rows, parsed, doc["columns"]["r"], doc["columns"]["c"]):
        if r is None:
            assert line["r"] == "" and jr is None
        else:
            assert float(line["r"]) == r and jr == r
        if c is None:
            assert line["c_re"] == line["c_im"] == "" and jc is None
        else:
            assert complex(float(line["c_re"]), float(line["c_im"])) == c
            assert complex(jc["re"], jc["im"]) == c


def test_nonfinite_become_nulls():
    t = Table()
    t.add("r", [math.nan, math.inf, 1.0])
    assert list(csv.reader(io.StringIO(to_csv(t))))[1:] == [[""], [""], ["1"]]
    assert json.loads(to_json(t, {}))["columns"]["r"] == [None, None, 1.0]


def test_write_atomic(tmp_path):
    target = tmp_path / "out.csv"
    target.write_text("old")
    write_atomic(str(target), "new\n")
    assert target.read_text() == "new\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


# ---------------------------------------------------------------------------
# gtf-eval and figures


@pytest.mark.parametrize("preset", sorted(cli.GTF_PRESETS))
def test_gtf_presets(preset, capsys):
    rc, out, _ = run(["gtf-eval", "--figure", preset], capsys)
    assert rc == EXIT_OK
    doc = json.loads(out)
    rep = doc["report"]
    assert rep["identity_max_abs"] < 1e-10
    assert abs(rep["sin_max"] - 1.0) < 1e-12
    xs = np.array(doc["columns"]["x"])
    i = int(np.argmax(doc["columns"]["sin"]))
    assert abs(xs[i] - rep["pi_pq"] / 2) < 1e-12
    assert all(math.isfinite(v) for v in doc["columns"]["sin"] + doc["columns"]["cos"])


def test_gtf_eval_needs_parameters(capsys):
    rc, _, err = run(["gtf-eval"], capsys)
    assert rc == EXIT_INVALID and "--p" in err


def test_gtf_eval_infinite_period(capsys):
    rc, _, _ = run(["gtf-eval", "--p", "0.8", "--q", "2"], capsys)
    assert rc == EXIT_INVALID
    rc, out, _ = run(["gtf-eval", "--p", "0.8", "--q", "2", "--x", "0", "2", "--n", "5",
                      "--format", "csv"], capsys)
    assert rc == EXIT_OK and out.splitlines()[0] == "x,sin,cos,tan,identity_defect"


def test_figure_gtf_alias(capsys):
    rc, out, _ = run(["figure", "gtf-3.5", "--n", "21"], capsys)
    assert rc == EXIT_OK and len(json.loads(out)["columns"]["x"]) == 21


def test_figure2_dataset(tmp_path, capsys):
    target = tmp_path / "fig2.json"
    rc, _, _ = run(["figure", "fig2", "--out", str(target)], capsys)
    assert rc == EXIT_OK
    doc = json.loads(target.read_text())
    entry = doc["report"]["fig2"]
    assert entry["two_path_max_abs"] < 1e-9
    assert all(v is not None and math.isfinite(v) for v in doc["columns"]["rho_fig2"])


def test_unknown_figure(capsys):
    rc, _, _ = run(["figure", "fig7"], capsys)
    assert rc == EXIT_INVALID


# ---------------------------------------------------------------------------
# solve


def test_solve_csv(capsys):
    rc, out, _ = run(["solve", "--family", "lx.c2zero", "--points", "5", "--format", "csv"], capsys)
    assert rc == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 5
    assert {"x", "z_re", "z_im", "P_re", "Psi_im", "Phi_re", "rho"} <= set(rows[0])


def test_solve_matches_figure_preset(capsys):
    rc, out, _ = run(["solve", "--family", "sc.beta0", "--q", "2", "--t", "1", "--normalize",
                      "--points", "30"], capsys)
    assert rc == EXIT_OK
    doc = json.loads(out)
    assert doc["report"]["preset"] == "fig2"
    assert doc["config"]["b"] == {"re": 0.0, "im": -0.5}
    assert doc["config"]["x"] == [-3.0, 3.0]


def test_solve_normalizes(capsys):
    rc, out, _ = run(["solve", "--family", "sc.beta0", "--normalize", "--points", "40"], capsys)
    assert rc == EXIT_OK
    doc = json.loads(out)
    # densities may be negative, so only a nonzero mass is required
    assert doc["report"]["n_omega"] != 0
    lo, hi = doc["config"]["x"]
    rho = np.array(doc["columns"]["rho"])
    assert abs(rho.mean() * (hi - lo) - 1.0) < 1e-3


def test_solve_passes_sundman_exponents(capsys):
    rc, out, _ = run(["solve", "--family", "lt.sundman", "--m", "2", "--n", "3",
                      "--x", "0.2", "1.5", "--points", "7"], capsys)
    assert rc == EXIT_OK
    doc = json.loads(out)
    assert doc["config"]["constants"]["m"] == 2 and doc["config"]["constants"]["n"] == 3
    assert len(doc["columns"]["x"]) == 7


def test_solve_rejects_unknown_constant(capsys):
    rc, _, err = run(["solve", "--family", "tw.gtf.r2", "--bogus", "1"], capsys)
    assert rc == EXIT_INVALID and "accepted keys" in err


# ---------------------------------------------------------------------------
# check


def test_check_passes(capsys):
    rc, out, _ = run(["check", "--family", "tw.q32.tanh"], capsys)
    assert rc == EXIT_OK
    rep = json.loads(out)["report"]
    assert rep["passed"] and all(c["passed"] for c in rep["checks"].values())


def test_check_perturbed_fails_gate(capsys):
    rc, out, _ = run(["check", "--family", "tw.q32.tanh", "--perturb", "beta=1.01x"], capsys)
    assert rc == EXIT_GATE
    assert json.loads(out)["report"]["perturbed"] == {"constant": "beta", "factor": 1.01}


def test_check_sundman_pair(capsys):
    rc, _, _ = run(["check", "--family", "lt.sundman", "--m", "1", "--n", "2"], capsys)
    assert rc == EXIT_OK


def test_check_lift(capsys):
    rc, out, _ = run(["check", "--family", "tw.gtf.r2", "--lift"], capsys)
    assert rc == EXIT_OK
    assert abs(json.loads(out)["report"]["pde"]["conv_order"] - 2.0) < 0.3


def test_check_lift_without_fields(capsys):
    rc, _, _ = run(["check", "--family", "lt.abel.q4", "--lift"], capsys)
    assert rc == EXIT_INVALID


def test_check_unknown_family(capsys):
    rc, _, err = run(["check", "--family", "tw.none"], capsys)
    assert rc == EXIT_INVALID and "unknown family" in err


# ---------------------------------------------------------------------------
# entry points


def test_module_entry_point(tmp_path):
    env = {**os.environ, "NRT_WAVES_THREADS": "2"}
    target = tmp_path / "g.csv"
    proc = subprocess.run([sys.executable, "-m", "nrt_waves", "gtf-eval", "--p", "2", "--q", "2",
                           "--n", "3", "--format", "csv", "--out", str(target)],
                          capture_output=True, text=True, env=env, timeout=120)
    assert proc.returncode == 0, proc.stderr
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert float(rows[1]["sin"]) == pytest.approx(0.0, abs=1e-12)


def test_bad_thread_env(tmp_path):
    env = {**os.environ, "NRT_WAVES_THREADS": "x"}
    proc = subprocess.run([sys.executable, "-m", "nrt_waves", "figure", "fig2", "--n", "4"],
                          capture_output=True, text=True, env=env, timeout=120)
    assert proc.returncode == EXIT_INVALID

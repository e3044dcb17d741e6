import csv
import json
import math
import subprocess
import sys

import pytest

from hardylab.atom_factory import golubov_example, power_counterexample
from hardylab.cli import main
from hardylab.hardy_transforms import hardy_transform
from hardylab.radial_calculus import RadialFunction, dumps, loads


def run(*args, stdin=None):
    proc = subprocess.run(
        [sys.executable, "-m", "hardylab", *args], input=stdin, capture_output=True, text=True, timeout=600
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def write(tmp_path):
    def _write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else dumps(obj))
        return str(path)

    return _write


def test_apply_hardy_golubov(write, capsys):
    assert main(["apply", "--input", write("b.json", golubov_example(1))]) == 0
    got = loads(capsys.readouterr().out)
    assert got == hardy_transform(golubov_example(1))
    assert got(0.5) == -1.0
    assert got(1.5) == pytest.approx(1 - 2 / 1.5, rel=1e-15)
    assert got(2.5) == 0.0


def test_apply_zero_and_constant_symbol(write, capsys):
    assert main(["apply", "--input", write("z.json", RadialFunction.zero(2))]) == 0
    assert loads(capsys.readouterr().out).is_zero
    args = ["apply", "--op", "commutator", "--input", write("b.json", golubov_example(2)),
            "--symbol", write("c.json", RadialFunction.constant(2, 5.0))]
    assert main(args) == 0
    assert loads(capsys.readouterr().out).is_zero


def test_norm_examples(write, capsys):
    h = write("h.json", hardy_transform(power_counterexample(0.0, 1.0, 1)))
    assert main(["norm", "--input", h, "--op", "lp", "--p", "1"]) == 0
    assert json.loads(capsys.readouterr().out) == {"value": "inf", "mode": "exact", "error_bound": 0.0}
    chi = write("chi.json", RadialFunction.indicator(1, 1.0))
    assert main(["norm", "--input", chi, "--op", "herz", "--p", "2"]) == 0
    assert abs(json.loads(capsys.readouterr().out)["value"] - 2.0) <= 1e-9
    assert main(["norm", "--input", chi, "--op", "weak1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == 2.0


def test_norm_bmo_and_cbmo(write, capsys):
    f = write("f.json", '{"kind":"line","dim":1,"pieces":[{"lo":0,"hi":"inf","terms":[{"c":1,"gamma":0,"k":0}]}]}')
    assert main(["norm", "--input", f, "--op", "bmo"]) == 0
    assert abs(json.loads(capsys.readouterr().out)["value"] - 0.5) <= 1e-6
    cfg = write("cfg.json", '{"search": {"grid_per_decade": 9, "decades": 3}}')
    assert main(["norm", "--input", write("b.json", golubov_example(1)), "--op", "cbmo", "--config", cfg]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["mode"] == "search_lower_bound" and 0 < res["value"] < math.inf


def test_exit_codes_fault_injection(write):
    good = write("good.json", RadialFunction.indicator(1, 1.0))
    assert run("norm", "--input", write("bad.json", "{not json"), "--op", "lp")[0] == 2
    assert run("norm", "--input", write("shape.json", '{"kind":"radial"}'), "--op", "lp")[0] == 2
    assert run("norm", "--input", "/nonexistent/f.json", "--op", "lp")[0] == 2
    code, _, err = run("norm", "--input", good, "--op", "lp", "--p", "0.5")
    assert code == 3 and "InvalidExponent" in err
    sing = write("sing.json", RadialFunction(1, [(0, 1, [(1.0, -1.0, 0)])]))
    code, _, err = run("apply", "--input", sing)
    assert code == 3 and "NotLocallyIntegrable" in err
    code, _, err = run("norm", "--input", good, "--op", "cbmo", "--q", "1")
    assert code == 3 and "InvalidExponent" in err


def test_reproduce_config_errors(write):
    assert run("reproduce", "golubov", "--config", write("c.json", '{"seeds": 3}'))[0] == 3
    assert run("reproduce", "golubov", "--config", write("d.json", "[1"))[0] == 3
    assert run("reproduce", "golubov", "--config", write("e.json", '{"num_atoms": 0}'))[0] == 3


def test_reproduce_golubov_reports_both_claims(tmp_path):
    out = tmp_path / "g.json"
    code, _, _ = run("reproduce", "golubov", "--out", str(out))
    report = json.loads(out.read_text())
    assert report["schema"] == "hardy-report/1"
    assert code == (0 if report["passed"] else 1)
    rows = report["claims"]
    assert {"suite", "claim", "anchor", "value", "expected", "tolerance", "passed"} <= set(rows[0])
    stated = [r for r in rows if "-n 2^n ln 2" in r["claim"]]
    corrected = [r for r in rows if "-n v_n 2^n ln 2" in r["claim"]]
    assert len(stated) == len(corrected) == 3
    assert all(r["passed"] for r in corrected)
    assert not any(r["passed"] for r in stated)
    assert code == 1


def test_reproduce_commutator_small(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"num_atoms": 8}))
    out = tmp_path / "r.json"
    code, _, _ = run("reproduce", "commutator", "--config", str(cfg), "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"]
    traces = sorted(p.name for p in tmp_path.glob("r_*.csv"))
    assert traces
    with open(tmp_path / traces[0]) as fh:
        assert list(csv.DictReader(fh))


def test_reproduce_is_byte_identical(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"num_atoms": 10, "corpus_size": 5}))
    runs = []
    for tag in ("a", "b"):
        d = tmp_path / tag
        d.mkdir()
        run("reproduce", "h1l1", "--config", str(cfg), "--seed", "7", "--out", str(d / "r.json"))
        runs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    assert len(runs[0]) == 4  # report plus one trace per n
    assert runs[0] == runs[1]


def test_reproduce_csv_format(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"num_atoms": 5, "corpus_size": 5}))
    code, out, _ = run("reproduce", "weak11", "--config", str(cfg), "--format", "csv", "--n", "1")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert rows and all(r["suite"] == "weak11" for r in rows)
    assert all(r["passed"] == "True" for r in rows)


def test_stdin_input():
    code, out, _ = run("apply", "--input", "-", stdin=dumps(RadialFunction.indicator(1, 1.0)))
    assert code == 0
    assert loads(out)(4.0) == 0.25

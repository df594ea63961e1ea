import io
import json
import math
import shutil
from importlib import resources

import pytest

from steinlab.cli import main
from steinlab.corpus import CorpusSpec, generate
from steinlab.norms import lorentz_norm
from steinlab.rearrange import rearrangement_1d


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    lines = text.strip().splitlines()
    header = json.loads(lines[0])
    cols = lines[1].split(",")
    return header, [dict(zip(cols, ln.split(","))) for ln in lines[2:] if not ln.startswith("#")]


def test_norm_matches_library():
    code, out, _ = run(["norm", "--gen", "box", "--p", "1.5", "--q", "2"])
    assert code == 0
    header, body = rows(out)
    assert header["params"]["spec"]["generator"] == "box_indicator"
    f = generate(CorpusSpec("box"))
    assert float(body[0]["value"]) == lorentz_norm(rearrangement_1d(f), 1.5, 2.0)


def test_norm_of_zero():
    code, out, _ = run(["norm", "--gen", "zero"])
    assert code == 0 and float(rows(out)[1][0]["value"]) == 0.0


def test_norm_of_gaussian_closed_form():
    code, out, _ = run(["norm", "--gen", "gauss", "--p", "2", "--q", "2"])
    assert abs(float(rows(out)[1][0]["value"]) / math.pi**0.25 - 1) <= 1e-9


@pytest.mark.parametrize("argv", [["norm", "--p", "-1"], ["norm", "--gen", "nope"],
                                  ["norm", "--p", "nan"], ["norm", "--params", "[1]"]])
def test_invalid_parameters_exit_2(argv):
    assert run(argv)[0] == 2


def test_other_subcommands():
    for argv in (["rearrange", "--gen", "random", "--seed", "3"],
                 ["rearrange", "--gen", "gauss", "--n", "2", "--count", "8", "--kind", "repeated"],
                 ["fourier", "--gen", "gauss", "--count", "32"],
                 ["maximal", "--gen", "box", "--n", "2", "--count", "8"],
                 ["maximal", "--gen", "box", "--count", "16", "--t", "1.0"]):
        code, out, _ = run(argv)
        assert code == 0, argv
        json.loads(out.splitlines()[0])


def test_sharpness_cli():
    code, out, _ = run(["sharpness", "--r-min", "8", "--r-max", "24"])
    assert code == 0
    header, body = rows(out)
    assert 0.4 <= header["params"]["slope"] <= 0.6
    for row in body:
        assert float(row["B"]) == math.sqrt(int(row["r"]) + 1)
    code, out, _ = run(["sharpness", "--n", "1", "--r-min", "8", "--r-max", "24"])
    assert abs(json.loads(out.splitlines()[0])["params"]["slope"]) < 1e-12
    assert run(["sharpness", "--r-min", "8", "--r-max", "11"])[0] == 2


def test_verify_exact_default_corpus(tmp_path):
    code, out, err = run(["verify", "exact", "--jobs", "1", "--baseline", str(tmp_path / "b.json")])
    assert code == 0, err
    header, body = rows(out)
    assert header["schema_version"] == 1 and len(body) > 100
    assert all(r["status"] == "pass" for r in body)
    assert all(r["tool_version"] and r["schema_version"] == "1" for r in body)


def test_verify_nan_corpus_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('[{"generator": "gauss", "params": {"sigma": NaN}}]')
    code, _, err = run(["verify", "exact", "--corpus", str(bad)])
    assert code == 2 and "NaN" in err


def test_verify_bootstrap_and_breach(tmp_path):
    corpus = tmp_path / "c.json"
    corpus.write_text(json.dumps({"schema_version": 1, "entries": [
        {"generator": "gauss", "grid": {"n": 1, "count": 64, "spacing": 0.125}}]}))
    base = tmp_path / "base.json"
    argv = ["verify", "stein", "--corpus", str(corpus), "--baseline", str(base), "--jobs", "1"]
    code, _, err = run(argv)
    assert code == 0 and base.exists() and "baseline written" in err
    code, out1, _ = run(argv)
    assert code == 0
    _, out2 = run(argv)[:2]
    assert out1 == out2
    doc = json.loads(base.read_text())
    key = next(k for k in doc["max_ratio"] if k.startswith("stein_block_fourier"))
    doc["max_ratio"][key] /= 2
    base.write_text(json.dumps(doc))
    assert run(argv)[0] == 1
    assert run(argv + ["--update-baseline"])[0] == 0
    assert run(argv)[0] == 0


def test_committed_baseline_holds(tmp_path):
    base = tmp_path / "baseline.json"
    shutil.copy(resources.files("steinlab") / "data" / "baseline.json", base)
    code, _, err = run(["verify", "stein", "--jobs", "1", "--baseline", str(base)])
    assert code == 0, err

import json

import pytest

from sqdiff.cli import run
from sqdiff.rationals import enumerate_rationals, write_rational_set
from sqdiff.sdf import IntegerSet, greedy_sdf, write_integer_set


def _run(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _json(out):
    return json.loads(out.strip().splitlines()[-1])


def test_construct_and_verify(tmp_path, capsys):
    p = tmp_path / "g.txt"
    code, out, _ = _run(capsys, ["construct", "--kind", "greedy", "--N", "1000", "--out", str(p)])
    assert code == 0 and _json(out)["size"] == 115
    code, out, _ = _run(capsys, ["verify", "--set", str(p)])
    d = _json(out)
    assert code == 0 and d["sdf"] is True and d["schema"] == "sqdiff/1"


def test_verify_failure_prints_witness(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    write_integer_set(p, IntegerSet(10, (1, 5)))
    code, out, _ = _run(capsys, ["verify", "--set", str(p)])
    assert code == 1 and _json(out)["witness"] == {"a": 5, "b": 1, "n": 2}


def test_planted_requires_q_and_r(tmp_path, capsys):
    code, _, err = _run(capsys, ["construct", "--kind", "planted", "--N", "100",
                                 "--out", str(tmp_path / "x")])
    assert code == 2 and "usage" in err


def test_usage_errors(tmp_path, capsys):
    assert _run(capsys, [])[0] == 2
    assert _run(capsys, ["verify"])[0] == 2
    assert _run(capsys, ["verify", "--set", str(tmp_path / "missing.txt")])[0] == 2
    assert _run(capsys, ["--version"])[0] == 0


def test_energy_backends_agree(tmp_path, capsys):
    p = tmp_path / "b.txt"
    write_rational_set(p, enumerate_rationals(6))
    outs = {}
    for backend in ("brute", "mitm", "conv"):
        code, out, _ = _run(capsys, ["energy", "--set", str(p), "--m", "2", "--backend", backend])
        assert code == 0
        outs[backend] = _json(out)["energy"]
    assert len(set(outs.values())) == 1


def test_output_is_deterministic(tmp_path, capsys):
    p = tmp_path / "b.txt"
    write_rational_set(p, enumerate_rationals(5))
    a = _run(capsys, ["energy", "--set", str(p), "--m", "2"])[1]
    b = _run(capsys, ["energy", "--set", str(p), "--m", "2"])[1]
    assert a == b


def test_decompose(tmp_path, capsys):
    p = tmp_path / "q.txt"
    write_rational_set(p, enumerate_rationals(6))
    code, out, _ = _run(capsys, ["decompose", "--A", str(p), "--B", str(p), "--C", str(p),
                                 "--omega", "tau3pow:1"])
    assert code == 0 and _json(out)["passed"] is True
    assert _run(capsys, ["decompose", "--A", str(p), "--B", str(p), "--C", str(p),
                         "--omega", "bad"])[0] == 2


def test_spectrum_csv(tmp_path, capsys):
    s = tmp_path / "g.txt"
    write_integer_set(s, greedy_sdf(20000))
    csvp = tmp_path / "s.csv"
    code, out, _ = _run(capsys, ["spectrum", "--set", str(s), "--csv", str(csvp), "--samples", "128"])
    assert code == 0 and "K" in _json(out)
    lines = csvp.read_text().splitlines()
    assert lines[0] == "gamma,abs_1A_hat" and len(lines) == 129


def test_sparse_spectrum_is_reported_as_error(tmp_path, capsys):
    s = tmp_path / "sparse.txt"
    write_integer_set(s, IntegerSet.of(10**4, range(1, 10**4, 500)))
    code, out, _ = _run(capsys, ["spectrum", "--set", str(s)])
    assert code == 2 and _json(out)["error"] == "SparseBranch"


def test_iterate_jsonl(tmp_path, capsys):
    s = tmp_path / "g.txt"
    write_integer_set(s, greedy_sdf(10**5))
    code, out, _ = _run(capsys, ["iterate", "--set", str(s)])
    rows = [json.loads(x) for x in out.strip().splitlines()]
    assert code == 0 and rows[-1]["summary"] is True
    alphas = [r["alpha"] for r in rows[:-1]]
    assert alphas == sorted(alphas) and all(r["sdf"] for r in rows[:-1])


def test_increment_scale_error(tmp_path, capsys):
    s = tmp_path / "g.txt"
    write_integer_set(s, greedy_sdf(10**4))
    code, out, _ = _run(capsys, ["increment", "--set", str(s), "--q", "2"])
    assert code == 2 and _json(out)["error"] == "ScaleError"


def test_increment_with_constants_file(tmp_path, capsys):
    s = tmp_path / "s.txt"
    N = 3000
    write_integer_set(s, IntegerSet.of(N, range(1, N + 1, 4)))
    c = tmp_path / "c.txt"
    c.write_text("c0_nprime = 1\n")
    outp = tmp_path / "out.txt"
    code, out, _ = _run(capsys, ["increment", "--set", str(s), "--q", "2", "--K", "1", "--nu", "0.5",
                                 "--constants", str(c), "--out", str(outp)])
    d = _json(out)
    assert code == 0 and d["found"] is True and d["alpha_prime"] == 1.0
    assert outp.read_text().startswith("# N=")


def test_chang_and_report(tmp_path, capsys):
    s = tmp_path / "g.txt"
    write_integer_set(s, greedy_sdf(300))
    g = tmp_path / "gamma.txt"
    g.write_text("1/3\n2/5\n")
    code, out, _ = _run(capsys, ["chang", "--set", str(s), "--gamma", str(g), "--m", "1"])
    assert code == 0 and _json(out)["passed"] is True
    code, out, _ = _run(capsys, ["report", "--N", "1000", "10"])
    rows = _json(out)["rows"]
    assert code == 0 and rows[0]["greedy_size"] == 115 and rows[1]["theorem_bound"] is None


def test_bad_constants_file(tmp_path, capsys):
    c = tmp_path / "c.txt"
    c.write_text("nope = 1\n")
    code, out, _ = _run(capsys, ["report", "--N", "100", "--constants", str(c)])
    assert code == 2 and _json(out)["error"] == "ConfigError"

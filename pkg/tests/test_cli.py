import csv
import io
import json

import pytest

from bessel_linz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def entries(text):
    return {e["k"]: e["value"] for e in json.loads(text)["entries"]}


def test_qpoly(capsys):
    code, out, _ = run(capsys, "qpoly", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["coefficients"] == ["1", "1", "1/3"]
    assert doc["command"] == "qpoly" and doc["params"] == {"n": 2}
    _, out, _ = run(capsys, "qpoly", "0")
    assert json.loads(out)["coefficients"] == ["1"]


def test_qpoly_rejects_negative(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qpoly", "-1"])
    assert exc.value.code == 2


def test_connection(capsys):
    _, out, _ = run(capsys, "connection", "1", "--a", "1/2")
    assert entries(out) == {0: "1/2", 1: "1/2"}
    _, out, _ = run(capsys, "connection", "2", "--a", "1", "--suppress-zeros")
    assert entries(out) == {2: "1"}
    _, out, _ = run(capsys, "connection", "2", "--a", "1")
    assert entries(out) == {0: "0", 1: "0", 2: "1"}


def test_connection_symbolic_rows_sum_to_one(capsys):
    from fractions import Fraction

    _, out, _ = run(capsys, "connection", "3")
    rows = entries(out)
    assert len(rows) == 4
    width = max(len(r["apoly"]) for r in rows.values())
    sums = [sum(Fraction(r["apoly"][i]) for r in rows.values() if i < len(r["apoly"]))
            for i in range(width)]
    assert sums == [1] + [0] * (width - 1)


def test_linearize(capsys):
    _, out, _ = run(capsys, "linearize", "1", "1", "--a", "1/2", "--suppress-zeros")
    assert entries(out) == {1: "1/4", 2: "3/4"}
    _, out, _ = run(capsys, "linearize", "1", "1", "--a", "0", "--suppress-zeros")
    assert entries(out) == {1: "1"}
    _, out, _ = run(capsys, "linearize", "1", "1", "--a", "1/2")
    assert entries(out)[0] == "0"


def test_linearize_m0_equals_connection(capsys):
    _, lin, _ = run(capsys, "linearize", "2", "0")
    _, con, _ = run(capsys, "connection", "2")
    assert entries(lin) == entries(con)


def test_linearize_both_modes(capsys):
    code, out, _ = run(capsys, "linearize", "3", "2", "--mode", "both")
    assert code == 0
    assert json.loads(out)["checks"]["modes_agree"] == {"passed": True, "differing_k": []}


def test_a_outside_needs_flag(capsys):
    with pytest.raises(SystemExit):
        main(["linearize", "1", "1", "--a", "3/2"])
    code, out, _ = run(capsys, "linearize", "1", "1", "--a", "3/2", "--allow-outside")
    assert code == 0
    assert entries(out)[2] == "-9/4"


def test_product(capsys):
    _, out, _ = run(capsys, "product", "--degrees", "1,1", "--weights", "1/2,1/2",
                    "--suppress-zeros")
    assert entries(out) == {1: "1/4", 2: "3/4"}
    code, out, _ = run(capsys, "product", "--degrees", "2,1,1", "--weights", "1/2,1/4,1/4",
                       "--check-oracle")
    from fractions import Fraction

    values = [Fraction(v) for v in entries(out).values()]
    assert code == 0 and all(v >= 0 for v in values) and sum(values) == 1
    assert json.loads(out)["checks"]["iterated_equals_oracle"]["passed"]


def test_product_bad_weights(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["product", "--degrees", "1,1", "--weights", "1/2,1/3"])
    assert exc.value.code not in (0, None)


def test_dstat(capsys):
    _, out, _ = run(capsys, "dstat", "5", "3", "1.5707963267948966")
    doc = json.loads(out)
    assert doc["entries"] == [{"k": 2, "dof": 5, "value": 1.0}]
    _, out, _ = run(capsys, "dstat", "3", "3", "0.5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["k", "dof", "value"] and [r[1] for r in rows[1:]] == ["3", "5"]


def test_csv_and_json_agree(capsys):
    for extra in ([], ["--a", "2/7"]):
        _, js, _ = run(capsys, "linearize", "3", "2", *extra)
        _, cs, _ = run(capsys, "linearize", "3", "2", "--format", "csv", *extra)
        rows = list(csv.reader(io.StringIO(cs)))
        header, body = rows[0], rows[1:]
        json_rows = entries(js)
        if extra:
            assert header == ["k", "value"]
            assert {int(r[0]): r[1] for r in body} == json_rows
        else:
            assert header[0] == "k" and header[1:] == [f"a{i}" for i in range(len(header) - 1)]
            for r in body:
                coeffs = json_rows[int(r[0])]["apoly"]
                assert r[1:1 + len(coeffs)] == coeffs
                assert all(c == "0" for c in r[1 + len(coeffs):])


def test_output_file_and_byte_identical(tmp_path, capsys):
    paths = [tmp_path / f"out{i}.json" for i in range(2)]
    for p in paths:
        assert main(["linearize", "4", "3", "--a", "1/3", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    capsys.readouterr()
    outs = [run(capsys, "mc-check", "convolution", "--n", "1", "--m", "1", "--a", "1/2",
                "--samples", "10000", "--seed", "3")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    report = json.loads(outs[0])
    assert set(report) == {"params", "samples", "seed", "ks_statistic", "critical_value", "pass"}


def test_profile_goes_to_stderr(capsys):
    code, out, err = run(capsys, "linearize", "2", "2", "--profile")
    assert code == 0 and "cell n=2 m=2" in err and "cell" not in out


@pytest.mark.parametrize("suite,args", [
    ("basis", ["--max-n", "12"]),
    ("theorem1", ["--max-n", "8"]),
    ("theorem2", ["--max-n", "6"]),
    ("theorem3", ["--max-n", "4", "--max-m", "3"]),
    ("theorem4", ["--instances", "5", "--seed", "1", "--max-n", "3"]),
    ("lemma31", ["--max-n", "6"]),
    ("lemma32", ["--max-n", "6"]),
    ("lemma33", ["--max-n", "4"]),
    ("montecarlo", ["--n", "1", "--m", "0", "--a", "1/3", "--samples", "20000"]),
])
def test_verify_suites(capsys, suite, args):
    code, out, _ = run(capsys, "verify", suite, *args)
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert doc["params"]["suite"] == suite
    assert all(c["passed"] for c in doc["checks"].values())


def test_verify_exit_code_on_failure(capsys, monkeypatch):
    from bessel_linz import verify

    def broken(max_n=3):
        res = verify.SuiteResult("lemma31", {"max_n": max_n})
        res.add("forced", False)
        return res

    monkeypatch.setattr(verify, "suite_lemma31", broken)
    code, out, _ = run(capsys, "verify", "lemma31")
    assert code == 1 and json.loads(out)["passed"] is False


def test_worker_env_override(monkeypatch, capsys):
    from bessel_linz.stochastic import default_workers

    monkeypatch.setenv("BESSEL_LINZ_THREADS", "3")
    assert default_workers() == 3
    code, out, _ = run(capsys, "verify", "theorem3", "--max-n", "3", "--max-m", "2")
    monkeypatch.setenv("BESSEL_LINZ_THREADS", "1")
    code1, out1, _ = run(capsys, "verify", "theorem3", "--max-n", "3", "--max-m", "2")
    assert code == code1 == 0 and out == out1

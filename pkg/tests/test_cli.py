from __future__ import annotations

import json
import math

import pytest

from qtrace.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moment_examples(capsys):
    assert run(capsys, "moment", "--family", "splus", "--n-dim", "6", "--rows", "1,2", "--cols", "1,2")[:2] == (0, "1/30\n")
    assert run(capsys, "moment", "--family", "oplus", "--n-dim", "4", "--rows", "1", "--cols", "1")[1] == "0\n"
    assert run(capsys, "moment", "--family", "oplus", "--n-dim", "4", "--rows", "1,1", "--cols", "1,1")[1] == "1/4\n"


def test_json_output_is_stable(capsys):
    args = ("weingarten", "--family", "splus", "--n-dim", "5", "--n", "3", "--json")
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second
    data = json.loads(first)
    assert len(data["partitions"]) == 5


def test_gram(capsys):
    code, out, _ = run(capsys, "gram", "--family", "splus", "--n-dim", "5", "--n", "2")
    assert code == 0 and out == "5 5\n5 25\n"


def test_fusion(capsys):
    code, out, _ = run(capsys, "fusion", "--family", "hplus", "--a", "1", "--b", "1")
    assert code == 0 and json.loads(out) == {"11": 1, "0": 1, "": 1}
    code, out, _ = run(capsys, "fusion", "--family", "oplus", "--a", "2", "--b", "1", "--n-dim", "4")
    assert json.loads(out)["dims"] == {"3": 56, "1": 4}


def test_charpoly(capsys):
    assert run(capsys, "charpoly", "--family", "oplus", "--label", "2")[1] == "X^2 - 1\n"


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--family", "oplus", "--n-dim", "4", "--phi1", "4", "--phi2", "15", "--json")
    data = json.loads(out)
    assert code == 0 and data["coefficients"] == {"haar": "0", "counit": "1", "alt": "0"} and data["valid"]
    code, out, _ = run(capsys, "decompose", "--family", "hplus", "--n-dim", "6", "--lambda", "-1", "--mu", "1")
    assert "alt=1" in out
    code, out, _ = run(capsys, "decompose", "--family", "splus", "--n-dim", "6", "--phi1", "-1")
    assert "valid=false" in out


def test_semigroup(capsys):
    code, out, _ = run(
        capsys, "semigroup", "--family", "splus", "--n-dim", "6", "--phi", "haar", "--t", "1", "--label", "1", "--trunc", "20", "--json"
    )
    data = json.loads(out)
    assert code == 0 and abs(data["series"] - 5 * math.exp(-1)) < 1e-9


def test_rootsys(capsys):
    code, out, _ = run(capsys, "rootsys", "--type", "A1", "--json")
    assert json.loads(out)["points"] == [["0"], ["1/2"]]
    code, out, _ = run(capsys, "rootsys", "--cartan", "[[2,-1],[-1,2]]", "--op", "in-root-lattice", "--weight", "1,1")
    assert json.loads(out)["in_root_lattice"] is True


def test_verify_suites(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "snplus", "--N", "6", "--report", str(report))
    assert code == 0
    data = json.loads(report.read_text())
    assert [r["claim_id"] for r in data] == sorted(r["claim_id"] for r in data)
    a3b3 = next(r for r in data if r["claim_id"] == "snplus_a3b3")
    assert a3b3["computed_values"]["a3"] == "15/4" and a3b3["verdict"] == "pass"
    assert run(capsys, "verify", "appendix", "--N", "4..9")[0] == 0
    assert run(capsys, "verify", "rootsys", "--type", "A2", "--radius", "2")[0] == 0


def test_verify_parallel_matches_serial(capsys):
    serial = run(capsys, "verify", "onplus", "--json")[1]
    parallel = run(capsys, "verify", "onplus", "--json", "--jobs", "2")[1]
    assert serial == parallel


@pytest.mark.parametrize(
    "argv,code",
    [
        (("moment", "--family", "oplus", "--n-dim", "4", "--rows", "1,x", "--cols", "1,1"), 2),
        (("moment", "--family", "oplus", "--n-dim", "4", "--rows", "9", "--cols", "1"), 2),
        (("moment", "--family", "quux", "--n-dim", "4", "--rows", "1", "--cols", "1"), 2),
        (("moment", "--family", "splus", "--n-dim", "6", "--rows", "1,1,1,1,1,1,1,1", "--cols", "1,1,1,1,1,1,1,1"), 3),
        (("decompose", "--family", "oplus", "--n-dim", "4", "--phi1", "half", "--phi2", "1"), 2),
        (("verify", "snplus", "--N", "abc"), 2),
        (("fusion", "--family", "hplus", "--a", "2", "--b", "1"), 2),
        (("rootsys", "--type", "E8"), 2),
        ((), 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    try:
        got = main(list(argv))
    except SystemExit as e:  # argparse rejects the command line itself
        got = e.code
    assert got == code


def test_failed_verdict_exits_one(capsys, monkeypatch):
    from qtrace import classify
    from qtrace.records import VerificationRecord

    def broken(N):
        rec = VerificationRecord("onplus_recursion", "oplus", N)
        rec.check("forced", False)
        return rec

    monkeypatch.setattr(classify, "onplus_recursion", broken)
    code, out, err = run(capsys, "verify", "onplus", "--N", "3")
    assert code == 1
    assert "onplus_recursion" in err

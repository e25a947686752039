import json

import pytest

from hypmodp.cli import EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_OK, main

F = ["--alpha", "1/3,1/2", "--beta", "5/12,1"]
G = ["--alpha", "1/9,4/9,5/9", "--beta", "1/3,1"]
T = ["--alpha", "1/2,1/2", "--beta", "1"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


class TestAnalyze:
    def test_f13_reports_violation_but_exits_ok(self, capsys):
        code, data = run_json(capsys, "analyze", *F, "--prime", "13")
        assert code == EXIT_OK
        assert data["E"] == [0, 6] and data["S"] == [0, 6]
        assert data["p_property"]["P5"] is False
        assert data["d"] == 12 and data["l"] == 1

    def test_text(self, capsys):
        code, out, _ = run(capsys, "analyze", *G, "--prime", "17")
        assert code == EXIT_OK and "l=2" in out and "S = [0]" in out

    def test_prime_dividing_d(self, capsys):
        code, _, err = run(capsys, "analyze", *F, "--prime", "3")
        assert code == EXIT_HYPOTHESIS and err

    @pytest.mark.parametrize(
        "argv",
        [
            ["analyze", *F, "--prime", "15"],
            ["analyze", *F],
            ["analyze", "--alpha", "1/2,x", "--beta", "1", "--prime", "5"],
            ["analyze", "--alpha", "1/2,1/2", "--beta", "1,1,1", "--prime", "5"],
            ["analyze", "--alpha=-1,1/2", "--beta", "1", "--prime", "5"],
        ],
    )
    def test_bad_input(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == EXIT_INPUT and err.startswith("error:")


class TestConstructVerify:
    def test_round_trip(self, capsys, tmp_path):
        out = tmp_path / "rel.json"
        code, _, _ = run(capsys, "construct", *F, "--prime", "37", "--out", str(out))
        assert code == EXIT_OK and out.exists()
        code, data = run_json(capsys, "verify", *F, "--relation", str(out))
        assert code == EXIT_OK and data["verdict"] == "pass"
        assert data["measured_heights"] == [111, 555]

    def test_json_is_byte_identical(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(capsys, "construct", *G, "--prime", "17", "--out", str(a))
        run(capsys, "construct", *G, "--prime", "17", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()
        _, first, _ = run(capsys, "construct", *G, "--prime", "17", "--json")
        _, second, _ = run(capsys, "construct", *G, "--prime", "17", "--json")
        assert first == second

    def test_hypothesis_failure(self, capsys):
        code, _, err = run(capsys, "construct", *F, "--prime", "13")
        assert code == EXIT_HYPOTHESIS and "P5" in err

    def test_not_integral(self, capsys):
        code, _, _ = run(capsys, "construct", *F, "--prime", "17")
        assert code == EXIT_HYPOTHESIS

    def test_corrupted_relation_fails(self, capsys, tmp_path):
        path = tmp_path / "rel.json"
        run(capsys, "construct", *T, "--prime", "7", "--out", str(path))
        data = json.loads(path.read_text())
        data["terms"][0]["ratfn"]["num"]["terms"][1][1] = 3
        path.write_text(json.dumps(data))
        code, report = run_json(capsys, "verify", *T, "--relation", str(path))
        assert code == EXIT_FAIL and report["first_failure_index"] is not None

    def test_verify_input_errors(self, capsys, tmp_path):
        path = tmp_path / "rel.json"
        run(capsys, "construct", *T, "--prime", "7", "--out", str(path))
        assert run(capsys, "verify", *T, "--relation", str(path), "--prime", "5")[0] == EXIT_INPUT
        assert run(capsys, "verify", *T, "--relation", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
        assert run(capsys, "verify", *T)[0] == EXIT_INPUT
        (tmp_path / "junk.json").write_text("{not json")
        assert run(capsys, "verify", *T, "--relation", str(tmp_path / "junk.json"))[0] == EXIT_INPUT


class TestLucas:
    def test_pass(self, capsys):
        code, data = run_json(capsys, "lucas", *T, "--prime", "5")
        assert code == EXIT_OK and data["verdict"] == "pass"

    def test_fail(self, capsys):
        code, out, _ = run(capsys, "lucas", *F, "--prime", "37")
        assert code == EXIT_FAIL and "a(1*37+16)" in out


class TestScan:
    def test_rows(self, capsys):
        code, data = run_json(capsys, "scan", *F, "--prime-min", "5", "--prime-max", "40")
        assert code == EXIT_OK
        rows = {r["p"]: r for r in data["rows"]}
        assert sorted(rows) == [5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
        assert rows[37]["constructible"] and rows[13]["failing"] == ["P5"]
        assert not rows[17]["constructible"] and "p_integral" in rows[17]["failing"]

    def test_construct_and_parallel(self, capsys):
        code, serial = run_json(capsys, "scan", *G, "--prime-min", "17", "--prime-max", "19", "--construct")
        assert code == EXIT_OK
        assert [r["verify"] for r in serial["rows"]] == ["pass", "pass"]
        _, parallel = run_json(capsys, "scan", *G, "--prime-min", "17", "--prime-max", "19", "--construct", "--parallel")
        assert parallel == serial

    def test_missing_bounds(self, capsys):
        assert run(capsys, "scan", *F, "--prime-min", "5")[0] == EXIT_INPUT


def test_selftest(capsys):
    code, data = run_json(capsys, "selftest")
    assert code == EXIT_OK and all(r["passed"] for r in data["results"])

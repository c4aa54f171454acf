"""Command-line interface over the shipped fixtures."""

import json
from pathlib import Path

from linctx.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


class TestCheck:
    def test_linear_fixture(self, capsys):
        code, out = run(capsys, "check", "--system", "linear", FIXTURES / "linear.judg")
        assert code == 0
        assert "MISMATCH" not in out

    def test_stlc_fixture(self, capsys):
        code, _ = run(capsys, "check", "--system", "stlc", FIXTURES / "stlc.judg")
        assert code == 0

    def test_ml_fixture_algo(self, capsys):
        code, _ = run(
            capsys, "check", "--system", "ml", "--algo", FIXTURES / "ml.judg"
        )
        assert code == 0

    def test_mismatch_detected(self, capsys, tmp_path):
        bad = tmp_path / "bad.judg"
        bad.write_text("nil |- abs i (x\\ x) : i -> i ; reject\n")
        code, out = run(capsys, "check", "--system", "linear", bad)
        assert code == 1
        assert "MISMATCH" in out

    def test_parse_error_gives_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.judg"
        bad.write_text("# comment\nnil |- : ; accept\n")
        code, out = run(capsys, "check", "--system", "linear", bad)
        assert code == 2
        assert ":2:" in out


class TestTranslate:
    def test_fixture(self, capsys):
        code, out = run(capsys, "translate", "--verify", FIXTURES / "terms.tm")
        assert code == 0
        lines = [l for l in out.splitlines() if l]
        assert lines[0] == "abs i (x\\ x)"  # let-free terms are unchanged
        assert "app (abs (i -> i) (x\\ x)) (abs i (x\\ x))" in lines

    def test_nonlinear_term_fails(self, capsys, tmp_path):
        f = tmp_path / "t.tm"
        f.write_text("abs i (x\\ app x x)\n")
        code, out = run(capsys, "translate", "--verify", f)
        assert code == 1
        assert "LinearityError" in out


class TestVerify:
    def test_specs_and_lemmas(self, capsys):
        code, out = run(
            capsys,
            "verify",
            FIXTURES / "specs.ctx",
            "--lemmas",
            FIXTURES / "lemmas.lem",
            "--bound-ctx",
            "2",
        )
        assert code == 0
        assert "FAIL" not in out
        for expected in (
            "ty_ctx'_distr1",
            "trans_rel_distr1",
            "trans_rel_distr2",
            "trans_rel_distr3",
            "ty_ctx_mem",
            "ty_ctx_mem_mset",
            "trans_rel_uniq_mset",
        ):
            assert expected in out

    def test_broken_spec_fails_with_counterexample(self, capsys):
        code, out = run(
            capsys,
            "verify",
            FIXTURES / "broken_freshness.ctx",
            "--lemmas",
            FIXTURES / "broken_uniq.lem",
            "--bound-ctx",
            "2",
        )
        assert code == 1
        assert "FAIL loose_uniq" in out
        assert "counterexample" in out

    def test_unknown_suite(self, capsys):
        code, out = run(capsys, "verify", "--suite", "nonsense")
        assert code == 2
        assert "unknown suite" in out

    def test_structured_deterministic_across_jobs(self, capsys):
        argv = [
            "verify",
            "--suite",
            "typing",
            "--format",
            "structured",
            "--bound-ctx",
            "1",
        ]
        code1, out1 = run(capsys, *argv, "--jobs", "1")
        code2, out2 = run(capsys, *argv, "--jobs", "2")
        assert code1 == code2 == 0
        assert out1 == out2
        for line in out1.strip().splitlines():
            record = json.loads(line)
            assert record["verdict"] == "pass"
            assert record["elapsed_ms"] is None

    def test_text_and_structured_verdicts_agree(self, capsys):
        argv = ["verify", FIXTURES / "specs.ctx", "--bound-ctx", "1"]
        code_t, out_t = run(capsys, *argv, "--format", "text")
        code_s, out_s = run(capsys, *argv, "--format", "structured")
        assert code_t == code_s == 0
        text_names = [
            line.split()[1] for line in out_t.splitlines() if line.startswith("PASS")
        ]
        json_names = [
            json.loads(line)["name"] for line in out_s.strip().splitlines()
        ]
        assert text_names == json_names

    def test_timings_flag_breaks_reproducibility_knowingly(self, capsys):
        argv = [
            "verify", "--suite", "typing", "--format", "structured",
            "--bound-ctx", "1", "--timings",
        ]
        _, out = run(capsys, *argv)
        assert json.loads(out.strip().splitlines()[0])["elapsed_ms"] is not None

"""End-to-end tests for the command line interface via main(argv)."""

import io
import json
import sys

import pytest

from lambdah.cli import entry, main
from lambdah.equivalence import Diverged, EMismatch, LockstepReport


def lines(capsys):
    return capsys.readouterr().out.splitlines()


# ---------- term commands ----------


def test_extract_prints_the_image(capsys):
    assert main(["extract", "H x y"]) == 0
    assert lines(capsys) == ["x y"]


def test_extract_expands_builtin_combinator_names(capsys):
    assert main(["extract", "H I"]) == 0
    assert lines(capsys) == ["\\x.x"]


def test_reduce_reports_the_hnf_and_step_counts(capsys):
    assert main(["reduce", "H (\\x.x) y", "--strategy", "it"]) == 0
    assert lines(capsys) == ["hnf (t_steps=1, aux_steps=1)", "y"]


def test_reduce_trace_lists_every_step(capsys):
    assert main(["reduce", "H (\\x.x) y", "--strategy", "jt", "--trace"]) == 0
    assert lines(capsys) == [
        "j_wrap (\\x.x) (H y)",
        "t      H y",
        "j_drop y",
        "hnf (t_steps=1, aux_steps=2)",
        "y",
    ]


def test_reduce_json_on_fuel_exhaustion(capsys):
    assert main(["reduce", "Omega", "--strategy", "t", "--fuel", "5", "--json"]) == 0
    assert json.loads(lines(capsys)[0]) == {
        "outcome": "fuel_exhausted",
        "term": "(\\x.x x) (\\y.y y)",
        "t_steps": 5,
    }


def test_reduce_reports_overflow_on_unbounded_growth(capsys):
    # under jt the head H chain doubles at every t-step; the state
    # outgrows the budget long before the fuel runs out
    assert main(["reduce", "H (\\x.x x) (\\x.x x)", "--strategy", "jt"]) == 0
    out = lines(capsys)
    assert out[0] == "state outgrew the budget after 11 t-steps"
    assert len(out) == 2


def test_reduce_overflow_json(capsys):
    assert main(
        ["reduce", "H (\\x.x x) (\\x.x x)", "--strategy", "jt", "--json"]
    ) == 0
    record = json.loads(lines(capsys)[0])
    assert record["outcome"] == "overflow"
    assert record["t_steps"] == 11


def test_solvable_reports_the_hnf(capsys):
    assert main(["solvable", "(\\x.x) y"]) == 0
    assert lines(capsys) == ["hnf after 1 t-steps", "y"]


def test_solvable_reports_unknown_never_unsolvable(capsys):
    assert main(["solvable", "Omega", "--fuel", "10"]) == 0
    assert lines(capsys) == ["unknown: fuel exhausted after 10 t-steps"]


# ---------- lockstep ----------


def test_lockstep_prints_checkpoints_and_verdict(capsys):
    assert main(["lockstep", "H (\\x.x) y"]) == 0
    assert lines(capsys) == [
        "t-step 1: y == y",
        "verdict: both-hnf (t-steps 1/1)",
    ]


def test_lockstep_json(capsys):
    assert main(["lockstep", "H (\\x.x) y", "--json"]) == 0
    first, last = (json.loads(line) for line in lines(capsys))
    assert first == {"t_step": 1, "image_I": "y", "image_J": "y", "equal": True}
    assert last == {"verdict": "both-hnf", "t_steps_I": 1, "t_steps_J": 1}


def test_lockstep_exit_code_on_a_bad_verdict(capsys, monkeypatch):
    # the comparison itself never fails on real input, so stub the report
    def fake(term, max_t):
        return LockstepReport(term, (), EMismatch(0), 0, 0, 0, 0)

    monkeypatch.setattr("lambdah.cli.lockstep", fake)
    assert main(["lockstep", "H x"]) == 1
    assert "image mismatch at t-step 0" in capsys.readouterr().out

    def fake_diverged(term, max_t):
        return LockstepReport(term, (), Diverged(2), 3, 2, 0, 0)

    monkeypatch.setattr("lambdah.cli.lockstep", fake_diverged)
    assert main(["lockstep", "H x"]) == 1
    assert "diverged" in capsys.readouterr().out


# ---------- fmt ----------


def test_fmt_normalises_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("H  x   y # note\n\n\\x . x\n"))
    assert main(["fmt", "-"]) == 0
    assert lines(capsys) == ["H x y", "\\x.x"]


def test_fmt_reads_a_file(capsys, tmp_path):
    path = tmp_path / "terms.txt"
    path.write_text("(\\x.x) (H y)\n")
    assert main(["fmt", str(path)]) == 0
    assert lines(capsys) == ["(\\x.x) (H y)"]


# ---------- check ----------


def test_check_runs_the_full_suite(capsys):
    code = main(
        ["check", "--max-size", "4", "--count", "10", "--random-size", "8",
         "--fuel", "100", "--max-t", "20"]
    )
    out = lines(capsys)
    assert code == 0
    assert out[0].split() == ["check", "checked", "skipped", "failed"]
    assert out[-1].startswith("ok: 16 checks over ")


def test_check_suite_filter(capsys):
    code = main(["check", "--suite", "extraction", "--max-size", "3", "--count", "0"])
    assert code == 0
    assert lines(capsys)[-1].startswith("ok: 6 checks over ")


def test_check_prints_counterexamples_and_fails(capsys, monkeypatch):
    monkeypatch.setattr("lambdah.equivalence.extract", lambda t: t)
    code = main(["check", "--suite", "extraction", "--max-size", "4", "--count", "0"])
    out = capsys.readouterr().out
    assert code == 1
    assert "counterexample:" in out
    assert out.rstrip().endswith("FAILED")


# ---------- corpus ----------


def test_corpus_report(capsys, tmp_path):
    path = tmp_path / "contexts.txt"
    path.write_text("H x\nH Omega  # never reaches hnf on either side\n")
    assert main(["corpus", str(path), "--fuel", "50"]) == 0
    assert lines(capsys) == [
        "H x: I=hnf(1) J=hnf(4) agree",
        "H Omega: I=unknown(50) J=unknown(1000) agree",
        "2 contexts, 0 disagreements, 1 both-unknown",
    ]


def test_corpus_json_report(capsys, tmp_path):
    path = tmp_path / "contexts.txt"
    path.write_text("H x\nH Omega\n")
    assert main(["corpus", str(path), "--fuel", "50", "--json"]) == 0
    rows = [json.loads(line) for line in lines(capsys)]
    assert rows[0] == {
        "context": "H x",
        "verdict_I": "hnf",
        "verdict_J": "hnf",
        "agree": True,
        "t_steps_I": 1,
        "t_steps_J": 4,
    }
    assert rows[-1] == {
        "contexts": 2,
        "definite": 1,
        "both_unknown": 1,
        "disagreements": 0,
    }


def test_corpus_j_fuel_ratio_flag(capsys, tmp_path):
    path = tmp_path / "contexts.txt"
    path.write_text("H Omega\n")
    assert main(["corpus", str(path), "--fuel", "50", "--j-fuel-ratio", "1"]) == 0
    assert lines(capsys)[0] == "H Omega: I=unknown(50) J=unknown(50) agree"


def test_corpus_handles_a_diverging_duplicator(capsys, tmp_path):
    # the JT side of this row overflows its state budget; the report
    # still completes, with both substitution verdicts unknown
    path = tmp_path / "contexts.txt"
    path.write_text("H (\\x.x x) (\\x.x x)\n")
    assert main(["corpus", str(path), "--fuel", "50"]) == 0
    assert lines(capsys) == [
        "H (\\x.x x) (\\x.x x): I=unknown(50) J=unknown(1000) agree",
        "1 contexts, 0 disagreements, 1 both-unknown",
    ]


# ---------- exit codes on bad input ----------


def test_parse_error_exits_2(capsys):
    assert main(["extract", "(\\x.x"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_constant_exits_2(capsys):
    assert main(["extract", "H K"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_missing_file_exits_2(capsys):
    assert main(["corpus", "no/such/file.txt"]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["reduce", "x", "--strategy", "bogus"]) == 2


def test_broken_pipe_is_not_an_error(monkeypatch):
    def raiser(args):
        raise BrokenPipeError

    monkeypatch.setattr("lambdah.cli._cmd_extract", raiser)
    assert main(["extract", "x"]) == 0


# ---------- console entry point ----------


def test_entry_exits_with_the_status_of_main(capsys, monkeypatch):
    monkeypatch.setattr(sys, "argv", ["lambdah", "extract", "H x y"])
    with pytest.raises(SystemExit) as exc:
        entry()
    assert exc.value.code == 0
    assert lines(capsys) == ["x y"]

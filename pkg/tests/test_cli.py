"""Command line behavior: status lines, exit codes, artifacts, piping."""

import json
import subprocess
import sys

import pytest

from contab.bench import read_csv
from contab.cli import main
from contab.proof import parse_machine

P01 = "corpus/p01_cut_divergence.p"
P02 = "corpus/p02_unit.p"
P05 = "corpus/p05_chain.p"
P08 = "corpus/p08_satisfiable.p"

LOOPING = """
    fof(a1, axiom, ![X]: (p(X) => p(f(X)))).
    fof(a2, axiom, ![X]: (p(f(X)) => p(X))).
    fof(g, conjecture, p(a) => p(b)).
"""


def run_main(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- prove ------------------------------------------------------------------

def test_prove_theorem_status_line(capsys):
    code, out, err = run_main(capsys, "prove", P01, "--cuts", "rex")
    assert code == 0
    assert out == "% SZS status Theorem for p01_cut_divergence.p\n"
    assert err == ""


def test_prove_gave_up_when_cut_discards_the_proof(capsys):
    code, out, _ = run_main(capsys, "prove", P01, "--cuts", "rei",
                            "--max-path-limit", "3")
    assert code == 1
    assert out == "% SZS status GaveUp for p01_cut_divergence.p\n"


def test_prove_counter_satisfiable(capsys):
    code, out, _ = run_main(capsys, "prove", P08, "--cuts", "none")
    assert code == 1
    assert "% SZS status CounterSatisfiable" in out


def test_prove_timeout(tmp_path, capsys):
    f = tmp_path / "loop.p"
    f.write_text(LOOPING)
    code, out, _ = run_main(capsys, "prove", str(f), "--cuts", "none",
                            "--timeout", "0.3")
    assert code == 1
    assert "% SZS status Timeout for loop.p" in out


def test_prove_machine_proof_output_parses(capsys):
    code, out, _ = run_main(capsys, "prove", P01, "--cuts", "rex",
                            "--proof", "machine")
    assert code == 0
    proof = parse_machine(out)  # SZS line is a comment to the parser
    assert len(proof) == 3


def test_prove_text_proof_output(capsys):
    code, out, _ = run_main(capsys, "prove", P02, "--proof", "text")
    assert code == 0
    assert "Proof with 2 step(s)" in out
    assert "start with clause" in out


def test_prove_stats_to_stdout(capsys):
    code, out, _ = run_main(capsys, "prove", P01, "--cuts", "none",
                            "--stats", "-")
    assert code == 0
    stats = json.loads(out.split("\n", 1)[1])
    assert stats["problem"] == "p01_cut_divergence.p"
    assert stats["strategy"] == "none"
    assert stats["szs"] == "Theorem"
    assert stats["inferences"] == 6
    assert stats["path_limit"] == 1
    assert stats["proof_steps"] == 3
    assert len(stats["proof_hash"]) == 64


def test_prove_stats_to_file(tmp_path, capsys):
    dest = tmp_path / "stats.json"
    code, out, _ = run_main(capsys, "prove", P08, "--cuts", "rex",
                            "--stats", str(dest))
    assert code == 1
    stats = json.loads(dest.read_text())
    assert stats["szs"] == "GaveUp"
    assert stats["status"] == "limit_reached"
    assert stats["reason"] == "exhausted"
    assert stats["proof_steps"] == -1
    assert stats["proof_hash"] == ""


def test_prove_missing_file_is_input_error(capsys):
    code, out, err = run_main(capsys, "prove", "corpus/absent.p")
    assert code == 2
    assert out == ""
    assert err.startswith("error:")


def test_prove_syntax_error_reports_position(tmp_path, capsys):
    f = tmp_path / "broken.p"
    f.write_text("fof(a, axiom, p | ).\n")
    code, _, err = run_main(capsys, "prove", str(f))
    assert code == 2
    assert "broken.p:1:" in err


# -- check ------------------------------------------------------------------

def test_check_accepts_prover_output(tmp_path, capsys):
    code, out, _ = run_main(capsys, "prove", P01, "--proof", "machine")
    proof_file = tmp_path / "p.proof"
    proof_file.write_text(out)
    code, out, _ = run_main(capsys, "check", P01, str(proof_file))
    assert code == 0
    assert out == "proof ok: 3 steps\n"


def test_check_rejects_corrupted_proof(tmp_path, capsys):
    _, out, _ = run_main(capsys, "prove", P01, "--proof", "machine")
    lines = [ln for ln in out.splitlines() if not ln.startswith("%")]
    proof_file = tmp_path / "bad.proof"
    proof_file.write_text("\n".join(lines[:-1]) + "\n")  # drop final step
    code, out, _ = run_main(capsys, "check", P01, str(proof_file))
    assert code == 1
    assert out.startswith("proof rejected at step 2 (structural):")


def test_check_garbage_proof_file_is_input_error(tmp_path, capsys):
    proof_file = tmp_path / "junk.proof"
    proof_file.write_text("not a proof at all\n")
    code, _, err = run_main(capsys, "check", P01, str(proof_file))
    assert code == 2
    assert "header" in err


def test_prove_to_check_pipe_via_subprocess(tmp_path):
    prove = subprocess.run(
        [sys.executable, "-m", "contab.cli", "prove", P05, "--cuts", "rex",
         "--proof", "machine"],
        capture_output=True, text=True, cwd=".")
    assert prove.returncode == 0
    proof_file = tmp_path / "chain.proof"
    proof_file.write_text(prove.stdout)
    chk = subprocess.run(
        [sys.executable, "-m", "contab.cli", "check", P05, str(proof_file)],
        capture_output=True, text=True, cwd=".")
    assert chk.returncode == 0
    assert chk.stdout.strip() == "proof ok: 4 steps"


# -- bench ------------------------------------------------------------------

def test_bench_single_file_no_figures(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out, _ = run_main(capsys, "bench", P01, "--cuts", "none,rex",
                            "--out-dir", str(out_dir), "--no-figures")
    assert code == 0
    rows = read_csv(str(out_dir / "results.csv"))
    assert [(r.strategy, r.status) for r in rows] \
        == [("none", "Theorem"), ("rex", "Theorem")]
    assert "strategy" in out
    assert not (out_dir / "solved_counts.png").exists()


def test_bench_directory_with_figures(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code, out, _ = run_main(capsys, "bench", "corpus", "--cuts", "none,rex",
                            "--out-dir", str(out_dir), "--timeout", "10")
    assert code == 0
    rows = read_csv(str(out_dir / "results.csv"))
    assert len(rows) == 24  # 12 problems x 2 strategies
    assert (out_dir / "solved_over_time.png").stat().st_size > 0
    assert (out_dir / "solved_counts.png").stat().st_size > 0
    assert "versus baseline" in out


def test_bench_unknown_strategy(capsys):
    code, _, err = run_main(capsys, "bench", P01, "--cuts", "none,zzz")
    assert code == 2
    assert "unknown strategy" in err


def test_bench_missing_corpus(capsys):
    code, _, err = run_main(capsys, "bench", "no/such/dir")
    assert code == 2
    assert "corpus not found" in err


# -- misc -------------------------------------------------------------------

def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.startswith("contab ")


def test_unknown_subcommand_exits_with_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2

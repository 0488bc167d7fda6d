import json
import math

import numpy as np
import pytest

from spreadopt.cli import main, read_sequence_set, write_sequence_set
from spreadopt.sequences import gold_pair


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def make_pair_files(tmp_path):
    gold = tmp_path / "gold.json"
    fzc = tmp_path / "fzc.json"
    tone = tmp_path / "tone.json"
    assert main(["generate", "gold", "--degree", "5", "--indices", "2,3",
                 "--out", str(gold)]) == 0
    assert main(["generate", "fzc", "--n", "31", "--m", "1,2", "--out", str(fzc)]) == 0
    assert main(["generate", "tone", "--n", "31", "--k", "1,2", "--out", str(tone)]) == 0
    return gold, fzc, tone


class TestGenerate:
    def test_gold_family_file(self, tmp_path, capsys):
        out = tmp_path / "gold_all.json"
        code, stdout, _ = run(capsys, "generate", "gold", "--degree", "5",
                              "--out", str(out))
        assert code == 0
        assert "33 sequences" in stdout and "31" in stdout
        sequences = read_sequence_set(str(out))
        assert len(sequences) == 33
        assert all(s.n_chips == 31 for s in sequences)

    def test_fzc_gcd_failure(self, tmp_path, capsys):
        code, _, stderr = run(capsys, "generate", "fzc", "--n", "31", "--m", "31",
                              "--out", str(tmp_path / "x.json"))
        assert code == 1
        assert "prime" in stderr

    def test_tone_single_sequence(self, tmp_path, capsys):
        out = tmp_path / "tone1.json"
        code, _, _ = run(capsys, "generate", "tone", "--n", "31", "--k", "1",
                         "--out", str(out))
        assert code == 0
        (seq,) = read_sequence_set(str(out))
        assert np.allclose(np.abs(seq.entries), 1.0, atol=1e-12)

    def test_manifest_written(self, tmp_path):
        out = tmp_path / "gold.json"
        assert main(["generate", "gold", "--degree", "5", "--out", str(out)]) == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["command"] == "generate"
        assert "timestamp" in manifest and "version" in manifest


class TestSequenceSetFile:
    def test_round_trip_byte_identical(self, tmp_path):
        path_a = tmp_path / "a.json"
        path_b = tmp_path / "b.json"
        write_sequence_set(str(path_a), list(gold_pair(5)))
        sequences = read_sequence_set(str(path_a))
        write_sequence_set(str(path_b), sequences)
        assert path_a.read_bytes() == path_b.read_bytes()

    def test_full_precision_floats(self, tmp_path):
        from spreadopt.sequences import fzc_sequence

        path = tmp_path / "fzc.json"
        original = fzc_sequence(31, 1)
        write_sequence_set(str(path), [original])
        (loaded,) = read_sequence_set(str(path))
        assert np.array_equal(loaded.entries, original.entries)

    def test_malformed_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format_version": 1, "n_chips": 4}')
        code, _, stderr = run(capsys, "evaluate", str(bad), "--users", "1")
        assert code == 1
        assert "malformed" in stderr or "cannot read" in stderr


class TestEvaluate:
    def test_gold_pair_peaks(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        code, stdout, _ = run(capsys, "evaluate", str(gold), "--users", "1,2")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["peaks"]["theta_a"] == pytest.approx(9.0, abs=1e-9)
        assert payload["peaks"]["theta_c"] == pytest.approx(9.0, abs=1e-9)
        assert payload["snr"][0] == payload["snr"][1]

    def test_fzc_sarwate_equality(self, tmp_path, capsys):
        _, fzc, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        code, stdout, _ = run(capsys, "evaluate", str(fzc), "--users", "1,2")
        payload = json.loads(stdout)
        assert code == 0
        assert payload["sarwate"]["lhs_periodic"] == pytest.approx(1.0, abs=1e-9)

    def test_single_user_unbounded_marker(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        code, stdout, _ = run(capsys, "evaluate", str(gold), "--users", "1",
                              "--noise", "0")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["snr"] == ["unbounded"]
        assert payload["sarwate"] is None

    def test_bad_user_selection(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        code, _, _ = run(capsys, "evaluate", str(gold), "--users", "1,5")
        assert code == 1


class TestOptimize:
    def test_run_is_reproducible_and_consistent(self, tmp_path, capsys):
        args = ["optimize", "--n", "8", "--restarts", "3", "--seed", "7",
                "--threads", "1"]
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert main(args + ["--out", str(out_a)]) == 0
        assert main(args + ["--out", str(out_b)]) == 0
        for name in ("sequences.json", "report.json", "restart_snrs.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

        report = json.loads((out_a / "report.json").read_text())
        assert report["converged"] is True
        assert report["e1"] <= 1e-8
        assert report["e2"] <= 1e-8

        # evaluating the emitted sequences reproduces the reported SNR
        capsys.readouterr()
        code, stdout, _ = run(capsys, "evaluate", str(out_a / "sequences.json"),
                              "--users", "1,2")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["snr"][0] == pytest.approx(report["snr"], rel=1e-9)

        snr_lines = (out_a / "restart_snrs.csv").read_text().splitlines()
        assert snr_lines[0] == "snr"
        assert len(snr_lines) == 1 + 3

    def test_thread_count_does_not_change_outputs(self, tmp_path):
        base = ["optimize", "--n", "8", "--restarts", "2", "--seed", "3"]
        out_a = tmp_path / "t1"
        out_b = tmp_path / "t2"
        assert main(base + ["--threads", "1", "--out", str(out_a)]) == 0
        assert main(base + ["--threads", "2", "--out", str(out_b)]) == 0
        for name in ("sequences.json", "report.json", "restart_snrs.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_zero_convergences_exit_code(self, tmp_path, capsys):
        code, _, stderr = run(capsys, "optimize", "--n", "16", "--restarts", "1",
                              "--seed", "1", "--max-iter", "2",
                              "--out", str(tmp_path / "fail"))
        assert code == 2
        assert "FAILED" in stderr
        # diagnostics still written
        report = json.loads((tmp_path / "fail" / "report.json").read_text())
        assert report["converged"] is False


class TestSimulate:
    def test_gold_pair_z_score(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        code, stdout, _ = run(capsys, "simulate", str(gold), "--users", "1,2",
                              "--trials", "20000", "--seed", "11")
        assert code == 0
        payload = json.loads(stdout)
        assert abs(payload["z_score"]) <= 3.0
        assert payload["estimate"]["var_interference_stderr"] > 0

    def test_single_user_zero_interference(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        code, stdout, _ = run(capsys, "simulate", str(gold), "--users", "1",
                              "--trials", "200", "--seed", "2")
        assert code == 0
        payload = json.loads(stdout)
        assert payload["estimate"]["var_interference_mean"] == 0.0
        assert payload["estimate"]["snr"] == "unbounded"

    def test_same_seed_identical_output(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        argv = ["simulate", str(gold), "--users", "1,2", "--trials", "5000",
                "--seed", "4"]
        code_a, out_a, _ = run(capsys, *argv)
        code_b, out_b, _ = run(capsys, *argv)
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_threads_do_not_change_output(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        argv = ["simulate", str(gold), "--users", "1,2", "--trials", "20000",
                "--seed", "5"]
        _, out_a, _ = run(capsys, *argv, "--threads", "1")
        _, out_b, _ = run(capsys, *argv, "--threads", "4")
        assert out_a == out_b

    def test_trials_floor(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        capsys.readouterr()
        code, _, _ = run(capsys, "simulate", str(gold), "--users", "1,2",
                         "--trials", "10", "--seed", "1")
        assert code == 1


class TestScatter:
    def test_baseline_rows(self, tmp_path, capsys):
        gold, fzc, tone = make_pair_files(tmp_path)
        out_csv = tmp_path / "rows.csv"
        capsys.readouterr()
        code, stdout, _ = run(capsys, "scatter", str(gold), str(fzc), str(tone),
                              "--out", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0] == "label,theta_a,theta_c,theta_hat_a,theta_hat_c,snr"
        assert len(lines) == 4
        rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        assert float(rows["gold"][1]) == pytest.approx(9.0, abs=1e-9)
        assert float(rows["gold"][2]) == pytest.approx(9.0, abs=1e-9)
        assert float(rows["fzc"][1]) == pytest.approx(0.0, abs=1e-9)
        assert float(rows["fzc"][2]) == pytest.approx(math.sqrt(31), abs=1e-9)
        assert float(rows["tone"][1]) == pytest.approx(31.0, abs=1e-9)
        assert float(rows["tone"][2]) == pytest.approx(0.0, abs=1e-9)

    def test_optimized_row_beats_baselines(self, tmp_path, capsys):
        gold, fzc, tone = make_pair_files(tmp_path)
        run_dir = tmp_path / "opt"
        assert main(["optimize", "--n", "31", "--restarts", "1", "--seed", "2",
                     "--threads", "1", "--out", str(run_dir)]) == 0
        out_csv = tmp_path / "all.csv"
        capsys.readouterr()
        code, _, _ = run(capsys, "scatter", str(gold), str(fzc), str(tone),
                         str(run_dir / "sequences.json"), "--out", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().splitlines()[1:]
        snrs = {line.split(",")[0]: float(line.split(",")[5]) for line in lines}
        assert snrs["sequences"] > max(snrs["gold"], snrs["fzc"], snrs["tone"])

    def test_unreadable_file_skipped_with_warning(self, tmp_path, capsys):
        gold, _, _ = make_pair_files(tmp_path)
        bad = tmp_path / "bad.json"
        bad.write_text("not json")
        out_csv = tmp_path / "rows.csv"
        capsys.readouterr()
        code, _, stderr = run(capsys, "scatter", str(gold), str(bad),
                              "--out", str(out_csv))
        assert code == 0
        assert "skipping" in stderr
        assert len(out_csv.read_text().splitlines()) == 2

    def test_no_usable_files_fails(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("not json")
        code, _, _ = run(capsys, "scatter", str(bad), "--out",
                         str(tmp_path / "rows.csv"))
        assert code == 1

    def test_empty_args_usage_error(self, tmp_path, capsys):
        code, _, _ = run(capsys, "scatter", "--out", str(tmp_path / "rows.csv"))
        assert code == 1


class TestUsage:
    def test_unknown_command(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_missing_required_flag(self, capsys):
        assert run(capsys, "optimize", "--n", "8")[0] == 1

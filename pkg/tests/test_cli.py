"""End-to-end tests of the command-line interface (in-process, plus one subprocess smoke)."""

import json
import subprocess
import sys

import pytest

from invgen import ExperimentSpec, WeylFamily, run, sweep_seed
from invgen.cli import main

CSV_HEADER = "n,l,family,event,trials,successes,p_hat,ci_low,ci_high,seed"


def cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSample:
    def test_deterministic(self, capsys):
        first = cli(capsys, "sample", "--n", "5", "--family", "A", "--count", "3", "--seed", "7")
        second = cli(capsys, "sample", "--n", "5", "--family", "A", "--count", "3", "--seed", "7")
        assert first == second
        assert first[0] == 0
        assert len(first[1].splitlines()) == 3

    def test_n1_is_forced(self, capsys):
        code, out, _ = cli(capsys, "sample", "--n", "1", "--family", "A", "--count", "2")
        assert code == 0
        assert out == "1\n1\n"

    def test_d_minus_sector(self, capsys):
        code, out, _ = cli(capsys, "sample", "--n", "6", "--family", "D-", "--count", "20", "--seed", "3")
        assert code == 0
        for line in out.splitlines():
            minus_cycles = sum(1 for tok in line.split(",") if tok.endswith("-"))
            assert minus_cycles % 2 == 1, line

    def test_bad_family(self, capsys):
        code, _, err = cli(capsys, "sample", "--n", "5", "--family", "Z", "--count", "1")
        assert code == 2
        assert "error:" in err

    def test_missing_n(self, capsys):
        code, _, err = cli(capsys, "sample", "--family", "A")
        assert code == 2
        assert "--n" in err


class TestFixedsets:
    def test_unsigned(self, capsys):
        assert cli(capsys, "fixedsets", "--cycles", "3,1") == (0, "1 3\n", "")

    def test_signed(self, capsys):
        assert cli(capsys, "fixedsets", "--cycles", "2+,1-", "--signed") == (0, "(2,+) (1,-)\n", "")

    def test_single_cycle_has_none(self, capsys):
        assert cli(capsys, "fixedsets", "--cycles", "5") == (0, "\n", "")

    def test_signs_need_signed_flag(self, capsys):
        code, _, err = cli(capsys, "fixedsets", "--cycles", "2+,1-")
        assert code == 2 and "error:" in err

    def test_garbage(self, capsys):
        code, _, _ = cli(capsys, "fixedsets", "--cycles", "0")
        assert code == 2


class TestEstimate:
    def test_csv_shape(self, capsys):
        code, out, _ = cli(
            capsys, "estimate", "--n", "2", "--l", "2", "--family", "A",
            "--trials", "1000", "--seed", "5",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("# invgen ")
        assert lines[1].startswith("# config ")
        assert lines[2] == CSV_HEADER
        row = lines[3].split(",")
        expected = run(ExperimentSpec(2, 2, WeylFamily.A, "J", 1000, 5))
        assert row[:6] == ["2", "2", "A", "J", "1000", str(expected.successes)]
        assert float(row[6]) == expected.p_hat
        assert row[9] == "5"

    def test_hex_seed(self, capsys):
        dec = cli(capsys, "estimate", "--n", "4", "--family", "B", "--trials", "200", "--seed", "16")
        hexed = cli(capsys, "estimate", "--n", "4", "--family", "B", "--trials", "200", "--seed", "0x10")
        assert dec == hexed

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        path = tmp_path / "est.csv"
        code, out, _ = cli(capsys, "estimate", "--n", "3", "--family", "A", "--trials", "100")
        code2, out2, _ = cli(
            capsys, "estimate", "--n", "3", "--family", "A", "--trials", "100",
            "--out", str(path),
        )
        assert code == code2 == 0
        assert out2 == ""
        assert path.read_text() == out

    def test_out_unwritable(self, capsys, tmp_path):
        code, _, err = cli(
            capsys, "estimate", "--n", "3", "--family", "A", "--trials", "10",
            "--out", str(tmp_path / "no" / "such" / "dir.csv"),
        )
        assert code == 1 and "error:" in err

    def test_jsonl(self, capsys):
        code, out, _ = cli(
            capsys, "estimate", "--n", "4", "--family", "B", "--trials", "300",
            "--seed", "11", "--format", "jsonl",
        )
        assert code == 0
        meta_line, row_line = out.splitlines()
        meta = json.loads(meta_line)["meta"]
        assert meta["seed"] == 11 and meta["family"] == "B"
        row = json.loads(row_line)
        assert row["n"] == 4 and row["trials"] == 300 and row["seed"] == 11
        assert 0.0 <= row["p_hat"] <= 1.0

    def test_threads_do_not_change_stdout(self, capsys):
        one = cli(capsys, "estimate", "--n", "50", "--family", "B", "--trials", "400", "--threads", "1")
        two = cli(capsys, "estimate", "--n", "50", "--family", "B", "--trials", "400", "--threads", "2")
        assert one == two

    def test_event_flag(self, capsys):
        code, out, _ = cli(
            capsys, "estimate", "--n", "20", "--family", "D+", "--event", "N",
            "--trials", "50", "--l", "3",
        )
        assert code == 0
        # the sector conditions all total signs equal; N always holds
        assert ",50,1.0," in out.splitlines()[3]

    def test_event_family_mismatch(self, capsys):
        code, _, err = cli(
            capsys, "estimate", "--n", "4", "--family", "A", "--event", "N", "--trials", "10"
        )
        assert code == 2 and "error:" in err

    def test_gap_compat(self, capsys):
        code, out, _ = cli(capsys, "estimate", "--n", "100", "--family", "B", "--gap-compat", "--seed", "3")
        assert code == 0
        # bare proportion, two decimals, defaults trials=100 l=4 event=J
        expected = run(ExperimentSpec(100, 4, WeylFamily.B, "J", 100, 3))
        assert out == f"{expected.p_hat:.2f}\n"

    def test_bad_trials(self, capsys):
        code, _, _ = cli(capsys, "estimate", "--n", "4", "--family", "A", "--trials", "-5")
        assert code == 2

    def test_bad_seed(self, capsys):
        code, _, _ = cli(capsys, "estimate", "--n", "4", "--family", "A", "--seed", "zz")
        assert code == 2


class TestSweep:
    def test_rows_and_seeds(self, capsys):
        code, out, _ = cli(
            capsys, "sweep", "--ns", "2,3,4", "--l", "2", "--family", "A",
            "--trials", "200", "--seed", "99",
        )
        assert code == 0
        rows = [line.split(",") for line in out.splitlines()[3:]]
        assert [r[0] for r in rows] == ["2", "3", "4"]
        assert [int(r[9]) for r in rows] == [sweep_seed(99, i) for i in range(3)]

    def test_bad_ns(self, capsys):
        code, _, _ = cli(capsys, "sweep", "--ns", "2,x", "--family", "A", "--trials", "10")
        assert code == 2

    def test_missing_ns(self, capsys):
        code, _, err = cli(capsys, "sweep", "--family", "A", "--trials", "10")
        assert code == 2 and "--ns" in err


class TestExact:
    def test_three_quarters(self, capsys):
        code, out, _ = cli(capsys, "exact", "--n", "2", "--l", "2", "--family", "A")
        assert code == 0
        assert out.startswith("3/4 = 0.75")

    def test_trivial_one(self, capsys):
        code, out, _ = cli(capsys, "exact", "--n", "1", "--l", "3", "--family", "B")
        assert code == 0
        assert out.startswith("1 = 1.0")

    def test_capacity_named(self, capsys):
        code, _, err = cli(capsys, "exact", "--n", "30", "--l", "2", "--family", "B")
        assert code == 2
        assert "10" in err


class TestBounds:
    @pytest.mark.parametrize("family,expected", [("SL", "12"), ("SU", "12"), ("Sp", "36"), ("SO", "25"), ("SO+", "25"), ("SO-", "25")])
    def test_solve_k(self, capsys, family, expected):
        code, out, _ = cli(capsys, "bounds", "--family", family, "--solve-k")
        assert code == 0
        assert expected in out.split()

    def test_solve_k_decimal_b(self, capsys):
        code, out, _ = cli(capsys, "bounds", "--family", "SL", "--solve-k", "--b-j4", "0.33333333")
        assert code == 0 and "12" in out.split()

    def test_report_human(self, capsys):
        code, out, _ = cli(capsys, "bounds", "--family", "SL", "--q", "13")
        assert code == 0
        assert "i4" in out and "13" in out

    def test_report_json(self, capsys):
        code, out, _ = cli(capsys, "bounds", "--family", "SL", "--q", "13", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["family"] == "SL" and data["q"] == 13
        assert data["i4_lower"] > 0

    def test_sp_parity_dispatch(self, capsys):
        odd = cli(capsys, "bounds", "--family", "Sp", "--q", "9", "--json")
        even = cli(capsys, "bounds", "--family", "Sp", "--q", "8", "--json")
        assert odd[0] == even[0] == 0
        assert json.loads(odd[1])["family"] == "Sp_odd_q"
        assert json.loads(even[1])["family"] == "Sp_even_q"

    def test_sharp_a_rejected_for_even_sp(self, capsys):
        code, _, err = cli(capsys, "bounds", "--family", "Sp", "--q", "8", "--sharp-a")
        assert code == 2 and "error:" in err

    def test_needs_q_or_solve(self, capsys):
        code, _, err = cli(capsys, "bounds", "--family", "SL")
        assert code == 2 and "error:" in err

    def test_bad_b(self, capsys):
        code, _, _ = cli(capsys, "bounds", "--family", "SL", "--solve-k", "--b-j4", "junk")
        assert code == 2

    def test_no_solution_exit_1(self, capsys):
        code, _, err = cli(capsys, "bounds", "--family", "SL", "--solve-k", "--b-j4", "1e-30")
        assert code == 1 and "error:" in err


class TestConfigFile:
    def test_config_supplies_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n=4\nl=2\nfamily=A\ntrials=500\nseed=9\n")
        via_config = cli(capsys, "estimate", "--config", str(cfg))
        explicit = cli(
            capsys, "estimate", "--n", "4", "--l", "2", "--family", "A",
            "--trials", "500", "--seed", "9",
        )
        assert via_config == explicit

    def test_flags_win(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n=4\nfamily=A\ntrials=500\nseed=9\n")
        overridden = cli(capsys, "estimate", "--config", str(cfg), "--trials", "200")
        explicit = cli(
            capsys, "estimate", "--n", "4", "--family", "A", "--trials", "200", "--seed", "9"
        )
        assert overridden == explicit

    def test_comments_and_blanks(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# a comment\n\nn=2\nfamily=A\ntrials=50\n")
        assert cli(capsys, "estimate", "--config", str(cfg))[0] == 0

    def test_bad_line(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n\n")
        code, _, _ = cli(capsys, "estimate", "--config", str(cfg))
        assert code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = cli(capsys, "estimate", "--config", str(tmp_path / "absent.cfg"))
        assert code == 1 and "error:" in err


class TestTopLevel:
    def test_no_subcommand_usage_error(self, capsys):
        with pytest.raises(SystemExit):
            main([])

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("invgen ")

    def test_module_entrypoint(self):
        proc = subprocess.run(
            [sys.executable, "-m", "invgen", "exact", "--n", "2", "--l", "2", "--family", "A"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("3/4 = 0.75")

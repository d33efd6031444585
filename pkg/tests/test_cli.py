import json
import subprocess
import sys


from routgraph import generate, random_dfa, run_word
from routgraph.cli import main
from routgraph.graph import from_json, from_text


def run_cli(args, stdin=""):
    proc = subprocess.run(
        [sys.executable, "-m", "routgraph.cli", *args],
        input=stdin,
        capture_output=True,
        text=True,
        timeout=300,
    )
    return proc.returncode, proc.stdout, proc.stderr


class TestGen:
    def test_text_round_trips(self):
        code, out, _ = run_cli(["gen", "--n", "12", "--r", "2", "--seed", "3"])
        assert code == 0
        assert from_text(out) == generate(12, 2, 3)

    def test_json(self):
        code, out, _ = run_cli(
            ["gen", "--n", "5", "--r", "2", "--seed", "3", "--format", "json"]
        )
        assert code == 0
        assert from_json(out) == generate(5, 2, 3)

    def test_out_file(self, tmp_path):
        path = tmp_path / "g.txt"
        code, out, _ = run_cli(
            ["gen", "--n", "6", "--r", "1", "--seed", "1", "--out", str(path)]
        )
        assert code == 0 and out == ""
        assert from_text(path.read_text()) == generate(6, 1, 1)

    def test_config_error_exit_1(self):
        code, _, err = run_cli(["gen", "--n", "0"])
        assert code == 1
        assert "config error" in err

    def test_io_error_exit_2(self):
        code, _, err = run_cli(
            ["gen", "--n", "4", "--out", "/no/such/dir/g.txt"]
        )
        assert code == 2
        assert "io error" in err


class TestAnalysisCommands:
    def test_scc_json(self):
        code, out, _ = run_cli(["scc", "--n", "64", "--seed", "9"])
        assert code == 0
        obj = json.loads(out)
        assert sum(obj["sizes"]) == 64
        assert {"d0_size", "attractive", "period"} <= set(obj)

    def test_diam_csv(self):
        code, out, _ = run_cli(["diam", "--n", "64", "--seed", "9"])
        assert code == 0
        header, row = out.splitlines()
        assert header == "n,r,seed,diam,diam_d0,norm_diam,norm_diam_d0"
        fields = row.split(",")
        assert fields[0] == "64"
        assert int(fields[3]) >= int(fields[4])

    def test_stat_csv(self):
        code, out, _ = run_cli(["stat", "--n", "64", "--seed", "2"])
        assert code == 0
        header, row = out.splitlines()
        assert header == "n,r,seed,pi_max,pi_min,exp_max,exp_min,residual,iters"
        assert float(row.split(",")[3]) >= 1 / 64

    def test_flags_csv(self):
        code, out, err = run_cli(
            ["flags", "--n", "4096", "--seed", "4", "--flag-threshold", "8"]
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,r,seed,vertex,k1,maze_size,is_tree,is_flag"
        assert "flags:" in err

    def test_gw_constants(self):
        code, out, _ = run_cli(["gw", "--r", "2"])
        assert code == 0
        assert out.splitlines()[0] == "r,lambda,eta"
        assert out.splitlines()[1].startswith("2,0.79681")

    def test_gw_tail(self):
        code, out, _ = run_cli(
            ["gw", "--r", "2", "--k", "3", "--omega", "4", "--trials", "2000"]
        )
        assert code == 0
        assert out.splitlines()[0] == "r,k,omega,trials,estimate,stderr"


class TestDfaCommand:
    def test_print_format(self):
        code, out, _ = run_cli(["dfa", "--n", "5", "--r", "2", "--seed", "8"])
        assert code == 0
        first = out.splitlines()[0].split()
        assert first[0] == "5" and first[1] == "2"

    def test_run_word_from_stdin(self):
        code, out, _ = run_cli(
            ["dfa", "--n", "16", "--r", "2", "--seed", "8", "--run"],
            stdin="1 2 1 1\n",
        )
        assert code == 0
        d = random_dfa(16, 2, 8)
        final, accept = run_word(d, [0, 1, 0, 0])
        assert out.strip() == f"{final + 1} {int(accept)}"


class TestSweepCommand:
    def test_sweep_csv_reproducible(self, tmp_path):
        args = [
            "sweep", "--n", "8,16", "--r", "2", "--trials", "2",
            "--seed", "5", "--measurements", "scc,diam",
        ]
        out1 = run_cli(args)
        out2 = run_cli(args)
        assert out1[0] == 0
        assert out1[1] == out2[1]

    def test_sweep_config_file_with_override(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(
            "n = 8\nr = 2\ntrials = 2\nseed = 5\nmeasurements = scc\nformat = csv\n"
        )
        code, out, _ = run_cli(["sweep", "--config", str(cfg), "--trials", "3"])
        assert code == 0
        assert len(out.splitlines()) == 1 + 3  # header + 3 trials

    def test_sweep_bad_config_exit_1(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("trials = 0\nn = 8\nr = 2\nseed = 1\n")
        code, _, err = run_cli(["sweep", "--config", str(cfg)])
        assert code == 1 and "config error" in err

    def test_sweep_out_file_and_summary(self, tmp_path):
        path = tmp_path / "records.json"
        code, out, err = run_cli(
            [
                "sweep", "--n", "64,256", "--r", "2", "--trials", "2",
                "--seed", "5", "--measurements", "scc", "--format", "json",
                "--out", str(path), "--summary",
            ]
        )
        assert code == 0 and out == ""
        rows = json.loads(path.read_text())
        assert len(rows) == 4
        assert "scc_frac" in err  # summary goes to the diagnostic stream


class TestInProcessMain:
    def test_main_returns_codes(self, capsys):
        assert main(["gen", "--n", "4", "--seed", "1"]) == 0
        capsys.readouterr()
        assert main(["gen", "--n", "0"]) == 1
        capsys.readouterr()
        assert main(["sweep", "--n", "4", "--r", "2", "--trials", "0", "--seed", "1"]) == 1

import json
import subprocess
import sys

from ferrysim.cli import main


def run_cli(args):
    return main(args)


def test_validate_ok():
    assert run_cli(["validate", "--scenario", "scenarios/icn_line.toml"]) == 0


def test_validate_unknown_key_exit_2(capsys):
    rc = run_cli(["validate", "--scenario", "scenarios/icn_line.toml",
                  "--set", "icn_line_delay.bogus=3"])
    assert rc == 2
    assert "scenario error" in capsys.readouterr().err


def test_missing_scenario_exit_2():
    assert run_cli(["validate", "--scenario", "scenarios/nope.toml"]) == 2


def test_run_writes_csv_and_summary(tmp_path):
    rc = run_cli(["run", "--scenario", "scenarios/icn_line.toml",
                  "--out", str(tmp_path), "--set", "icn_line_delay.horizon=4000",
                  "--set", "icn_line_delay.n_c=5"])
    assert rc == 0
    csv_path = tmp_path / "icn-line.csv"
    assert csv_path.exists()
    text = csv_path.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "run_id,t,metric,subject,value"
    summary = json.loads((tmp_path / "icn-line.summary.json").read_text())
    assert "mean_pickup_delay" in summary


def test_run_zero_horizon_header_only(tmp_path):
    rc = run_cli(["run", "--scenario", "scenarios/icn_line.toml",
                  "--out", str(tmp_path), "--set", "icn_line_delay.horizon=0"])
    assert rc == 0
    text = (tmp_path / "icn-line.csv").read_text(encoding="utf-8")
    assert text == "run_id,t,metric,subject,value\n"


def test_run_same_seed_identical_csv(tmp_path):
    for sub in ("a", "b"):
        rc = run_cli(["run", "--scenario", "scenarios/tcp_multipath.toml",
                      "--out", str(tmp_path / sub), "--seed", "5",
                      "--set", "tcp_multipath.horizon=3000"])
        assert rc == 0
    a = (tmp_path / "a" / "tcp-multipath.csv").read_bytes()
    b = (tmp_path / "b" / "tcp-multipath.csv").read_bytes()
    assert a == b


def test_sweep_produces_subdirs_and_summary(tmp_path):
    rc = run_cli(["sweep", "--scenario", "scenarios/tcp_multipath.toml",
                  "--out", str(tmp_path), "--key", "tcp_multipath.paths",
                  "--values", "1,2", "--set", "tcp_multipath.horizon=2000"])
    assert rc == 0
    table = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert table["key"] == "tcp_multipath.paths"
    assert len(table["rows"]) == 2
    assert (tmp_path / "tcp_multipath_paths=1").is_dir()


def test_sweep_single_value_equivalent_to_run(tmp_path):
    rc = run_cli(["sweep", "--scenario", "scenarios/icn_line.toml",
                  "--out", str(tmp_path), "--key", "icn_line_delay.n_c",
                  "--values", "5", "--set", "icn_line_delay.horizon=3000"])
    assert rc == 0
    sub = tmp_path / "icn_line_delay_n_c=5"
    swept = (sub / "icn-line-5.csv").read_text().splitlines()
    rc = run_cli(["run", "--scenario", "scenarios/icn_line.toml",
                  "--out", str(tmp_path), "--set", "icn_line_delay.horizon=3000",
                  "--set", "icn_line_delay.n_c=5"])
    assert rc == 0
    plain = (tmp_path / "icn-line.csv").read_text().splitlines()
    assert [l.split(",", 1)[1] for l in swept[1:]] == \
           [l.split(",", 1)[1] for l in plain[1:]]


def test_reproduce_unknown_id_lists_known(capsys):
    rc = run_cli(["reproduce", "definitely-not-real"])
    assert rc == 2
    out = capsys.readouterr().out
    assert "unknown experiment" in out and "mobility-exp1" in out


def test_oracle_mobility(capsys):
    rc = run_cli(["oracle", "--scenario", "scenarios/mobility_exp1.toml"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "y[S1@R2] = 25" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ferrysim.cli", "validate",
                           "--scenario", "scenarios/mobility_exp1.toml"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "scenario ok" in proc.stdout

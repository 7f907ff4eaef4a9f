import json
import shlex
import subprocess
import sys
from pathlib import Path

import pytest

from lowdeg import cli

README = Path(__file__).resolve().parents[1] / "README.md"


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_adv_fixture_matches_chi_square(capsys):
    code, out, _ = run_cli(["adv", "--model", "corr-er", "--n", "3", "--q", "1/3",
                            "--rho", "1/2", "--D", "3", "--exact"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == 1
    assert payload["value_squared"]["numerator"] == 5
    assert payload["value_squared"]["denominator"] == 4
    # full degree reproduces the chi-square identity value
    code, out, _ = run_cli(["adv", "--model", "corr-er", "--n", "3", "--q", "1/3",
                            "--rho", "1/2", "--D", "6", "--exact"], capsys)
    payload = json.loads(out)
    assert (payload["value_squared"]["numerator"], payload["value_squared"]["denominator"]) == (85, 64)


def test_xi_table_has_two_entries(capsys):
    code, out, _ = run_cli(["xi", "--n", "6", "--k", "2", "--eps", "3/10",
                            "--lambda", "1", "--D", "3", "--exact"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert len(payload["table"]) == 2  # the empty class and the 3-cycle
    assert payload["norm"] >= 1.0


def test_dual_check(capsys):
    code, out, _ = run_cli(["dual-check", "--n", "4", "--k", "2", "--eps", "1/5",
                            "--lambda", "1", "--delta", "1/100", "--D", "3", "--exact"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["residual_exactly_zero"] is True
    assert payload["duality_holds"] is True


def test_hidden_command(tmp_path, capsys):
    base_file = tmp_path / "base.json"
    base_file.write_text(json.dumps({"outcomes": ["x", "y"], "null": ["1/2", "1/2"],
                                "alt": ["1/5", "4/5"]}), encoding="utf-8")
    code, out, _ = run_cli(["hidden", "--M", "4", "--base-spec", str(base_file)], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["identity_residual"] == 0.0
    assert payload["composite_value_squared"]["numerator"] == 109


def test_sample_outputs_and_determinism(tmp_path, capsys):
    args = ["sample", "--model", "corr-er", "--n", "6", "--q", "1/4", "--rho", "1/3",
            "--seed", "5", "--trials", "2", "--exact", "--out"]
    d1, d2 = tmp_path / "a", tmp_path / "b"
    assert run_cli(args + [str(d1)], capsys)[0] == 0
    assert run_cli(args + [str(d2)], capsys)[0] == 0
    files1 = sorted(p.name for p in d1.iterdir())
    assert "trial0000_A.edges" in files1 and "trial0000_meta.json" in files1
    for name in files1:
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes()
    meta = json.loads((d1 / "trial0000_meta.json").read_text())
    assert sorted(meta["pi_star"]) == list(range(6))
    header = (d1 / "trial0000_G.edges").read_text().splitlines()[0]
    assert header.startswith("6 ")


def test_sample_modified_model(tmp_path, capsys):
    code, _, _ = run_cli(["sample", "--model", "mod-sbm", "--n", "8", "--lambda", "1",
                          "--k", "2", "--eps", "1/10", "--s", "1/2", "--D", "2",
                          "--delta", "1/100", "--N", "3", "--seed", "1", "--trials", "1",
                          "--exact", "--out", str(tmp_path)], capsys)
    assert code == 0
    assert (tmp_path / "trial0000_Gprime.edges").exists()


def test_otter_command(capsys):
    code, out, _ = run_cli(["otter", "--max-n", "30"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["counts"][:9] == [1, 1, 2, 4, 9, 20, 48, 115, 286]
    assert 0.33 < payload["estimate"] < 0.35


def test_bounds_audit_csv(tmp_path, capsys):
    out_csv = tmp_path / "audit.csv"
    code, out, _ = run_cli(["bounds-audit", "--suite", "P-sum", "--out", str(out_csv)], capsys)
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "instance,lhs,rhs,slack,holds,regime"
    assert len(lines) == 3
    assert "." in lines[1].split(",")[1]  # decimal separator


def test_reduce_command(capsys):
    code, out, _ = run_cli(["reduce", "--model", "corr-er", "--estimator", "identity",
                            "--n", "8", "--q", "1/4", "--rho", "1/3", "--lambda-mix", "1/2",
                            "--trials", "10", "--seed", "2", "--exact"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert 0 <= payload["overlap_mean"] <= 1
    assert payload["classification"] in ("strong-detect candidate", "one-sided candidate", "powerless")


def test_verify_command(capsys):
    code, out, _ = run_cli(["verify"], capsys)
    assert code == 0
    assert "[FAIL]" not in out


def test_error_paths(tmp_path, capsys):
    code, _, err = run_cli(["adv", "--model", "corr-er", "--n", "9", "--q", "1/3",
                            "--rho", "1/2", "--exact"], capsys)
    assert code == 2
    assert "error" in err
    with pytest.raises(SystemExit):
        cli.main(["adv", "--model", "corr-er", "--n", "3", "--condition", "nonsense"])


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lowdeg.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "lowdeg" in proc.stdout


def readme_cli_commands():
    if not README.exists():
        return []
    commands = []
    for line in README.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line.startswith("lowdeg "):
            commands.append(line)
    return commands


@pytest.mark.parametrize("command", readme_cli_commands() or [None])
def test_readme_fixtures_run_verbatim(command, tmp_path, capsys, monkeypatch):
    if command is None:
        pytest.skip("README not written yet")
    monkeypatch.chdir(tmp_path)
    if "--base-spec" in command:
        (tmp_path / "base.json").write_text(json.dumps(
            {"outcomes": ["x", "y"], "null": ["1/2", "1/2"], "alt": ["1/5", "4/5"]}),
            encoding="utf-8")
    argv = shlex.split(command)[1:]
    assert cli.main(argv) == 0

import json
import subprocess
import sys

import pytest

from growthops import multiindex, specfile
from growthops.cli import EXIT_CAP, EXIT_CONFIG, EXIT_OK, EXIT_VERIFY, main


@pytest.fixture
def restore_multinomial():
    good = multiindex.multinomial
    yield
    multiindex.multinomial = good


def test_analyze_builtin(tmp_path, capsys):
    code = main(["analyze", "--config", "contraction", "--out", str(tmp_path), "--dirs", "32", "--no-plots"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "[A1] verdict: BoundedEvidence" in out and "[C2] verdict: CompactEvidence" in out
    assert "seed=0 dirs=32" in (tmp_path / "summary.txt").read_text()
    assert specfile.load(tmp_path / "config.toml").dirs == 32
    assert not list(tmp_path.glob("*.svg"))


def test_analyze_config_file_and_seed_changes_output(tmp_path):
    cfg = tmp_path / "run.toml"
    specfile.dump(specfile.BUILTINS["identity-singular"], cfg)
    assert main(["analyze", "--config", str(cfg), "--out", str(tmp_path / "a"), "--dirs", "16", "--seed", "1",
                 "--no-plots"]) == EXIT_OK
    text = (tmp_path / "a" / "summary.txt").read_text()
    assert "DivergentEvidence" in text and "NotCompactEvidence" in text


def test_bad_n0_is_reported_not_fatal(tmp_path, capsys):
    code = main(["analyze", "--config", "contraction", "--out", str(tmp_path), "--dirs", "16", "--n0", "2",
                 "--no-plots"])
    assert code == EXIT_OK
    assert "not applicable" in capsys.readouterr().out


def test_malformed_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("n = 1\n[nu\nkind = 'standard'\n")
    assert main(["analyze", "--config", str(bad), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "line 2" in capsys.readouterr().err


def test_missing_config_and_caps(tmp_path):
    assert main(["analyze", "--config", "nonexistent", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert main(["analyze", "--config", "contraction", "--out", str(tmp_path), "--max-m", "99"]) == EXIT_CONFIG
    assert main(["analyze", "--config", "contraction", "--out", str(tmp_path), "--dirs", "0"]) == EXIT_CONFIG


def test_resource_cap_exit_code(tmp_path, monkeypatch):
    from growthops import cli
    from growthops.errors import ResourceCapError

    def boom(cfg):
        raise ResourceCapError("term count exceeds cap")

    monkeypatch.setattr(cli, "run_analysis", boom)
    assert main(["analyze", "--config", "contraction", "--out", str(tmp_path)]) == EXIT_CAP


def test_verify_identities(tmp_path, capsys):
    assert main(["verify", "--suite", "identities", "--out", str(tmp_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 6
    assert (tmp_path / "verify_identities.csv").exists()
    assert not (tmp_path / "counterexample.json").exists()


def test_verify_injected_fault(tmp_path, restore_multinomial):
    assert main(["verify", "--suite", "identities", "--out", str(tmp_path), "--inject", "multinomial"]) == EXIT_VERIFY
    cex = json.loads((tmp_path / "counterexample.json").read_text())
    assert cex["check"] == "identities/multinomial"
    assert cex["got"] == cex["oracle"] + 1


def test_unknown_fault(tmp_path):
    assert main(["verify", "--suite", "identities", "--out", str(tmp_path), "--inject", "nope"]) == EXIT_CONFIG


def test_scenarios(capsys):
    assert main(["scenarios", "--list"]) == EXIT_OK
    listing = capsys.readouterr().out
    assert "stilde-ex1" in listing and "lacunary-ratio" in listing
    assert main(["scenarios", "--run", "lacunary-gap2"]) == EXIT_OK
    assert "diff empty" in capsys.readouterr().out
    assert main(["scenarios", "--run", "bogus"]) == EXIT_CONFIG


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "growthops", "scenarios", "--list"], capture_output=True, text=True)
    assert out.returncode == 0 and "mobius-identities" in out.stdout
    out = subprocess.run([sys.executable, "-m", "growthops"], capture_output=True, text=True)
    assert out.returncode == 2

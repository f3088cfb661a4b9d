"""End-to-end command-line behavior, exercised in process via cli.main."""

import pytest

from fracresolvent.cli import main
from fracresolvent.experiments import CSV_HEADER

SMALL_SWEEP = """
run.mode = smoothing
operator.kind = kimura
operator.n = 40
kernel.kind = abc
kernel.alpha = 0.5
run.gamma = 0.5
run.t_count = 5
output.csv = sweep.csv
output.svg = sweep.svg
"""


def test_run_small_sweep(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(SMALL_SWEEP)
    assert main(["run", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "bound satisfied" in out and "wrote sweep.csv" in out
    assert (tmp_path / "sweep.csv").exists()
    assert (tmp_path / "sweep.svg").exists()


def test_demo_is_deterministic(tmp_path, capsys, monkeypatch):
    """Two runs of the bundled demo must produce byte-identical artifacts."""
    monkeypatch.chdir(tmp_path)
    assert main(["demo", "kimura-abc"]) == 0
    assert "bound satisfied" in capsys.readouterr().out
    first_csv = (tmp_path / "kimura_abc.csv").read_bytes()
    first_svg = (tmp_path / "kimura_abc.svg").read_bytes()
    assert first_csv.decode().splitlines()[0] == CSV_HEADER
    assert main(["demo", "kimura-abc"]) == 0
    capsys.readouterr()
    assert (tmp_path / "kimura_abc.csv").read_bytes() == first_csv
    assert (tmp_path / "kimura_abc.svg").read_bytes() == first_svg


def test_unknown_demo_name_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["demo", "heat-equation"])
    assert info.value.code == 2
    assert "invalid choice" in capsys.readouterr().err


def test_bad_kernel_parameter_exits_2(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(
        "run.mode = smoothing\noperator.kind = kimura\noperator.n = 10\n"
        "kernel.kind = w\nkernel.alpha = 0.5\nkernel.beta = 1.5\nrun.t_count = 3\n"
    )
    assert main(["run", str(cfg)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("config error:") and "(0, 1]" in err


def test_unknown_key_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("run.mode = smoothing\nrun.speed = fast\n")
    assert main(["run", str(cfg)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_config_exits_4(tmp_path, capsys):
    assert main(["run", str(tmp_path / "absent.cfg")]) == 4
    assert capsys.readouterr().err.startswith("i/o error:")


def test_unwritable_output_exits_4(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(SMALL_SWEEP.replace("sweep.csv", "no_dir/sweep.csv"))
    assert main(["run", str(cfg)]) == 4
    assert capsys.readouterr().err.startswith("i/o error:")


def test_underresolved_contour_exits_3(tmp_path, capsys, monkeypatch):
    # 32 nodes cannot carry 8 digits on the default contour; the node-count
    # gate refuses before any evaluation
    monkeypatch.chdir(tmp_path)
    cfg = tmp_path / "coarse.cfg"
    cfg.write_text(SMALL_SWEEP + "contour.n_nodes = 32\n")
    assert main(["run", str(cfg)]) == 3
    err = capsys.readouterr().err
    assert err.startswith("numerical error:")
    assert "n_nodes" in err


def test_probe_caputo_stdout(capsys):
    assert main(["probe-caputo", "--alpha", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "fitted small-|s| slope: -1.0000" in out
    assert "not integrable at the origin" in out
    assert main(["probe-caputo", "--alpha", "0.5", "--lambda", "2.0"]) == 0
    out = capsys.readouterr().out
    assert "slope: -0.50" in out
    assert "not integrable" not in out


def test_probe_caputo_rejects_bad_alpha(capsys):
    assert main(["probe-caputo", "--alpha", "1.5"]) == 2
    assert capsys.readouterr().err.startswith("config error:")


def test_check_admissible_stdout(capsys):
    assert main(["check-admissible", "--kernel", "abc", "--alpha", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "admissible" in out
    assert "c0_hat=" in out and "cinf_hat=" in out and "small_s_exponent=" in out

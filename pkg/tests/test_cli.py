import csv
import io
import subprocess
import sys

import pytest

from ampdesign import amp, cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.mark.parametrize("argv,header", [
    (["se-curve", "--prior", "gaussian", "--delta-steps", "3"], cli.HEADERS["se-curve"]),
    (["design", "--prior", "lf", "--epsilon", "0.1,0.2"], cli.HEADERS["design"]),
    (["region-sweep", "--sigma0-2", "0.05,0.5", "--epsilon", "0.1"], cli.HEADERS["region-sweep"]),
    (["risk", "--epsilon", "0.1:1:4"], cli.HEADERS["risk"]),
    (["monte-carlo", "--n", "100", "--trials", "2", "--delta-steps", "2"], cli.HEADERS["monte-carlo"]),
])
def test_headers(argv, header, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert rows(out)[0] == header
    assert len(rows(out)) > 1


def test_exact_headers():
    assert ",".join(cli.HEADERS["design"]) == \
        "prior,domain,epsilon,sigma_x2,sigma0_2,delta_dagger,err_min,under_one,under_two"
    assert ",".join(cli.HEADERS["monte-carlo"]) == "delta,err_se,err_empirical,stderr,fail_count"


def test_design_values(capsys):
    _, out, _ = run(["design", "--prior", "gaussian", "--sigma-x2", "1", "--sigma0-2", "0.5"], capsys)
    rec = dict(zip(*rows(out)))
    assert float(rec["delta_dagger"]) == pytest.approx(1.0, abs=1e-11)
    assert rec["under_one"] == "false" and rec["under_two"] == "true"


def test_risk_values(capsys):
    _, out, _ = run(["risk", "--epsilon", "1"], capsys)
    assert rows(out)[1] == ["1", "0", "1"]


def test_se_curve_marks_divergence(capsys):
    _, out, _ = run(["se-curve", "--prior", "lf", "--epsilon", "0.3",
                     "--delta-min", "0.1", "--delta-max", "1.5", "--delta-steps", "5"], capsys)
    body = rows(out)[1:]
    assert body[0][1:] == ["nan", "false"]
    assert body[-1][2] == "true"


def test_invalid_spec_names_field(capsys):
    code, _, err = run(["risk", "--epsilon", "1.5"], capsys)
    assert code == 2 and "epsilon" in err
    code, _, err = run(["se-curve", "--delta-min", "2", "--delta-max", "1"], capsys)
    assert code == 2 and "delta_min" in err
    code, _, err = run(["design", "--domain", "quaternion"], capsys)
    assert code == 2 and "domain" in err
    code, _, err = run(["se-curve", "--epsilon", "0.1,0.2"], capsys)
    assert code == 2 and "epsilon" in err
    code, _, err = run([], capsys)
    assert code == 2 and "command" in err


def test_no_bracket_exit_code(capsys):
    code, _, err = run(["design", "--prior", "bg", "--epsilon", "0.01", "--sigma0-2", "1e-8"], capsys)
    assert code == 3 and "sign change" in err


def test_all_trials_failed_exit_code(capsys, monkeypatch):
    def boom(inst, prior, cfg):
        raise amp.NumericalBlowup("test")

    monkeypatch.setattr(amp, "amp_run", boom)
    code, out, _ = run(["monte-carlo", "--n", "50", "--trials", "2", "--delta-steps", "2"], capsys)
    assert code == 4
    assert rows(out)[1][-1] == "2"


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# LF risk table\ncommand = risk\nepsilon = 0.1, 0.2\ndomain = complex\n")
    _, out, _ = run(["--config", str(cfg)], capsys)
    assert len(rows(out)) == 3
    _, out2, _ = run(["--config", str(cfg), "--epsilon", "0.5"], capsys)
    assert [r[0] for r in rows(out2)[1:]] == ["0.5"]


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("epsilon 0.1\n")
    code, _, err = run(["risk", "--config", str(cfg)], capsys)
    assert code == 2 and "config" in err


def test_figure_preset(capsys):
    code, out, _ = run(["--figure", "4"], capsys)
    assert code == 0 and len(rows(out)) == 101 and rows(out)[0] == cli.HEADERS["risk"]
    code, out, _ = run(["--figure", "2b", "--delta-steps", "4"], capsys)
    assert code == 0 and len(rows(out)) == 5


def test_grid_parsing():
    assert cli.parse_grid("1,2", "x") == [1.0, 2.0]
    assert cli.parse_grid("0:1:3", "x") == [0.0, 0.5, 1.0]
    assert cli.parse_grid("log:1:100:3", "x") == pytest.approx([1.0, 10.0, 100.0])
    with pytest.raises(cli.SpecError):
        cli.parse_grid("0:1", "x")


def test_output_file_and_summary(tmp_path, capsys):
    path = tmp_path / "d.csv"
    code, out, _ = run(["design", "--prior", "lf", "--epsilon", "0.1", "--output", str(path)], capsys)
    assert code == 0
    assert "delta_dagger=" in out
    assert path.read_text().startswith("prior,domain")


@pytest.mark.parametrize("argv", [
    ["monte-carlo", "--n", "120", "--trials", "3", "--delta-steps", "3", "--seed", "5"],
    ["region-sweep", "--sigma0-2", "0.05,0.5", "--epsilon", "0.05,0.3"],
    ["se-curve", "--delta-steps", "6"],
])
def test_rerun_is_byte_identical(argv, tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"out{k}.csv"
        assert cli.main(argv + ["--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_threads_do_not_change_output(tmp_path, monkeypatch):
    argv = ["monte-carlo", "--n", "120", "--trials", "3", "--delta-steps", "2"]
    outs = []
    for threads in ("1", "3"):
        monkeypatch.setenv(amp.THREADS_ENV, threads)
        path = tmp_path / f"t{threads}.csv"
        cli.main(argv + ["--output", str(path)])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ampdesign.cli", "risk", "--epsilon", "0.5"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[0] == "epsilon,alpha_dagger,m_value"

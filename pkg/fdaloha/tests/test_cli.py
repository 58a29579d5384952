import logging

import pytest

import fdaloha.cli
from fdaloha.cli import build_parser, main, output_path
from fdaloha.constants import (
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VALIDATION,
    OUTPUT_DIR_ENV,
)
from fdaloha.curves import read_curve
from fdaloha.exceptions import OptimizationError, QuadratureError

TABLE_ARGS = ["tables", "--thetas", "2", "--alphas", "4"]


def test_parser_defaults():
    args = build_parser().parse_args(["sweep", "D", "0.5", "8"])
    assert args.steps == 50
    assert args.spacing == "linear"
    assert args.metrics == ["throughput"]
    assert args.lam is None


def test_tables(tmp_path):
    out = tmp_path / "table.csv"
    assert main(TABLE_ARGS + ["--out", str(out)]) == EXIT_OK
    curve = read_curve(out)
    assert float(curve.delta) > 1.0
    assert curve.attrs["command"] == "tables"


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert main(["sweep", "q", "0", "1", "--steps", "3", "--d", "2"]) == EXIT_OK
    curve = read_curve(tmp_path / "sweep_q.csv")
    assert curve.attrs["sweep"]["fixed"] == {"d": 2.0}
    assert main(TABLE_ARGS + ["--out", "named.csv"]) == EXIT_OK
    assert (tmp_path / "named.csv").exists()


def test_output_path_creates_directory(tmp_path, monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV, raising=False)
    path = output_path(str(tmp_path / "a" / "b.csv"), "unused.csv")
    assert path.parent.is_dir()


def test_sweep_metrics_and_parameters(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(
        ["sweep", "D", "0.5", "8", "--steps", "4", "--spacing", "log", "--eta", "0.9"]
        + ["--metrics", "T", "q_star", "--out", str(out)]
    )
    assert code == EXIT_OK
    curve = read_curve(out)
    assert list(curve.data_vars) == ["throughput", "q_star"]
    assert curve.attrs["params"]["eta"] == 0.9


def test_figure(tmp_path):
    out = tmp_path / "fig.csv"
    assert main(["figure", "4", "--tol", "1e-7", "--out", str(out)]) == EXIT_OK
    curve = read_curve(out)
    assert curve.q_star.dims == ("eta", "D")
    assert curve.attrs["quadrature"]["rel_tol"] == 1e-7


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["figure", "1"],
        ["sweep", "D", "0.5"],
        ["sweep", "D", "0.5", "8", "--steps", "many"],
        ["tables", "--alphas"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_help_exits_ok(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "figure" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "D", "0.5", "8", "--alpha", "2"],
        ["sweep", "D", "0.5", "8", "--metrics", "goodput"],
        ["sweep", "D", "8", "0.5"],
        ["figure", "2", "--sim"],
        ["tables", "--alphas", "2"],
    ],
)
def test_parameter_errors(argv, tmp_path, capsys):
    assert main(argv + ["--out", str(tmp_path / "x.csv")]) == EXIT_USAGE
    assert "fdaloha: error:" in capsys.readouterr().err


@pytest.mark.parametrize("error", [QuadratureError, OptimizationError])
def test_numerical_failure(error, monkeypatch, tmp_path, capsys):
    def fail(*args, **kwargs):
        raise error("did not converge")

    monkeypatch.setattr(fdaloha.cli, "delta_table", fail)
    code = main(TABLE_ARGS + ["--out", str(tmp_path / "x.csv")])
    assert code == EXIT_NUMERICAL
    assert "did not converge" in capsys.readouterr().err


def test_verbose_logs_command_header(tmp_path, caplog):
    with caplog.at_level(logging.INFO):
        main(["-v"] + TABLE_ARGS + ["--out", str(tmp_path / "x.csv")])
    assert "`fdaloha tables`" in caplog.text


def test_validate_low_power(tmp_path, caplog):
    out = tmp_path / "validate.csv"
    argv = ["validate", "--q", "0", "--d", "1", "--reps", "1", "--window", "20"]
    with caplog.at_level(logging.WARNING):
        code = main(argv + ["--measure", "20", "--out", str(out)])
    assert code == EXIT_OK
    assert "not resolved" in caplog.text
    report = read_curve(out)
    assert report.attrs["low_power"] is True


@pytest.mark.slow
def test_validate_detects_wrong_analytic_side(tmp_path):
    """A canceller assumed much worse than simulated fails the full-duplex cell."""
    argv = ["validate", "--q", "1", "--d", "1", "--reps", "5", "--window", "20"]
    argv += ["--measure", "40", "--analytic-eta", "0", "--out", str(tmp_path / "v.csv")]
    assert main(argv) == EXIT_VALIDATION
    report = read_curve(tmp_path / "v.csv")
    assert report.attrs["failed_cells"] == 1

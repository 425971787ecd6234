"""Tests for the batch command-line interface."""
import json
import math

import numpy as np
import pytest
from click.testing import CliRunner

from warpft.catalog import SinhLorentzParams, sinh_kernel_closed, sinh_lorentzian_hat
from warpft.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _rows(text):
    lines = [ln for ln in text.strip().splitlines() if ln]
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


# -------------------------------------------------------------------- kernel


def test_kernel_closed_form_row(runner):
    res = runner.invoke(main, ["kernel", "--k", "1", "--l", "1", "--closed-form"])
    assert res.exit_code == 0
    header, rows = _rows(res.stdout)
    assert header == ["k", "l", "re", "im", "tail_bound", "panels"]
    assert len(rows) == 1
    assert float(rows[0][2]) == pytest.approx(
        sinh_kernel_closed(1.0, 1.0, 1.0).real, rel=1e-12
    )
    assert float(rows[0][3]) == 0.0


def test_kernel_numeric_agrees_with_closed(runner):
    res = runner.invoke(
        main, ["kernel", "--warp", "sinh:b=1", "--k", "1", "--l", "1", "--tol", "1e-4"]
    )
    assert res.exit_code == 0
    _, rows = _rows(res.stdout)
    val = float(rows[0][2])
    bound = float(rows[0][4])
    assert abs(val - sinh_kernel_closed(1.0, 1.0, 1.0).real) <= bound + 1e-4
    assert int(rows[0][5]) > 0


def test_kernel_grid_and_list_values(runner):
    res = runner.invoke(
        main,
        ["kernel", "--k", "0:2:4", "--l", "1,2", "--closed-form"],
    )
    assert res.exit_code == 0
    _, rows = _rows(res.stdout)
    assert len(rows) == 10  # 5 k values x 2 l values
    ks = sorted({float(r[0]) for r in rows})
    assert ks == [0.0, 0.5, 1.0, 1.5, 2.0]


def test_kernel_rows_sorted_by_k(runner):
    res = runner.invoke(
        main, ["kernel", "--k", "2,0,1", "--l", "1", "--closed-form"]
    )
    ks = [float(r[0]) for r in _rows(res.stdout)[1]]
    assert ks == sorted(ks)


def test_kernel_usage_errors(runner):
    assert runner.invoke(main, ["kernel", "--l", "1"]).exit_code == 1
    assert runner.invoke(main, ["kernel", "--k", "foo", "--l", "1"]).exit_code == 1
    res = runner.invoke(main, ["kernel", "--warp", "mystery", "--k", "1", "--l", "1"])
    assert res.exit_code == 1
    assert "unknown warp id" in res.stderr
    res = runner.invoke(main, ["kernel", "--k", "1", "--l", "0"])
    assert res.exit_code == 1


def test_kernel_budget_failure_emits_nan_row_and_exit_2(runner):
    # a tolerance no truncation point can meet: rows carry nan, exit code 2
    res = runner.invoke(main, ["kernel", "--k", "1", "--l", "1", "--tol", "1e-300"])
    assert res.exit_code == 2
    _, rows = _rows(res.stdout)
    assert rows and math.isnan(float(rows[0][2]))


def test_kernel_all_fields_are_finite_decimals_on_success(runner):
    res = runner.invoke(main, ["kernel", "--k", "0.5,1", "--l", "1", "--tol", "1e-4"])
    assert res.exit_code == 0
    for row in _rows(res.stdout)[1]:
        assert all(math.isfinite(float(x)) for x in row)


# ------------------------------------------------------------------ transform


TRANSFORM_ARGS = [
    "transform",
    "--profile", "lorentzian:a=1",
    "--warp", "sinh:b=1",
    "--kmin", "0.5",
    "--kmax", "2",
    "--ksteps", "3",
    "--kernel", "closed",
    "--tol", "1e-6",
]


def test_transform_closed_kernel_values(runner):
    res = runner.invoke(main, TRANSFORM_ARGS)
    assert res.exit_code == 0
    header, rows = _rows(res.stdout)
    assert header == ["k", "re", "im", "err_estimate"]
    assert len(rows) == 4  # ksteps + 1 grid points
    params = SinhLorentzParams(1.0, 1.0)
    for row in rows:
        k, re = float(row[0]), float(row[1])
        assert re == pytest.approx(sinh_lorentzian_hat(params, k), abs=1e-5)
        assert float(row[3]) >= 0.0


def test_transform_byte_identical_reruns(runner):
    first = runner.invoke(main, TRANSFORM_ARGS)
    second = runner.invoke(main, TRANSFORM_ARGS)
    assert first.exit_code == second.exit_code == 0
    assert first.stdout == second.stdout


def test_transform_usage_errors(runner):
    res = runner.invoke(main, ["transform", "--kmax", "2", "--ksteps", "3"])
    assert res.exit_code == 1
    assert "--kmin" in res.stderr
    res = runner.invoke(
        main, ["transform", "--kmin", "0", "--kmax", "2", "--ksteps", "0"]
    )
    assert res.exit_code == 1
    res = runner.invoke(
        main, ["transform", "--kmin", "3", "--kmax", "2", "--ksteps", "2"]
    )
    assert res.exit_code == 1
    res = runner.invoke(
        main,
        ["transform", "--profile", "lorentzian:q=2", "--kmin", "0.5", "--kmax", "2",
         "--ksteps", "2"],
    )
    assert res.exit_code == 1
    assert "unknown parameter" in res.stderr


def test_entity_parameter_parse_errors(runner):
    res = runner.invoke(
        main, ["kernel", "--warp", "sinh:b=two", "--k", "1", "--l", "1"]
    )
    assert res.exit_code == 1
    assert "bad parameter" in res.stderr
    res = runner.invoke(main, ["kernel", "--warp", "sinh:b", "--k", "1", "--l", "1"])
    assert res.exit_code == 1


# --------------------------------------------------------------------- config


def test_config_file_supplies_defaults(runner, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        'profile = "lorentzian:a=1"\nwarp = "sinh:b=1"\nkmin = 0.5\nkmax = 2.0\n'
        'ksteps = 3\nkernel = "closed"\ntol = 1e-6\n'
    )
    res = runner.invoke(main, ["transform", "--config", str(cfg)])
    assert res.exit_code == 0
    baseline = runner.invoke(main, TRANSFORM_ARGS)
    assert res.stdout == baseline.stdout


def test_flags_override_config(runner, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        'kmin = 0.5\nkmax = 2.0\nksteps = 3\nkernel = "closed"\ntol = 1e-6\n'
    )
    res = runner.invoke(main, ["transform", "--config", str(cfg), "--ksteps", "2"])
    assert res.exit_code == 0
    assert len(_rows(res.stdout)[1]) == 3


def test_config_file_errors(runner, tmp_path):
    res = runner.invoke(
        main, ["transform", "--config", str(tmp_path / "missing.toml")]
    )
    assert res.exit_code == 1
    assert "config file not found" in res.stderr
    bad = tmp_path / "bad.toml"
    bad.write_text("kmin = [unclosed\n")
    res = runner.invoke(main, ["transform", "--config", str(bad)])
    assert res.exit_code == 1
    assert "not valid TOML" in res.stderr


# -------------------------------------------------------------------- compare


def test_compare_against_catalog_passes(runner):
    res = runner.invoke(
        main,
        ["compare", "--profile", "lorentzian:a=0.7", "--warp", "sinh:b=1",
         "--kmin", "0.5", "--kmax", "2", "--ksteps", "2", "--kernel", "closed",
         "--tol", "1e-4", "--against", "catalog"],
    )
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert set(out) == {"max_abs", "max_rel", "worst_k", "rows"}
    assert out["max_abs"] <= 1e-4
    assert len(out["rows"]) == 3
    row = out["rows"][0]
    assert set(row) == {
        "k", "re", "im", "ref_re", "ref_im", "abs_diff", "bound",
        "excluded_band_bound", "outer_tail_bound",
    }
    assert row["abs_diff"] <= row["bound"]


def test_compare_requires_catalog_reference(runner):
    res = runner.invoke(
        main,
        ["compare", "--profile", "sinh-lorentzian", "--warp", "sinh",
         "--kmin", "0.5", "--kmax", "2", "--ksteps", "2", "--kernel", "closed"],
    )
    assert res.exit_code == 1
    assert "no catalog reference" in res.stderr


def test_compare_flags_overtight_outer_truncation(runner):
    # cutting the transfer integral at |l| <= 2 keeps the difference inside
    # the (honestly enlarged) bounds but the bounds blow past 10x the
    # requested tolerance, which must fail the run
    res = runner.invoke(
        main,
        ["compare", "--profile", "lorentzian:a=0.5", "--warp", "sinh:b=1",
         "--kmin", "0.5", "--kmax", "1.5", "--ksteps", "2", "--kernel", "closed",
         "--tol", "1e-4", "--l-max", "2", "--against", "catalog"],
    )
    assert res.exit_code == 2
    assert "error bound far above the requested tolerance" in res.stderr
    out = json.loads(res.stdout)
    for row in out["rows"]:
        assert row["abs_diff"] <= row["bound"]
        assert row["outer_tail_bound"] > 1e-3


def test_compare_against_oracle_passes(runner):
    res = runner.invoke(
        main,
        ["compare", "--profile", "lorentzian:a=1", "--warp", "sinh:b=1",
         "--kmin", "0.5", "--kmax", "1.5", "--ksteps", "1", "--kernel", "closed",
         "--tol", "1e-4", "--against", "oracle", "--oracle-tol", "1e-9"],
    )
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert out["max_abs"] <= 1e-4


# ------------------------------------------------------------------- plotdata


def test_plotdata_writes_csv_and_svg(runner, tmp_path):
    prefix = tmp_path / "run"
    res = runner.invoke(main, ["plotdata"] + TRANSFORM_ARGS[1:] + ["--out", str(prefix)])
    assert res.exit_code == 0
    csv_text = (tmp_path / "run.csv").read_text()
    svg_text = (tmp_path / "run.svg").read_text()
    assert csv_text.startswith("k,re,im,err_estimate")
    assert svg_text.lstrip().startswith("<svg")
    assert svg_text.rstrip().endswith("</svg>")
    transform = runner.invoke(main, TRANSFORM_ARGS)
    assert csv_text.strip() == transform.stdout.strip()


def test_plotdata_requires_out(runner):
    res = runner.invoke(
        main, ["plotdata", "--kmin", "0.5", "--kmax", "2", "--ksteps", "2",
               "--kernel", "closed"]
    )
    assert res.exit_code == 1
    assert "--out is required" in res.stderr


def test_plotdata_unwritable_path(runner, tmp_path):
    res = runner.invoke(
        main,
        ["plotdata"] + TRANSFORM_ARGS[1:] + ["--out", str(tmp_path / "no" / "dir" / "x")],
    )
    assert res.exit_code == 1
    assert "cannot write output" in res.stderr

import json
import math

import pytest

from mml import __version__
from mml.config import ExperimentConfig, geometric_grid, load_config
from mml.errors import ConfigurationError, DomainError, GuardrailError
from mml.lab import (
    SCHEMA_LINE,
    ChainReport,
    format_csv,
    format_json,
    run,
    run_chain,
    run_gsupport,
    run_jt_check,
    run_levinson,
    run_meanvalue,
    run_zeros,
    write_result,
)


def test_config_file_and_overrides(tmp_path):
    path = tmp_path / "exp.ini"
    path.write_text(
        "[lab]\ncommand = chain\nx = 10, 100\ntmax = 200\nwindow = dyadic\n\n"
        "[moments]\nrel_tol = 1e-7\nworkers = 2\n\n[kernels]\nspacing = 0.025\nsigma = none\n\n"
        "[zeta]\nrs_corrections = 10\n"
    )
    cfg = load_config(path)
    assert cfg.command == "chain" and cfg.x_list == (10.0, 100.0) and cfg.window == "dyadic"
    assert cfg.quadrature.rel_tol == 1e-7 and cfg.quadrature.workers == 2
    assert cfg.contour.spacing == 0.025 and cfg.contour.sigma is None
    assert cfg.zeta.rs_corrections == 10
    assert cfg.windows() == [(200.0, 400.0)]
    over = load_config(path, window="from_zero", T_list=(50.0,))
    assert over.windows() == [(0.0, 50.0)]


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[lab]\nbogus = 1\n")
    with pytest.raises(ConfigurationError):
        load_config(bad)
    bad.write_text("[plots]\nx = 1\n")
    with pytest.raises(ConfigurationError):
        load_config(bad)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(command="nope")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(theta_list=(0.0,))
    with pytest.raises(ConfigurationError):
        ExperimentConfig(window="weekly")


def test_geometric_grid():
    g = geometric_grid(10, 1000, 1)
    assert g == pytest.approx((10.0, 100.0, 1000.0))
    assert len(geometric_grid(2, 2000, 3)) == 10


def test_levinson_rows_and_guardrail():
    cfg = ExperimentConfig(command="levinson", theta_list=(0.5,), T_list=(200.0,))
    res = run_levinson(cfg)
    (row,) = res.rows
    assert row["target"] == 3.0 and row["converged"]
    assert row["rel_gap"] == pytest.approx(abs(row["I_over_T"] - 3.0) / 3.0)
    with pytest.raises(GuardrailError):
        run_levinson(ExperimentConfig(theta_list=(0.5,), T_list=(2e4,)))
    with pytest.raises(ConfigurationError):
        run_levinson(ExperimentConfig(window="dyadic", T_list=(100.0,)))


def test_levinson_degenerate_length():
    # T^theta < 2: only n = 1 survives and M = 1
    res = run_levinson(ExperimentConfig(theta_list=(0.1,), T_list=(100.0,)))
    assert res.rows[0]["x"] < 2 and res.rows[0]["I_over_T"] > 0


def test_chain_reports():
    base = dict(command="chain", x_list=(10.0, 100.0))
    full = run_chain(ExperimentConfig(T_list=(200.0,), **base))
    half = run_chain(ExperimentConfig(T_list=(100.0,), **base))
    dyad = run_chain(ExperimentConfig(T_list=(100.0,), window="dyadic", **base))
    for a, b, c in zip(full.rows, half.rows, dyad.rows):
        tol = a["err_estimate"] + b["err_estimate"] + c["err_estimate"] + 1e-10 * a["rhs"]
        assert abs(a["rhs"] - b["rhs"] - c["rhs"]) <= tol
    row = full.rows[1]
    assert row["lhs"] == pytest.approx(100 * math.log(2) + 200 * math.log(202) / 100)
    assert all(r["ratio"] < 100 for r in full.rows + dyad.rows)
    with pytest.raises(DomainError):
        run_chain(ExperimentConfig(beta0=0.75, **base))
    rep = ChainReport(10, 0, 1, 0.5, 2.0, 4.0, 0.0, True)
    assert rep.ratio == 0.5


def test_meanvalue_rows():
    res = run_meanvalue(ExperimentConfig(command="meanvalue", T_list=(10.0, 500.0)))
    small, big = res.rows
    assert small["integral"] > 0 and small["ratio"] > 0
    assert big["ratio"] >= 0.5 and abs(big["rel_to_classical"]) < 0.05


def test_zeros_rows():
    assert run_zeros(ExperimentConfig(command="zeros", count=0)).rows == []
    rows = run_zeros(ExperimentConfig(command="zeros", count=1)).rows
    assert rows[0]["index"] == 1 and abs(rows[0]["gamma"] - 14.1347251417) < 1e-9


def test_gsupport_rows():
    res = run_gsupport(ExperimentConfig(command="gsupport", t_list=(0.0,), u_list=(0.5, 2.0)))
    inside, outside = res.rows
    assert inside["abs_g"] <= inside["bound"]
    assert outside["abs_g"] < 1e-8


def test_jt_check_single_point():
    res = run_jt_check(ExperimentConfig(command="jt-check", x_list=(2.0,), t_list=(0.0,)))
    (row,) = res.rows
    assert all(math.isfinite(v) for v in row["j_mellin"] + row["j_convolution"] + row["j_residue"])
    assert res.summary["max_rel_dev"] == row["max_rel_dev"] < 1e-4


def test_csv_schema_and_determinism(tmp_path):
    cfg = ExperimentConfig(command="jt-check", x_list=(10.0,), t_list=(0.0, 5.0), output=str(tmp_path / "a.csv"))
    text = write_result(run(cfg), cfg)
    again = format_csv(run(cfg))
    assert text == again == (tmp_path / "a.csv").read_text()
    lines = text.splitlines()
    assert lines[0] == SCHEMA_LINE
    assert lines[1].startswith("x,t,j_mellin_re")
    assert len(lines) == 4
    for cell in lines[2].split(","):
        float(cell)


def test_json_output():
    cfg = ExperimentConfig(command="zeros", count=2, format="json")
    doc = json.loads(format_json(run(cfg), cfg))
    assert doc["version"] == __version__ and doc["schema"] == 1
    assert doc["config"]["count"] == 2 and len(doc["rows"]) == 2


def test_zeta_grid_cache(tmp_path):
    cfg = ExperimentConfig(command="meanvalue", T_list=(40.0,), cache_dir=str(tmp_path))
    run(cfg)
    lines = (tmp_path / "zeta_grid_meanvalue.csv").read_text().splitlines()
    assert lines[0] == SCHEMA_LINE and lines[1] == "t,re,im,method,err"
    assert len(lines) == 2 + 41
    t, re, im, method, err = lines[-1].split(",")
    assert method == "riemann-siegel" and float(err) < 1e-9

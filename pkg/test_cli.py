#!/usr/bin/env python3
"""
Тесты командной строки circle-cs
"""
import io
import math

import pandas as pd
import pytest

from cli import RunConfig, angle_grid, main, report_line, run_checks
from kinematics import CoherentLabel
from overlaps import overlap_quadrature


def read_csv(path) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(path.read_text(encoding="utf-8")))


def parse_report(text: str) -> dict:
    """`key = value (...)` → {key: value}"""
    values = {}
    for line in text.strip().splitlines():
        key, rest = line.split(" = ", 1)
        values[key] = float(rest.split()[0])
    return values


# ==================== КОНФИГУРАЦИЯ ====================

@pytest.mark.parametrize("argv", [
    ["overlap-grid", "--grid-steps", "1"],
    ["constants", "--quad-order", "8"],
    ["constants", "--theta", "1.0"],
    ["verify-rou", "--k-cutoff", "0"],
])
def test_invalid_arguments(argv):
    """Тест: неверные параметры - код 2"""
    assert main(argv) == 2


def test_run_config_defaults():
    cfg = RunConfig(command="constants")
    assert cfg.grid_steps == 61
    assert cfg.quad_order == 512
    assert cfg.output_path == "-"


def test_angle_grid():
    assert angle_grid(4) == [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4]


def test_report_line_format():
    assert report_line("A", 0.75, 0.751128).startswith("A = 0.75 (ref 0.751128 ±")
    assert report_line("p2", 1.0) == "p2 = 1"


# ==================== КОМАНДЫ ====================

def test_constants(capsys):
    """Тест: эталонные константы в stdout"""
    assert main(["constants"]) == 0
    values = parse_report(capsys.readouterr().out)
    assert abs(values["A"] - 0.751128) <= 1e-5
    assert abs(values["unitary_position_vacuum"] - 0.778816) <= 1e-5
    assert values["uncertainty_product_0"] < 0.5
    assert abs(values["uncertainty_product_0"] - 0.4999999973) <= 5e-8
    assert values["heisenberg_formula_discrepancy"] > 1e-9
    assert values["p2"] == pytest.approx(9.17e-5, rel=2e-3)


def test_overlap_grid_csv(tmp_path):
    """Тест: 5 × 5 сетка, диагональ 1, все модули положительны"""
    path = tmp_path / "grid.csv"
    assert main(["overlap-grid", "--grid-steps", "5", "--out", str(path)]) == 0

    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.splitlines()[0] == b"alpha,beta,re,im,abs"

    frame = read_csv(path)
    assert len(frame) == 25
    diagonal = frame[frame["alpha"] == frame["beta"]]
    assert len(diagonal) == 5
    assert (diagonal["abs"] - 1.0).abs().max() <= 1e-10
    assert (frame["abs"] > 0).all()


def test_overlap_grid_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        assert main(["overlap-grid", "--grid-steps", "4", "--m-minus-n", "1", "--out", str(path)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_overlap_grid_cell_matches_oracle(tmp_path):
    """Тест: ячейка (π/5, 3π/5) при m − n = 1 совпадает с квадратурой"""
    path = tmp_path / "grid.csv"
    assert main(["overlap-grid", "--grid-steps", "5", "--m-minus-n", "1", "--out", str(path)]) == 0
    frame = read_csv(path)
    alpha, beta = math.pi / 5, 3 * math.pi / 5
    row = frame[((frame["alpha"] - alpha).abs() < 1e-12) & ((frame["beta"] - beta).abs() < 1e-12)].iloc[0]
    oracle = overlap_quadrature(CoherentLabel(m=1, alpha=alpha), CoherentLabel(m=0, alpha=beta)).value
    assert abs(complex(row["re"], row["im"]) - oracle) <= 1e-9


def test_uncertainty_curve(tmp_path):
    path = tmp_path / "curve.csv"
    assert main(["uncertainty-curve", "--grid-steps", "9", "--out", str(path)]) == 0
    frame = read_csv(path)
    assert list(frame.columns) == ["alpha", "disp_q", "disp_p", "product"]
    assert len(frame) == 9
    assert frame["product"].iloc[0] < 0.5
    assert frame["product"].idxmin() == 0
    assert frame["disp_p"].max() - frame["disp_p"].min() <= 1e-15


def test_expectations_row(tmp_path):
    path = tmp_path / "row.csv"
    assert main(["expectations", "--m", "3", "--alpha", "1.3", "--out", str(path)]) == 0
    frame = read_csv(path)
    assert len(frame) == 1
    assert frame["m"].iloc[0] == 3
    assert frame["mean_p"].iloc[0] == 3.0
    assert frame["alpha"].iloc[0] == pytest.approx(1.3, abs=1e-15)


def test_expectations_at_pi(tmp_path):
    """Тест: --alpha π приводится к −π, среднее ⟨Q̂⟩ = 0"""
    path = tmp_path / "row.csv"
    assert main(["expectations", "--m", "1", "--alpha", "3.141592653589793", "--out", str(path)]) == 0
    frame = read_csv(path)
    assert frame["alpha"].iloc[0] == -math.pi
    assert abs(frame["mean_q"].iloc[0]) <= 1e-12
    assert frame["q1"].iloc[0] == pytest.approx(math.pi, abs=1e-12)


def test_unwritable_output(tmp_path):
    """Тест: ошибка записи - код 1"""
    path = tmp_path / "missing" / "out.csv"
    assert main(["constants", "--out", str(path)]) == 1


# ==================== ПРОВЕРКИ ====================

def test_checks_fail_on_coarse_quadrature():
    """Тест: квадратура порядка 8 не проходит проверки"""
    results = run_checks(quad_order=8, grid_steps=3)
    assert any(not r.passed for r in results)
    assert {r.name for r in results} >= {"normalization", "overlap_oracle", "rou_theta_0"}


def test_verify_all_passes(capsys):
    assert main(["verify-all", "--grid-steps", "7"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.strip().endswith("failed = 0")

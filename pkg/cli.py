#!/usr/bin/env python3
"""
Circle CS - command-line front end
Командная строка: данные для графиков перекрытий и произведения
неопределённостей, эталонные константы и наборы проверок
"""
import argparse
import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import pandas as pd
from pydantic import BaseModel, Field, ValidationError

from kinematics import CoherentLabel, normalization_constant
from numerics import QuadratureRule
from observables import (
    REFERENCE_HEISENBERG_MINIMUM,
    REFERENCE_NORMALIZATION,
    REFERENCE_UNITARY_POSITION,
    correction_p2,
    expectations,
    expectations_quadrature,
    heisenberg_minimum,
    printed_heisenberg_formula,
    uncertainty_product,
    unitary_position_expectation,
)
from overlaps import overlap_analytic, overlap_grid, overlap_quadrature
from resolution import DEFAULT_K_CUTOFF, RoUReport, verify_rou

logger = logging.getLogger(__name__)


# ==================== КОНФИГУРАЦИЯ ====================

DEFAULT_GRID_STEPS = 61
DEFAULT_QUAD_ORDER = 512

CSV_FLOAT_FORMAT = "%.17g"

# Допуски проверок
NORMALIZATION_TOLERANCE = 1e-5
UNITARY_POSITION_TOLERANCE = 1e-5
EXP_QUARTER_TOLERANCE = 1e-4
MOMENTUM_TOLERANCE = 1e-10
HEISENBERG_TOLERANCE = 5e-8
ORACLE_TOLERANCE = 1e-9
ROU_TOLERANCE = 1e-8
ROU_SLACK = 1e-9

ORACLE_ALPHAS = (0.0, 0.3, 0.9, 1.7, 2.8)
ORACLE_OFFSETS = range(0, 6)
ORACLE_THETAS = (0.0, 0.25, 0.7)
EXPECTATION_MS = (0, 3)
EXPECTATION_ALPHAS = (0.0, 1.0, -1.0, 2.5)
EXPECTATION_THETAS = (0.0, 0.4)
MOMENTUM_MS = (-3, 0, 5)
MOMENTUM_ALPHAS = (0.0, 0.7, 2.9, -1.3)
FIGURE_OFFSETS = (0, 1, 4)


class Command(str, Enum):
    """Команды CLI"""
    CONSTANTS = "constants"
    OVERLAP_GRID = "overlap-grid"
    UNCERTAINTY_CURVE = "uncertainty-curve"
    EXPECTATIONS = "expectations"
    VERIFY_ROU = "verify-rou"
    VERIFY_ALL = "verify-all"


class RunConfig(BaseModel):
    """Параметры запуска"""
    command: Command
    theta: float = Field(default=0.0, ge=0.0, lt=1.0)
    grid_steps: int = Field(default=DEFAULT_GRID_STEPS, ge=2)
    k_cutoff: int = Field(default=DEFAULT_K_CUTOFF, ge=1)
    quad_order: int = Field(default=DEFAULT_QUAD_ORDER, ge=64)
    m_minus_n: int = 0
    m: int = 0
    alpha: float = 0.0
    output_path: str = "-"
    verbose: bool = False


@dataclass
class CommandOutput:
    """Текст для вывода и код завершения"""
    text: str
    exit_code: int = 0


@dataclass
class CheckResult:
    """Результат одной проверки"""
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.detail}"


# ==================== ВЫВОД ====================

def angle_grid(steps: int) -> List[float]:
    """α_i = π·i/steps, i = 0..steps−1"""
    return [math.pi * i / steps for i in range(steps)]


def to_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def report_line(key: str, value: float, reference: Optional[float] = None) -> str:
    """Строка `key = value (ref X ±deviation)`"""
    line = f"{key} = {value:.17g}"
    if reference is not None:
        line += f" (ref {reference:.10g} ±{abs(value - reference):.3e})"
    return line


def write_output(text: str, path: str):
    """Запись в файл или stdout ("-")"""
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    logger.info(f"💾 Записано: {path}")


# ==================== КОМАНДЫ ====================

def cmd_constants(cfg: RunConfig) -> CommandOutput:
    """A, A_θ, ⟨0,0|e^{iQ̂}|0,0⟩, произведение при α = 0, p₂"""
    rule = QuadratureRule.gauss_legendre(cfg.quad_order)
    a = normalization_constant(0.0)
    unitary = unitary_position_expectation(CoherentLabel(theta=cfg.theta), rule).real
    product = uncertainty_product(0.0, cfg.theta)
    printed = printed_heisenberg_formula()

    lines = [
        report_line("A", a, REFERENCE_NORMALIZATION),
        report_line("A_theta", normalization_constant(cfg.theta)),
        f"theta = {cfg.theta:.17g}",
        report_line("unitary_position_vacuum", unitary, REFERENCE_UNITARY_POSITION),
        report_line("unitary_position_vs_exp_quarter", unitary, math.exp(-0.25)),
        report_line("uncertainty_product_0", product, REFERENCE_HEISENBERG_MINIMUM),
        report_line("heisenberg_printed_formula", printed, REFERENCE_HEISENBERG_MINIMUM),
        report_line("heisenberg_formula_discrepancy", abs(product - printed)),
        report_line("p2", correction_p2(cfg.theta)),
    ]
    return CommandOutput("\n".join(lines) + "\n")


def cmd_overlap_grid(cfg: RunConfig) -> CommandOutput:
    """CSV alpha,beta,re,im,abs по сетке grid_steps × grid_steps"""
    angles = angle_grid(cfg.grid_steps)
    rule = QuadratureRule.gauss_legendre(cfg.quad_order)
    cells = overlap_grid(cfg.m_minus_n, angles, angles, cfg.theta, rule)
    frame = pd.DataFrame([cell.to_dict() for cell in cells])
    logger.info(f"📊 Сетка m−n={cfg.m_minus_n}: min |⟨·|·⟩| = {frame['abs'].min():.6e}")
    return CommandOutput(to_csv(frame))


def cmd_uncertainty_curve(cfg: RunConfig) -> CommandOutput:
    """CSV alpha,disp_q,disp_p,product по α ∈ [0, π)"""
    reports = [
        (alpha, expectations(CoherentLabel(m=cfg.m, alpha=alpha, theta=cfg.theta)))
        for alpha in angle_grid(cfg.grid_steps)
    ]
    frame = pd.DataFrame({
        "alpha": [alpha for alpha, _ in reports],
        "disp_q": [r.disp_q for _, r in reports],
        "disp_p": [r.disp_p for _, r in reports],
        "product": [r.uncertainty_product for _, r in reports],
    })
    return CommandOutput(to_csv(frame))


def cmd_expectations(cfg: RunConfig) -> CommandOutput:
    """CSV с одной строкой ExpectationReport для (m, α, θ)"""
    label = CoherentLabel(m=cfg.m, alpha=cfg.alpha, theta=cfg.theta)
    row = {"m": label.m, "alpha": label.alpha, "theta": label.theta}
    row.update(expectations(label).to_dict())
    return CommandOutput(to_csv(pd.DataFrame([row])))


def rou_check(report: RoUReport) -> CheckResult:
    """Невязка не превышает границы усечения; при θ = 0 ещё и ≤ 1e−8"""
    limit = report.truncation_bound + ROU_SLACK
    passed = report.max_residual <= limit and report.max_imaginary <= 1e-10
    if report.theta == 0.0:
        passed = passed and max(report.max_residual, report.max_constant_error) <= ROU_TOLERANCE
    detail = (f"max_residual={report.max_residual:.3e} bound={report.truncation_bound:.3e} "
              f"max|c−2π|={report.max_constant_error:.3e}")
    return CheckResult(f"rou_theta_{report.theta:g}", passed, detail)


def cmd_verify_rou(cfg: RunConfig) -> CommandOutput:
    """Проверка разложения единицы при cfg.theta"""
    rule = QuadratureRule.gauss_legendre(cfg.quad_order)
    report = verify_rou(cfg.theta, cfg.k_cutoff, rule)
    lines = [f"{name} residual={r:.6e} constant={c:.17g}"
             for name, r, c in zip(report.test_functions, report.residuals, report.fitted_constants)]
    check = rou_check(report)
    lines.append(check.line())
    return CommandOutput("\n".join(lines) + "\n", 0 if check.passed else 1)


# ==================== ПРОВЕРКИ ====================

def _check_normalization(rule: QuadratureRule) -> CheckResult:
    a = normalization_constant(0.0)
    error = abs(a - REFERENCE_NORMALIZATION)
    return CheckResult("normalization", error <= NORMALIZATION_TOLERANCE, f"A={a:.10f} dev={error:.3e}")


def _check_unitary_position(rule: QuadratureRule) -> CheckResult:
    value = unitary_position_expectation(CoherentLabel(), rule)
    reference = abs(value - REFERENCE_UNITARY_POSITION)
    quarter = abs(value - math.exp(-0.25))
    passed = reference <= UNITARY_POSITION_TOLERANCE and quarter <= EXP_QUARTER_TOLERANCE
    return CheckResult("unitary_position", passed, f"value={value.real:.10f} dev={reference:.3e}")


def _check_momentum(rule: QuadratureRule) -> CheckResult:
    worst = 0.0
    for m in MOMENTUM_MS:
        for alpha in MOMENTUM_ALPHAS:
            report = expectations_quadrature(CoherentLabel(m=m, alpha=alpha), rule)
            worst = max(worst, abs(report.mean_p - m))
    return CheckResult("momentum_mean", worst <= MOMENTUM_TOLERANCE, f"max|⟨P⟩−m|={worst:.3e}")


def _check_heisenberg(rule: QuadratureRule) -> CheckResult:
    product = uncertainty_product(0.0)
    formula_error = abs(product - heisenberg_minimum())
    printed_error = abs(product - REFERENCE_HEISENBERG_MINIMUM)
    passed = product < 0.5 and formula_error <= 1e-12 and printed_error <= HEISENBERG_TOLERANCE
    detail = (f"product={product:.12f} printed_dev={printed_error:.3e} "
              f"printed_formula_dev={abs(product - printed_heisenberg_formula()):.3e}")
    return CheckResult("heisenberg_minimum", passed, detail)


def _check_overlap_oracle(rule: QuadratureRule) -> CheckResult:
    worst = 0.0
    for theta in ORACLE_THETAS:
        for alpha in ORACLE_ALPHAS:
            for beta in ORACLE_ALPHAS:
                if beta < alpha:
                    continue
                for offset in ORACLE_OFFSETS:
                    a = CoherentLabel(m=0, alpha=alpha, theta=theta)
                    b = CoherentLabel(m=offset, alpha=beta, theta=theta)
                    error = abs(overlap_analytic(a, b).value - overlap_quadrature(a, b, rule).value)
                    worst = max(worst, error)
    return CheckResult("overlap_oracle", worst <= ORACLE_TOLERANCE, f"max_error={worst:.3e}")


def _check_expectation_oracle(rule: QuadratureRule) -> CheckResult:
    worst = 0.0
    fields = ("q1", "q2", "p2", "mean_q", "mean_q2", "mean_p", "mean_p2", "disp_q", "disp_p")
    for m in EXPECTATION_MS:
        for alpha in EXPECTATION_ALPHAS:
            for theta in EXPECTATION_THETAS:
                label = CoherentLabel(m=m, alpha=alpha, theta=theta)
                closed = expectations(label).to_dict()
                oracle = expectations_quadrature(label, rule).to_dict()
                worst = max(worst, max(abs(closed[k] - oracle[k]) for k in fields))
    return CheckResult("expectation_oracle", worst <= ORACLE_TOLERANCE, f"max_error={worst:.3e}")


def _check_nonvanishing(rule: QuadratureRule, steps: int, theta: float) -> CheckResult:
    angles = angle_grid(steps)
    minimum = min(
        cell.magnitude
        for offset in FIGURE_OFFSETS
        for cell in overlap_grid(offset, angles, angles, theta, rule)
    )
    return CheckResult("overlap_nonvanishing", minimum > 0.0, f"min|⟨·|·⟩|={minimum:.6e}")


def run_checks(
    theta: float = 0.0,
    k_cutoff: int = DEFAULT_K_CUTOFF,
    quad_order: int = DEFAULT_QUAD_ORDER,
    grid_steps: int = DEFAULT_GRID_STEPS
) -> List[CheckResult]:
    """
    Полный набор проверок. Ошибка внутри проверки засчитывается как провал.
    """
    rule = QuadratureRule.gauss_legendre(quad_order)
    checks: List[Tuple[str, Callable[[], CheckResult]]] = [
        ("normalization", lambda: _check_normalization(rule)),
        ("unitary_position", lambda: _check_unitary_position(rule)),
        ("momentum_mean", lambda: _check_momentum(rule)),
        ("heisenberg_minimum", lambda: _check_heisenberg(rule)),
        ("overlap_oracle", lambda: _check_overlap_oracle(rule)),
        ("expectation_oracle", lambda: _check_expectation_oracle(rule)),
        ("overlap_nonvanishing", lambda: _check_nonvanishing(rule, grid_steps, theta)),
    ]
    for rou_theta in sorted({0.0, theta}):
        checks.append((f"rou_theta_{rou_theta:g}",
                       lambda t=rou_theta: rou_check(verify_rou(t, k_cutoff, rule))))

    results = []
    for name, check in checks:
        try:
            result = check()
        except ValueError as e:
            result = CheckResult(name, False, f"ошибка: {e}")
        results.append(result)
        if result.passed:
            logger.info(f"✅ {result.name}")
        else:
            logger.error(f"❌ {result.name}: {result.detail}")
    return results


def cmd_verify_all(cfg: RunConfig) -> CommandOutput:
    """Все проверки; код 0 только если все пройдены"""
    results = run_checks(cfg.theta, cfg.k_cutoff, cfg.quad_order, cfg.grid_steps)
    failed = [r for r in results if not r.passed]
    lines = [r.line() for r in results]
    lines.append(f"failed = {len(failed)}")
    return CommandOutput("\n".join(lines) + "\n", 1 if failed else 0)


COMMANDS = {
    Command.CONSTANTS: cmd_constants,
    Command.OVERLAP_GRID: cmd_overlap_grid,
    Command.UNCERTAINTY_CURVE: cmd_uncertainty_curve,
    Command.EXPECTATIONS: cmd_expectations,
    Command.VERIFY_ROU: cmd_verify_rou,
    Command.VERIFY_ALL: cmd_verify_all,
}


# ==================== ТОЧКА ВХОДА ====================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circle-cs",
        description="Когерентные состояния на окружности: данные графиков и проверки",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("--theta", type=float, default=0.0, help="параметр потока θ ∈ [0, 1)")
    parser.add_argument("--grid-steps", type=int, default=DEFAULT_GRID_STEPS)
    parser.add_argument("--k-cutoff", type=int, default=DEFAULT_K_CUTOFF)
    parser.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER)
    parser.add_argument("--m-minus-n", type=int, default=0)
    parser.add_argument("--m", type=int, default=0)
    parser.add_argument("--alpha", type=float, default=0.0)
    parser.add_argument("--out", dest="output_path", default="-", help='путь или "-" для stdout')
    parser.add_argument("--verbose", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        level=logging.DEBUG if args.verbose else logging.INFO,
    )

    try:
        cfg = RunConfig(**vars(args))
    except ValidationError as e:
        logger.error(f"❌ Неверные параметры: {e}")
        return 2

    logger.info(f"🚀 {cfg.command.value}: θ={cfg.theta}, quad_order={cfg.quad_order}")
    output = COMMANDS[cfg.command](cfg)

    try:
        write_output(output.text, cfg.output_path)
    except OSError as e:
        logger.error(f"❌ Не удалось записать {cfg.output_path}: {e}")
        return 1

    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""
Kinematics - states and Weyl operators on the circle
Кинематика на окружности: вакуум, сдвиги по углу, фазы e^{imQ̂},
операторы Вейля и семейство Ааронова–Бома с параметром θ
в периодической калибровке L²(S¹, dφ)
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.linalg import expm

from numerics import (
    DEFAULT_FOURIER_N,
    DEFAULT_QUAD_ORDER,
    TWO_PI,
    CircleWavefunction,
    FourierSeries,
    QuadratureRule,
    erf_complex,
    fourier_analyze,
)

logger = logging.getLogger(__name__)

SQRT_PI = math.sqrt(math.pi)


class InvalidFluxError(ValueError):
    """Параметр потока θ вне [0, 1)"""


# ==================== УГЛЫ ====================

def wrap_angle(x):
    """
    Приведение углов в [−π, π); значения внутри отрезка не меняются,
    +π переходит в −π.
    """
    values = np.asarray(x, dtype=float)
    shifted = np.mod(values + np.pi, TWO_PI) - np.pi
    shifted = np.where(shifted >= np.pi, shifted - TWO_PI, shifted)
    inside = (values >= -np.pi) & (values < np.pi)
    return np.where(inside, values, shifted)


def canonical_angle(value: float) -> float:
    """Канонический представитель угла в [−π, π)"""
    if not math.isfinite(value):
        raise ValueError(f"Угол должен быть конечным числом, получено {value}")
    return float(wrap_angle(value))


def validate_theta(theta: float) -> float:
    """Проверка параметра потока: 0 ≤ θ < 1"""
    if not (math.isfinite(theta) and 0.0 <= theta < 1.0):
        raise InvalidFluxError(f"Параметр потока θ = {theta} вне [0, 1)")
    return float(theta)


def seam_of_shift(alpha: float) -> Tuple[float, ...]:
    """Образ шва ±π после сдвига на α (пусто при α = 0)"""
    image = canonical_angle(-np.pi + alpha)
    if image == -np.pi:
        return ()
    return (image,)


class CoherentLabel(BaseModel):
    """Метка когерентного состояния |m, α, θ⟩"""
    model_config = ConfigDict(frozen=True)

    m: int = 0
    alpha: float = 0.0
    theta: float = Field(default=0.0, ge=0.0, lt=1.0)

    @field_validator("alpha")
    @classmethod
    def canonicalize_alpha(cls, value: float) -> float:
        return canonical_angle(value)


# ==================== СОСТОЯНИЯ ====================

@lru_cache(maxsize=1)
def _base_normalization() -> float:
    return 1.0 / math.sqrt(SQRT_PI * erf_complex(math.pi).real)


def normalization_constant(theta: float = 0.0) -> float:
    """
    A_θ = [∫_{−π}^{π} e^{−φ²} dφ]^{−1/2} · e^{−θ²/2}

    При θ = 0 это A = 1/√(√π·erf(π)) ≈ 0.751128.
    """
    theta = validate_theta(theta)
    return _base_normalization() * math.exp(-theta ** 2 / 2)


def vacuum(theta: float = 0.0) -> CircleWavefunction:
    """Вакуум φ ↦ A_θ e^{−(φ−iθ)²/2} на [−π, π)"""
    theta = validate_theta(theta)
    amplitude = normalization_constant(theta)

    def func(phi: np.ndarray) -> np.ndarray:
        return amplitude * np.exp(-(wrap_angle(phi) - 1j * theta) ** 2 / 2)

    return CircleWavefunction(func=func)


def _rotate_series(series: Optional[FourierSeries], alpha: float, phase: complex) -> Optional[FourierSeries]:
    if series is None:
        return None
    return FourierSeries(phase * series.coeffs * np.exp(-1j * series.indices * alpha))


def _shift_series(series: Optional[FourierSeries], m: int) -> Optional[FourierSeries]:
    if series is None:
        return None
    size = series.max_index + abs(m)
    coeffs = np.zeros(2 * size + 1, dtype=complex)
    start = size - series.max_index + m
    coeffs[start:start + series.coeffs.size] = series.coeffs
    return FourierSeries(coeffs)


def apply_rotation(psi: CircleWavefunction, alpha: float, theta: float = 0.0) -> CircleWavefunction:
    """
    e^{−iαP̂^θ}: φ ↦ e^{iαθ} ψ((φ − α) mod 2π).

    Args:
        psi: Исходная волновая функция
        alpha: Угол сдвига
        theta: Параметр потока (калибровочная фаза e^{iαθ})

    Returns:
        Сдвинутая функция; швы - образ ±π и сдвинутые швы psi
    """
    alpha = canonical_angle(alpha)
    theta = validate_theta(theta)
    phase = np.exp(1j * alpha * theta)

    seams = set(seam_of_shift(alpha))
    for point in psi.seam_points:
        image = canonical_angle(point + alpha)
        if image != -np.pi:
            seams.add(image)

    def func(phi: np.ndarray) -> np.ndarray:
        return phase * psi(wrap_angle(phi - alpha))

    return CircleWavefunction(
        func=func,
        seam_points=tuple(seams),
        series=_rotate_series(psi.series, alpha, phase),
    )


def apply_phase(psi: CircleWavefunction, m: int) -> CircleWavefunction:
    """e^{imQ̂}: φ ↦ e^{imφ} ψ(φ)"""
    m = int(m)

    def func(phi: np.ndarray) -> np.ndarray:
        return np.exp(1j * m * phi) * psi(phi)

    return CircleWavefunction(
        func=func,
        seam_points=psi.seam_points,
        series=_shift_series(psi.series, m),
    )


def weyl(label: CoherentLabel, psi: CircleWavefunction) -> CircleWavefunction:
    """Ŵ^θ(m, α) = e^{imQ̂} e^{−iαP̂^θ}"""
    return apply_phase(apply_rotation(psi, label.alpha, label.theta), label.m)


def coherent_state(label: CoherentLabel) -> CircleWavefunction:
    """
    Замкнутая форма ⟨φ|m, α, θ⟩ = A_θ e^{iαθ} e^{imφ} e^{−(x−iθ)²/2},
    x = (φ − α) mod 2π в [−π, π).
    """
    m, alpha, theta = label.m, label.alpha, label.theta
    amplitude = normalization_constant(theta) * np.exp(1j * alpha * theta)

    def func(phi: np.ndarray) -> np.ndarray:
        x = wrap_angle(phi - alpha)
        return amplitude * np.exp(1j * m * phi) * np.exp(-(x - 1j * theta) ** 2 / 2)

    return CircleWavefunction(func=func, seam_points=seam_of_shift(alpha))


def flux_to_theta(charge: float, flux: float, hbar: float = 1.0) -> float:
    """2πθ = eΦ/ħ, θ приведён в [0, 1)"""
    if not hbar > 0:
        raise InvalidFluxError(f"ħ должно быть положительным, получено {hbar}")
    theta = (charge * flux / (TWO_PI * hbar)) % 1.0
    # округление может дать ровно 1.0 для малых отрицательных значений
    return 0.0 if theta >= 1.0 else float(theta)


# ==================== КАЛИБРОВКА ====================

def quasi_periodic_lift(psi: CircleWavefunction, theta: float) -> Callable[[np.ndarray], np.ndarray]:
    """
    Обратное калибровочное преобразование: χ(x) = e^{−iθx} ψ(x mod 2π)
    на всей прямой, χ(x + 2πn) = e^{−2πinθ} χ(x).
    """
    theta = validate_theta(theta)

    def chi(x):
        points = np.asarray(x, dtype=float)
        values = np.exp(-1j * theta * points) * psi(wrap_angle(points))
        return complex(values) if np.ndim(values) == 0 else values

    return chi


def gauge_transform(chi: Callable[[np.ndarray], np.ndarray], theta: float) -> CircleWavefunction:
    """U^θ: квазипериодическая χ ↦ e^{iθφ} χ(φ) на [−π, π)"""
    theta = validate_theta(theta)

    def func(phi: np.ndarray) -> np.ndarray:
        points = wrap_angle(phi)
        return np.exp(1j * theta * points) * chi(points)

    return CircleWavefunction(func=func)


def vacuum_condition_residual(
    n_modes: int = DEFAULT_FOURIER_N,
    theta: float = 0.0,
    rule: Optional[QuadratureRule] = None
) -> float:
    """
    ‖e^{Q̂+iP̂^θ}|0,0,θ⟩ − |0,0,θ⟩‖ в базисе e^{inφ}/√(2π), |n| ≤ n_modes.

    ⟨n|Q̂|n'⟩ = −i(−1)^{n'−n}/(n'−n) вне диагонали, 0 на диагонали.
    """
    theta = validate_theta(theta)
    rule = rule or QuadratureRule.gauss_legendre(max(DEFAULT_QUAD_ORDER, 4 * n_modes))

    harmonics = np.arange(-n_modes, n_modes + 1)
    offsets = harmonics[None, :] - harmonics[:, None]
    safe = np.where(offsets == 0, 1, offsets)
    position = np.where(offsets == 0, 0.0, -1j * (-1.0) ** offsets / safe)
    momentum = np.diag(harmonics.astype(float)) - theta * np.eye(harmonics.size)
    generator = position + 1j * momentum

    state = fourier_analyze(vacuum(theta), n_modes, rule).coeffs * math.sqrt(TWO_PI)
    residual = float(np.linalg.norm(expm(generator) @ state - state))
    logger.debug(f"Невязка условия вакуума при N={n_modes}, θ={theta}: {residual:.3e}")
    return residual

"""
Overlaps - inner products of coherent states on the circle
Скалярные произведения когерентных состояний: разбиение на интегралы I₁ и I₂,
их замкнутые формы через erf комплексного аргумента и квадратурный оракул
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from kinematics import CoherentLabel, coherent_state, normalization_constant
from numerics import DomainError, QuadratureRule, erf_complex, inner_product

logger = logging.getLogger(__name__)

SQRT_PI = math.sqrt(math.pi)

# Допуск на вещественность скобки erf(z) + erf(z̄)
BRACKET_TOLERANCE = 1e-13


class OverlapMethod(str, Enum):
    """Способ вычисления"""
    ANALYTIC = "analytic"
    QUADRATURE = "quadrature"


class InvalidPairError(ValueError):
    """Состояния с разными θ или метки вне допустимой области"""


class UnsupportedRangeError(ValueError):
    """Пару меток нельзя свести к 0 ≤ α ≤ β < π"""


@dataclass(frozen=True)
class OverlapResult:
    """⟨a|b⟩; для аналитического пути value = A_θ²·(i1 + i2)"""
    value: complex
    method: OverlapMethod
    i1: Optional[complex] = None
    i2: Optional[complex] = None

    @property
    def magnitude(self) -> float:
        return abs(self.value)


@dataclass(frozen=True)
class GridCell:
    """Ячейка таблицы |⟨m−n, α, θ|0, β, θ⟩|"""
    alpha: float
    beta: float
    value: complex
    method: OverlapMethod

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    def to_dict(self) -> Dict:
        """Строка CSV alpha,beta,re,im,abs"""
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "re": self.value.real,
            "im": self.value.imag,
            "abs": self.magnitude,
        }


def _check_pair(a: CoherentLabel, b: CoherentLabel):
    if a.theta != b.theta:
        raise InvalidPairError(f"Состояния с разными θ: {a.theta} и {b.theta}")


def _real_bracket(first: complex, second: complex) -> complex:
    """erf(z) + erf(z̄) обязано быть вещественным"""
    bracket = first + second
    if abs(bracket.imag) > BRACKET_TOLERANCE * max(1.0, abs(first), abs(second)):
        raise DomainError(f"Скобка erf не вещественна: {bracket}")
    return bracket


def split_integrals(k: int, alpha: float, beta: float) -> Tuple[complex, complex]:
    """
    I₁ и I₂ при 0 ≤ α ≤ β < π, k = n − m, h = (β − α)/2.

    I₁ = ∫_{α−π}^{β−π} e^{ikφ} e^{−(φ−α)²/2} e^{−(φ−β+2π)²/2} dφ
    I₂ = ∫_{β−π}^{π+α} e^{ikφ} e^{−(φ−α)²/2} e^{−(φ−β)²/2} dφ
    """
    if not 0.0 <= alpha <= beta < math.pi:
        raise UnsupportedRangeError(f"Нужно 0 ≤ α ≤ β < π, получено α={alpha}, β={beta}")

    h = (beta - alpha) / 2
    center = (alpha + beta) / 2
    shift = 0.5j * k
    prefactor = SQRT_PI / 2 * math.exp(-k ** 2 / 4)

    bracket1 = _real_bracket(erf_complex(h + shift), erf_complex(h - shift))
    bracket2 = _real_bracket(erf_complex(math.pi - h + shift), erf_complex(math.pi - h - shift))

    i1 = prefactor * math.exp(-(math.pi - h) ** 2) * np.exp(1j * k * (center - math.pi)) * bracket1
    i2 = prefactor * math.exp(-h ** 2) * np.exp(1j * k * center) * bracket2
    return complex(i1), complex(i2)


def _reduce(a: CoherentLabel, b: CoherentLabel) -> Tuple[CoherentLabel, CoherentLabel, bool]:
    """
    Сведение пары к 0 ≤ α ≤ β < π.

    Возвращает (a', b', conjugate): ⟨a|b⟩ = ⟨a'|b'⟩ или его сопряжение.
    """
    conjugate = False
    if a.alpha < 0 or b.alpha < 0:
        if not (-math.pi < a.alpha <= 0 and -math.pi < b.alpha <= 0):
            raise UnsupportedRangeError(
                f"Смешанные знаки или α = −π: α={a.alpha}, β={b.alpha}"
            )
        # антиунитарное отражение φ → −φ с сопряжением: (m, α, θ) → (m, −α, θ)
        a = CoherentLabel(m=a.m, alpha=-a.alpha, theta=a.theta)
        b = CoherentLabel(m=b.m, alpha=-b.alpha, theta=b.theta)
        conjugate = True

    if a.alpha > b.alpha:
        a, b = b, a
        conjugate = not conjugate

    return a, b, conjugate


def overlap_analytic(a: CoherentLabel, b: CoherentLabel) -> OverlapResult:
    """
    ⟨m, α, θ|n, β, θ⟩ = A²(e^{2πiθ} I₁ + I₂).

    Raises:
        InvalidPairError: разные θ
        UnsupportedRangeError: пару нельзя свести к 0 ≤ α ≤ β < π
        DomainError: переполнение erf при больших |n − m|
    """
    _check_pair(a, b)
    left, right, conjugate = _reduce(a, b)
    theta = left.theta

    raw1, raw2 = split_integrals(right.m - left.m, left.alpha, right.alpha)
    i1 = math.exp(theta ** 2) * np.exp(2j * math.pi * theta) * raw1
    i2 = math.exp(theta ** 2) * raw2
    if conjugate:
        i1, i2 = np.conj(i1), np.conj(i2)

    i1, i2 = complex(i1), complex(i2)
    value = normalization_constant(theta) ** 2 * (i1 + i2)
    return OverlapResult(value=value, method=OverlapMethod.ANALYTIC, i1=i1, i2=i2)


def overlap_quadrature(
    a: CoherentLabel,
    b: CoherentLabel,
    rule: Optional[QuadratureRule] = None
) -> OverlapResult:
    """Квадратурный оракул: ∫ conj(⟨φ|a⟩)⟨φ|b⟩ dφ с разбиением по швам"""
    _check_pair(a, b)
    value = inner_product(coherent_state(a), coherent_state(b), rule)
    return OverlapResult(value=value, method=OverlapMethod.QUADRATURE)


def overlap(
    a: CoherentLabel,
    b: CoherentLabel,
    rule: Optional[QuadratureRule] = None
) -> OverlapResult:
    """Аналитический путь с переходом на квадратуру"""
    try:
        return overlap_analytic(a, b)
    except UnsupportedRangeError as e:
        logger.debug(f"Переход на квадратуру: {e}")
    except DomainError as e:
        logger.warning(f"⚠️ Аналитическая формула неприменима, считаем квадратурой: {e}")
    return overlap_quadrature(a, b, rule)


def overlap_grid(
    m_minus_n: int,
    alphas: Sequence[float],
    betas: Sequence[float],
    theta: float = 0.0,
    rule: Optional[QuadratureRule] = None
) -> List[GridCell]:
    """
    Таблица ⟨m−n, α, θ|0, β, θ⟩ по α (внешний цикл) и β, α, β ∈ [0, π).
    """
    for angle in list(alphas) + list(betas):
        if not 0.0 <= angle < math.pi:
            raise InvalidPairError(f"Угол {angle} вне [0, π)")

    cells = []
    right_states = [CoherentLabel(m=0, alpha=beta, theta=theta) for beta in betas]
    for alpha in alphas:
        left = CoherentLabel(m=m_minus_n, alpha=alpha, theta=theta)
        for beta, right in zip(betas, right_states):
            result = overlap(left, right, rule)
            cells.append(GridCell(alpha=float(alpha), beta=float(beta),
                                  value=result.value, method=result.method))

    logger.debug(f"Сетка перекрытий m−n={m_minus_n}: {len(cells)} ячеек")
    return cells

"""
Observables - expectation values and uncertainty products
Средние Q̂, Q̂², P̂^θ, (P̂^θ)², поправочные функции q₁, q₂, p₂,
дисперсии, произведение неопределённостей и среднее e^{iQ̂}
"""
import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, Optional

import numpy as np

from kinematics import CoherentLabel, coherent_state, normalization_constant, validate_theta, wrap_angle
from numerics import QuadratureRule, erf_complex, integrate

logger = logging.getLogger(__name__)

SQRT_PI_CUBED = math.pi ** 1.5

# Опубликованные эталонные значения
REFERENCE_NORMALIZATION = 0.751128
REFERENCE_UNITARY_POSITION = 0.778816
REFERENCE_HEISENBERG_MINIMUM = 0.4999999973


@dataclass(frozen=True)
class ExpectationReport:
    """Средние и дисперсии в состоянии |m, α, θ⟩"""
    q1: float
    q2: float
    p2: float
    mean_q: float
    mean_q2: float
    mean_p: float
    mean_p2: float
    disp_q: float
    disp_p: float
    uncertainty_product: float

    def to_dict(self) -> Dict:
        return asdict(self)


def _check_alpha(alpha: float) -> float:
    if not -math.pi <= alpha < math.pi:
        raise ValueError(f"Угол α = {alpha} вне [−π, π)")
    return float(alpha)


def _density_prefactor(theta: float) -> float:
    """A_θ² e^{θ²}: множитель плотности |⟨φ|m,α,θ⟩|² = A_θ² e^{θ²} e^{−x²}"""
    return normalization_constant(theta) ** 2 * math.exp(theta ** 2)


def _erf_gap(alpha: float) -> float:
    """erf(π) − erf(π − |α|)"""
    return erf_complex(math.pi).real - erf_complex(math.pi - abs(alpha)).real


# ==================== ПОПРАВОЧНЫЕ ФУНКЦИИ ====================

def correction_q1(alpha: float, theta: float = 0.0) -> float:
    """
    ⟨Q̂⟩ − α = −sgn(α)·A²√π³(erf(π) − erf(π − |α|)).

    Нечётная по α: хвост гауссианы за швом переносится на другой конец отрезка.
    """
    alpha = _check_alpha(alpha)
    if alpha == 0.0:
        return 0.0
    sign = 1.0 if alpha > 0 else -1.0
    return -sign * _density_prefactor(theta) * SQRT_PI_CUBED * _erf_gap(alpha)


def correction_q2(alpha: float, theta: float = 0.0) -> float:
    """
    ⟨Q̂²⟩ − α² − 1/2 = A²[π(e^{−π²} − 2e^{−(π−|α|)²}) + 2√π³(π−|α|)(erf(π) − erf(π−|α|))]
    """
    alpha = _check_alpha(alpha)
    rest = math.pi - abs(alpha)
    return _density_prefactor(theta) * (
        math.pi * (math.exp(-math.pi ** 2) - 2 * math.exp(-rest ** 2))
        + 2 * SQRT_PI_CUBED * rest * _erf_gap(alpha)
    )


def correction_p2(theta: float = 0.0) -> float:
    """⟨(P̂^θ)²⟩ − m² − 1/2 = A²πe^{−π²}, не зависит от α и θ"""
    return _density_prefactor(theta) * math.pi * math.exp(-math.pi ** 2)


# ==================== СРЕДНИЕ ====================

def expectations(label: CoherentLabel) -> ExpectationReport:
    """Замкнутые формулы для всех средних и дисперсий"""
    m, alpha, theta = label.m, label.alpha, label.theta
    q1 = correction_q1(alpha, theta)
    q2 = correction_q2(alpha, theta)
    p2 = correction_p2(theta)

    disp_q = math.sqrt(max(0.5 + q2 - 2 * alpha * q1 - q1 ** 2, 0.0))
    disp_p = math.sqrt(0.5 + p2)

    return ExpectationReport(
        q1=q1,
        q2=q2,
        p2=p2,
        mean_q=alpha + q1,
        mean_q2=alpha ** 2 + 0.5 + q2,
        mean_p=float(m),
        mean_p2=m ** 2 + 0.5 + p2,
        disp_q=disp_q,
        disp_p=disp_p,
        uncertainty_product=disp_q * disp_p,
    )


def uncertainty_product(alpha: float, theta: float = 0.0) -> float:
    """ΔQ̂·ΔP̂^θ; от m не зависит"""
    return expectations(CoherentLabel(m=0, alpha=alpha, theta=theta)).uncertainty_product


def heisenberg_minimum(theta: float = 0.0) -> float:
    """Значение произведения при α = 0: √(1/4 − p₂²)"""
    return math.sqrt(0.25 - correction_p2(theta) ** 2)


def printed_heisenberg_formula() -> float:
    """√(1/4 − A²π²e^{−2π²}) в напечатанном виде (A² вместо A⁴)"""
    a_squared = normalization_constant(0.0) ** 2
    return math.sqrt(0.25 - a_squared * math.pi ** 2 * math.exp(-2 * math.pi ** 2))


def expectations_quadrature(
    label: CoherentLabel,
    rule: Optional[QuadratureRule] = None
) -> ExpectationReport:
    """
    Оракул: те же величины квадратурой двухкусочных интегралов.

    P̂^θ действует как формальная производная замкнутой формы:
    P̂^θψ = (m + i(x − iθ) − θ)ψ, (P̂^θ)²ψ = (1 + (m + ix)²)ψ.
    """
    m, alpha, theta = label.m, label.alpha, label.theta
    psi = coherent_state(label)
    seams = psi.seam_points

    def density(phi):
        values = psi(phi)
        return np.conj(values) * values

    def momentum_factor(phi):
        x = wrap_angle(phi - alpha)
        return m + 1j * (x - 1j * theta) - theta

    mean_q = integrate(lambda phi: phi * density(phi), rule, seams).real
    mean_q2 = integrate(lambda phi: phi ** 2 * density(phi), rule, seams).real
    mean_p = integrate(lambda phi: momentum_factor(phi) * density(phi), rule, seams).real
    mean_p2 = integrate(lambda phi: (1 + momentum_factor(phi) ** 2) * density(phi), rule, seams).real

    disp_q = math.sqrt(max(mean_q2 - mean_q ** 2, 0.0))
    disp_p = math.sqrt(max(mean_p2 - mean_p ** 2, 0.0))

    return ExpectationReport(
        q1=mean_q - alpha,
        q2=mean_q2 - alpha ** 2 - 0.5,
        p2=mean_p2 - m ** 2 - 0.5,
        mean_q=mean_q,
        mean_q2=mean_q2,
        mean_p=mean_p,
        mean_p2=mean_p2,
        disp_q=disp_q,
        disp_p=disp_p,
        uncertainty_product=disp_q * disp_p,
    )


# ==================== УНИТАРНАЯ КООРДИНАТА ====================

def unitary_position_expectation(
    label: CoherentLabel,
    rule: Optional[QuadratureRule] = None
) -> complex:
    """⟨m, α, θ|e^{iQ̂}|m, α, θ⟩ квадратурой"""
    psi = coherent_state(label)
    return integrate(
        lambda phi: np.exp(1j * phi) * np.abs(psi(phi)) ** 2,
        rule,
        psi.seam_points,
    )


def vacuum_unitary_position(theta: float = 0.0) -> float:
    """⟨0,0|e^{iQ̂}|0,0⟩ = A²√π e^{−1/4} Re erf(π + i/2)"""
    theta = validate_theta(theta)
    return _density_prefactor(theta) * math.sqrt(math.pi) * math.exp(-0.25) \
        * erf_complex(math.pi + 0.5j).real


def relative_unitary_position(
    label: CoherentLabel,
    rule: Optional[QuadratureRule] = None
) -> complex:
    """Отношение к вакуумному среднему; равно e^{iα}"""
    reference = unitary_position_expectation(CoherentLabel(theta=label.theta), rule)
    return unitary_position_expectation(label, rule) / reference

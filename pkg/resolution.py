"""
Resolution - numerical check of the resolution of unity
Проверка разложения единицы Σ_k ∫ |k,α,θ⟩⟨k,α,θ| dα = 2π·𝟙
на тестовых функциях с усечением по k
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from kinematics import CoherentLabel, coherent_state, normalization_constant, validate_theta, vacuum
from numerics import (
    DEFAULT_QUAD_ORDER,
    TWO_PI,
    CircleWavefunction,
    FourierSeries,
    QuadratureRule,
    collect_seams,
    fourier_analyze,
)

logger = logging.getLogger(__name__)


# ==================== КОНФИГУРАЦИЯ ====================

DEFAULT_K_CUTOFF = 50
DEFAULT_ROU_MODES = 16

# Фиксированное зерно случайных тестовых многочленов
ROU_SEED = 20240917
RANDOM_POLY_COUNT = 3
RANDOM_POLY_DEGREE = 8
EXPONENTIAL_DEGREE = 10


@dataclass
class RoUReport:
    """Результат проверки разложения единицы"""
    theta: float
    k_cutoff: int
    quad_order: int
    test_functions: List[str] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    fitted_constants: List[float] = field(default_factory=list)
    max_imaginary: float = 0.0
    truncation_bound: float = 0.0

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def max_constant_error(self) -> float:
        return max((abs(c - TWO_PI) for c in self.fitted_constants), default=0.0)

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["max_residual"] = self.max_residual
        return data


def profile_coefficients(
    theta: float,
    n_max: int,
    rule: Optional[QuadratureRule] = None
) -> FourierSeries:
    """Коэффициенты Фурье g_l профиля e^{−(φ−iθ)²/2} на [−π, π)"""
    order = max(rule.order if rule else DEFAULT_QUAD_ORDER, 4 * n_max)
    series = fourier_analyze(vacuum(theta), n_max, QuadratureRule.gauss_legendre(order))
    return FourierSeries(series.coeffs / normalization_constant(theta))


def channel_weights(
    theta: float,
    k_cutoff: int,
    n_modes: int = EXPONENTIAL_DEGREE,
    rule: Optional[QuadratureRule] = None
) -> np.ndarray:
    """
    Собственные значения усечённого оператора на e^{ijφ}, |j| ≤ n_modes:
    λ_j = 4π²A_θ² Σ_{|k|≤K} |g_{j−k}|² (при K → ∞ λ_j → 2π)
    """
    profile = profile_coefficients(theta, k_cutoff + n_modes, rule)
    power = np.abs(profile.coeffs) ** 2
    offset = profile.max_index
    scale = (TWO_PI * normalization_constant(theta)) ** 2

    weights = []
    for j in range(-n_modes, n_modes + 1):
        lows, highs = j - k_cutoff + offset, j + k_cutoff + offset
        weights.append(scale * power[lows:highs + 1].sum())
    return np.array(weights)


def truncation_bound(
    theta: float,
    k_cutoff: int,
    n_modes: int = EXPONENTIAL_DEGREE,
    rule: Optional[QuadratureRule] = None
) -> float:
    """max_j |λ_j − 2π|/2π на носителе тестового набора"""
    weights = channel_weights(theta, k_cutoff, n_modes, rule)
    return float(np.max(np.abs(weights - TWO_PI)) / TWO_PI)


def _rou_coefficients(
    etas: Sequence[CircleWavefunction],
    theta: float,
    k_cutoff: int,
    rule: QuadratureRule,
    n_modes: int
) -> np.ndarray:
    """
    Коэффициенты Фурье b_j (|j| ≤ n_modes) функций Ô_K η.

    Внутренний интеграл по φ считается первым:
    c_{k,i} = ⟨k, α_i, θ|η⟩, затем
    b_j = Σ_k Σ_i w_i A_θ e^{iα_iθ} g_{j−k} e^{−i(j−k)α_i} c_{k,i}.
    """
    theta = validate_theta(theta)
    channels = np.arange(-k_cutoff, k_cutoff + 1)
    modes = np.arange(-n_modes, n_modes + 1)
    amplitude = normalization_constant(theta)
    profile = profile_coefficients(theta, k_cutoff + n_modes, rule)

    eta_seams = collect_seams(etas)
    alphas, alpha_weights = rule.nodes, rule.weights
    inner = np.empty((alphas.size, channels.size, len(etas)), dtype=complex)

    for i, alpha in enumerate(alphas):
        state = coherent_state(CoherentLabel(m=0, alpha=float(alpha), theta=theta))
        nodes, weights = rule.panels(state.seam_points + eta_seams)
        samples = np.stack([eta(nodes) for eta in etas], axis=1)
        weighted = (weights * np.conj(state(nodes)))[:, None] * samples
        inner[i] = np.exp(-1j * np.outer(channels, nodes)) @ weighted

    lag = modes[:, None] - channels[None, :]
    window = profile.coeffs[lag + profile.max_index]
    phases = np.exp(1j * theta * alphas)[None, None, :] * np.exp(-1j * lag[:, :, None] * alphas[None, None, :])
    kernel = amplitude * window[:, :, None] * phases * alpha_weights[None, None, :]
    return np.einsum("jki,ikt->tj", kernel, inner)


def apply_rou_operator(
    eta: CircleWavefunction,
    theta: float = 0.0,
    k_cutoff: int = DEFAULT_K_CUTOFF,
    rule: Optional[QuadratureRule] = None,
    n_modes: Optional[int] = None
) -> CircleWavefunction:
    """
    Ô_K η = Σ_{|k|≤K} ∫ dα |k, α, θ⟩⟨k, α, θ|η⟩ в окне гармоник |j| ≤ n_modes.

    Точный оператор (K → ∞) даёт 2π·η. Ô_K диагонален на e^{ijφ}, поэтому
    для тригонометрического многочлена достаточно окна его степени; иначе
    окно K + DEFAULT_ROU_MODES накрывает все гармоники с заметным весом λ_j.
    """
    if k_cutoff < 0:
        raise ValueError(f"k_cutoff должно быть ≥ 0, получено {k_cutoff}")
    if n_modes is None:
        n_modes = eta.series.max_index if eta.series is not None else k_cutoff + DEFAULT_ROU_MODES
    rule = rule or QuadratureRule.gauss_legendre()
    coeffs = _rou_coefficients([eta], theta, k_cutoff, rule, n_modes)[0]
    return FourierSeries(coeffs).to_wavefunction()


def standard_test_functions(seed: int = ROU_SEED) -> List[Tuple[str, CircleWavefunction]]:
    """{e^{idφ} : |d| ≤ 10} и три случайных тригонометрических многочлена степени ≤ 8"""
    functions = []
    for d in range(-EXPONENTIAL_DEGREE, EXPONENTIAL_DEGREE + 1):
        series = FourierSeries.from_dict({d: 1.0}, max_index=abs(d))
        functions.append((f"exp(i*{d}*phi)", series.to_wavefunction()))

    rng = np.random.default_rng(seed)
    size = 2 * RANDOM_POLY_DEGREE + 1
    for index in range(RANDOM_POLY_COUNT):
        coeffs = rng.normal(size=size) + 1j * rng.normal(size=size)
        functions.append((f"random_poly_{index}", FourierSeries(coeffs).to_wavefunction()))
    return functions


def verify_rou(
    theta: float = 0.0,
    k_cutoff: int = DEFAULT_K_CUTOFF,
    rule: Optional[QuadratureRule] = None,
    n_modes: int = DEFAULT_ROU_MODES,
    seed: int = ROU_SEED
) -> RoUReport:
    """
    Относительные невязки ‖Ô_Kη − 2πη‖/‖2πη‖ на стандартном наборе.

    Для тригонометрических многочленов степени ≤ n_modes невязка в окне
    гармоник совпадает с полной L²-невязкой.
    """
    rule = rule or QuadratureRule.gauss_legendre()
    names, etas = zip(*standard_test_functions(seed))
    results = _rou_coefficients(list(etas), theta, k_cutoff, rule, n_modes)

    report = RoUReport(
        theta=theta,
        k_cutoff=k_cutoff,
        quad_order=rule.order,
        test_functions=list(names),
        truncation_bound=truncation_bound(theta, k_cutoff, EXPONENTIAL_DEGREE, rule),
    )

    for eta, applied in zip(etas, results):
        target = fourier_analyze(eta, n_modes, rule).coeffs
        residual = np.linalg.norm(applied - TWO_PI * target) / np.linalg.norm(TWO_PI * target)
        # ⟨η|Ôη⟩/⟨η|η⟩ по Парсевалю
        fitted = np.vdot(target, applied) / np.vdot(target, target)
        report.residuals.append(float(residual))
        report.fitted_constants.append(float(fitted.real))
        report.max_imaginary = max(report.max_imaginary, abs(fitted.imag) / max(abs(fitted), 1e-300))

    logger.info(
        f"✅ Разложение единицы θ={theta}, K={k_cutoff}: "
        f"max невязка {report.max_residual:.3e}, граница усечения {report.truncation_bound:.3e}"
    )
    return report

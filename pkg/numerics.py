"""
Numerics - complex error function, circle quadrature and the Fourier pair
Численные примитивы: erf комплексного аргумента, квадратуры Гаусса–Лежандра
на [−π, π) с разбиением на панели, анализ и синтез рядов Фурье
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

logger = logging.getLogger(__name__)


# ==================== КОНФИГУРАЦИЯ ====================

DEFAULT_QUAD_ORDER = 512
DEFAULT_FOURIER_N = 64

# Область аргументов, в которой erf считается надёжно
ERF_BOX = 50.0

TWO_PI = 2.0 * np.pi
SEAM_TOLERANCE = 1e-15

ArrayLike = Union[float, complex, np.ndarray]


class DomainError(ValueError):
    """Аргумент вне области, где функция вычисляется без переполнения"""


class ConfigurationError(ValueError):
    """Несовместимые численные параметры (порядок квадратуры, число гармоник)"""


# ==================== СПЕЦФУНКЦИИ ====================

def erf_complex(z: ArrayLike) -> ArrayLike:
    """
    Функция ошибок комплексного аргумента (через Faddeeva-реализацию scipy).

    Args:
        z: Скаляр или массив, |Re z| ≤ 50 и |Im z| ≤ 50

    Returns:
        erf(z) той же формы; скаляр на входе даёт complex

    Raises:
        DomainError: аргумент вне области или результат не представим в double
    """
    values = np.asarray(z, dtype=complex)

    if np.any(~(np.abs(values.real) <= ERF_BOX)) or np.any(~(np.abs(values.imag) <= ERF_BOX)):
        raise DomainError(f"Аргумент erf вне области |Re z|, |Im z| ≤ {ERF_BOX}: {z}")

    result = special.erf(values)

    # erf растёт как e^{y²−x²}: вблизи мнимой оси возможен Inf
    if not np.all(np.isfinite(result)):
        raise DomainError(f"erf({z}) переполняет double")

    if result.ndim == 0:
        return complex(result)
    return result


# ==================== КВАДРАТУРЫ ====================

@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Узлы и веса Гаусса–Лежандра на [−π, π)"""
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @staticmethod
    def gauss_legendre(order: int = DEFAULT_QUAD_ORDER) -> 'QuadratureRule':
        """Правило заданного порядка (кэшируется)"""
        if order < 1:
            raise ConfigurationError(f"Порядок квадратуры должен быть ≥ 1, получено {order}")
        return _gauss_legendre(int(order))

    def on_interval(self, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
        """Перенос правила на отрезок [a, b]"""
        reference = self.nodes / np.pi
        nodes = 0.5 * (b - a) * reference + 0.5 * (b + a)
        weights = self.weights * (b - a) / TWO_PI
        return nodes, weights

    def panels(self, breakpoints: Iterable[float] = ()) -> Tuple[np.ndarray, np.ndarray]:
        """Все узлы и веса после разбиения [−π, π) в точках разрыва"""
        edges = panel_edges(breakpoints)
        parts = [self.on_interval(a, b) for a, b in zip(edges[:-1], edges[1:])]
        nodes = np.concatenate([p[0] for p in parts])
        weights = np.concatenate([p[1] for p in parts])
        return nodes, weights


@lru_cache(maxsize=16)
def _gauss_legendre(order: int) -> QuadratureRule:
    knots, weights = np.polynomial.legendre.leggauss(order)
    nodes = np.pi * knots
    scaled = np.pi * weights
    nodes.setflags(write=False)
    scaled.setflags(write=False)
    logger.debug(f"Построено правило Гаусса–Лежандра порядка {order}")
    return QuadratureRule(nodes=nodes, weights=scaled, order=order)


def panel_edges(breakpoints: Iterable[float] = ()) -> List[float]:
    """Границы панелей: −π, внутренние точки разрыва по возрастанию, π"""
    inner = sorted(
        float(p) for p in breakpoints
        if -np.pi + SEAM_TOLERANCE < float(p) < np.pi - SEAM_TOLERANCE
    )
    edges = [-np.pi]
    for point in inner:
        if point - edges[-1] > SEAM_TOLERANCE:
            edges.append(point)
    edges.append(np.pi)
    return edges


def integrate(
    f: Callable[[np.ndarray], ArrayLike],
    rule: Optional[QuadratureRule] = None,
    breakpoints: Iterable[float] = ()
) -> complex:
    """
    ∫_{−π}^{π} f(φ) dφ по панелям между точками разрыва.

    Args:
        f: Векторизованная функция узлов
        rule: Правило (по умолчанию порядок 512)
        breakpoints: Внутренние точки разрыва или излома

    Returns:
        Значение интеграла
    """
    rule = rule or QuadratureRule.gauss_legendre()
    nodes, weights = rule.panels(breakpoints)
    values = np.broadcast_to(np.asarray(f(nodes), dtype=complex), nodes.shape)
    return complex(np.dot(weights, values))


# ==================== ВОЛНОВЫЕ ФУНКЦИИ ====================

@dataclass(frozen=True, eq=False)
class CircleWavefunction:
    """
    Волновая функция на [−π, π).

    func получает массив углов и возвращает комплексный массив той же формы;
    seam_points - внутренние точки разрыва/излома для разбиения квадратур.
    """
    func: Callable[[np.ndarray], np.ndarray]
    seam_points: Tuple[float, ...] = ()
    series: Optional['FourierSeries'] = None

    def __post_init__(self):
        seams = tuple(sorted(float(p) for p in self.seam_points))
        for point in seams:
            if not -np.pi < point < np.pi:
                raise ValueError(f"Точка шва {point} вне (−π, π)")
        object.__setattr__(self, "seam_points", seams)

    def __call__(self, phi: ArrayLike) -> ArrayLike:
        angles = np.asarray(phi, dtype=float)
        values = np.broadcast_to(np.asarray(self.func(angles), dtype=complex), angles.shape)
        if values.ndim == 0:
            return complex(values)
        return values


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """Коэффициенты aₙ, |n| ≤ N; coeffs[n + N] = aₙ"""
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size % 2 == 0:
            raise ValueError(f"Ожидалось нечётное число коэффициентов, получено {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def max_index(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.max_index, self.max_index + 1)

    def __getitem__(self, n: int) -> complex:
        if abs(n) > self.max_index:
            raise IndexError(f"Гармоника {n} вне |n| ≤ {self.max_index}")
        return complex(self.coeffs[n + self.max_index])

    def to_dict(self) -> Dict[int, complex]:
        return {int(n): complex(a) for n, a in zip(self.indices, self.coeffs)}

    @staticmethod
    def from_dict(data: Dict[int, complex], max_index: Optional[int] = None) -> 'FourierSeries':
        size = max_index if max_index is not None else max((abs(n) for n in data), default=0)
        coeffs = np.zeros(2 * size + 1, dtype=complex)
        for n, value in data.items():
            coeffs[n + size] = value
        return FourierSeries(coeffs)

    def to_wavefunction(self) -> CircleWavefunction:
        """Тригонометрический многочлен как волновая функция"""
        return CircleWavefunction(func=lambda phi: fourier_synthesize(self, phi), series=self)


def fourier_analyze(
    psi: CircleWavefunction,
    n_max: int = DEFAULT_FOURIER_N,
    rule: Optional[QuadratureRule] = None
) -> FourierSeries:
    """
    aₙ = (1/2π) ∫ e^{−inφ} ψ(φ) dφ для |n| ≤ N.

    Raises:
        ConfigurationError: порядок квадратуры меньше 4N
    """
    rule = rule or QuadratureRule.gauss_legendre()
    if n_max < 0:
        raise ConfigurationError(f"Число гармоник должно быть ≥ 0, получено {n_max}")
    if rule.order < 4 * n_max:
        raise ConfigurationError(
            f"Порядок квадратуры {rule.order} меньше 4N = {4 * n_max}"
        )

    nodes, weights = rule.panels(psi.seam_points)
    harmonics = np.arange(-n_max, n_max + 1)
    kernel = np.exp(-1j * np.outer(harmonics, nodes))
    coeffs = kernel @ (weights * psi(nodes)) / TWO_PI
    return FourierSeries(coeffs)


def fourier_synthesize(series: FourierSeries, phi: ArrayLike) -> ArrayLike:
    """Σ_{|n|≤N} aₙ e^{inφ}"""
    angles = np.asarray(phi, dtype=float)
    values = np.exp(1j * np.multiply.outer(angles, series.indices)) @ series.coeffs
    if np.ndim(values) == 0:
        return complex(values)
    return values


def inner_product(
    left: CircleWavefunction,
    right: CircleWavefunction,
    rule: Optional[QuadratureRule] = None
) -> complex:
    """⟨left|right⟩ с разбиением по швам обеих функций"""
    return integrate(
        lambda phi: np.conj(left(phi)) * right(phi),
        rule,
        breakpoints=left.seam_points + right.seam_points,
    )


def l2_norm(psi: CircleWavefunction, rule: Optional[QuadratureRule] = None) -> float:
    return float(np.sqrt(inner_product(psi, psi, rule).real))


def collect_seams(functions: Sequence[CircleWavefunction]) -> Tuple[float, ...]:
    """Объединение точек шва нескольких функций"""
    seams: List[float] = []
    for psi in functions:
        seams.extend(psi.seam_points)
    return tuple(seams)

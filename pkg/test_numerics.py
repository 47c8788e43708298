#!/usr/bin/env python3
"""
Тесты численных примитивов: erf, квадратуры, ряды Фурье
"""
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats

from kinematics import normalization_constant, vacuum
from numerics import (
    CircleWavefunction,
    ConfigurationError,
    DomainError,
    FourierSeries,
    QuadratureRule,
    erf_complex,
    fourier_analyze,
    fourier_synthesize,
    integrate,
    l2_norm,
    panel_edges,
)

mpmath.mp.dps = 30

box = floats(min_value=-6, max_value=6, allow_nan=False)


def mp_erf(z: complex) -> complex:
    return complex(mpmath.erf(mpmath.mpc(z.real, z.imag)))


# ==================== ERF ====================

def test_erf_zero():
    """Тест: erf(0) = 0"""
    assert erf_complex(0) == 0


@pytest.mark.parametrize("z", [1.0, math.pi, 0.7 + 0.3j, 3 + 2j, math.pi + 0.5j, -2 + 4j, 0.1 - 5j, 1.4 + 2.5j])
def test_erf_matches_mpmath(z):
    """Тест: erf совпадает с mpmath (30 знаков)"""
    expected = mp_erf(complex(z))
    assert abs(erf_complex(z) - expected) <= 1e-12 * abs(expected)


def test_erf_golden_values():
    """Тест: erf(1) ≈ 0.8427007929, erf(π) ≈ 0.9999911"""
    assert erf_complex(1.0).real == pytest.approx(0.8427007929, abs=1e-10)
    assert erf_complex(math.pi).real == pytest.approx(0.9999911, abs=1e-7)


def test_erf_oddness_example():
    """Тест: erf(−z) = −erf(z) для z = 0.7 + 0.3i"""
    z = 0.7 + 0.3j
    assert abs(erf_complex(-z) + erf_complex(z)) <= 1e-14


@settings(max_examples=1000, deadline=None)
@given(box, box)
def test_erf_oddness(re, im):
    """Тест: нечётность erf в области |Re|, |Im| ≤ 6"""
    z = complex(re, im)
    value = erf_complex(z)
    assert abs(erf_complex(-z) + value) <= 1e-14 * max(1.0, abs(value))


@settings(max_examples=1000, deadline=None)
@given(box, box)
def test_erf_conjugation(re, im):
    """Тест: erf(z̄) = conj(erf(z))"""
    z = complex(re, im)
    value = erf_complex(z)
    assert abs(erf_complex(z.conjugate()) - value.conjugate()) <= 1e-14 * max(1.0, abs(value))


@pytest.mark.parametrize("z", [60.0, 1 + 51j, complex("nan"), 50j])
def test_erf_domain_error(z):
    """Тест: вне области или с переполнением - DomainError"""
    with pytest.raises(DomainError):
        erf_complex(z)


def test_erf_vectorized():
    """Тест: массив на входе даёт массив"""
    values = erf_complex(np.array([0.0, 1.0, -1.0]))
    assert values.shape == (3,)
    assert values[1] == pytest.approx(-values[2])


# ==================== КВАДРАТУРЫ ====================

def test_rule_invariants():
    """Тест: число узлов, узлы в [−π, π), сумма весов 2π"""
    rule = QuadratureRule.gauss_legendre(512)
    assert rule.order == len(rule.nodes) == len(rule.weights) == 512
    assert np.all(rule.nodes >= -np.pi) and np.all(rule.nodes < np.pi)
    assert abs(rule.weights.sum() - 2 * np.pi) <= 1e-12


def test_rule_is_cached():
    assert QuadratureRule.gauss_legendre(64) is QuadratureRule.gauss_legendre(64)


def test_rule_order_validated():
    with pytest.raises(ConfigurationError):
        QuadratureRule.gauss_legendre(0)


def test_integrate_constant():
    """Тест: ∫ 1 = 2π"""
    assert integrate(lambda phi: 1.0) == pytest.approx(2 * np.pi, abs=1e-12)


def test_integrate_gaussian():
    """Тест: ∫ e^{−φ²} = √π·erf(π)"""
    expected = float(mpmath.sqrt(mpmath.pi) * mpmath.erf(mpmath.pi))
    assert integrate(lambda phi: np.exp(-phi ** 2)).real == pytest.approx(expected, abs=1e-12)


def test_integrate_odd():
    """Тест: ∫ sin φ = 0"""
    assert abs(integrate(np.sin)) <= 1e-13


@pytest.mark.parametrize("order", [128, 512])
def test_integrate_trig_exactness(order):
    """Тест: ∫ e^{inφ} = 2π·[n = 0] для всех |n| ≤ order/2 − 1"""
    rule = QuadratureRule.gauss_legendre(order)
    worst = 0.0
    for n in range(-(order // 2 - 1), order // 2):
        value = integrate(lambda phi: np.exp(1j * n * phi), rule)
        expected = 2 * np.pi if n == 0 else 0.0
        worst = max(worst, abs(value - expected))
    assert worst <= 1e-12


def test_integrate_splits_panels():
    """Тест: излом в точке 0 интегрируется точно при разбиении"""
    value = integrate(np.abs, QuadratureRule.gauss_legendre(16), breakpoints=[0.0])
    assert value.real == pytest.approx(np.pi ** 2, abs=1e-12)


def test_panel_edges():
    assert panel_edges([0.5, -0.5, 0.5, np.pi, -np.pi]) == [-np.pi, -0.5, 0.5, np.pi]


# ==================== ФУРЬЕ ====================

def test_analyze_single_harmonic():
    """Тест: e^{3iφ}, N = 5 → a₃ = 1, остальные 0"""
    psi = CircleWavefunction(lambda phi: np.exp(3j * phi))
    series = fourier_analyze(psi, 5)
    for n in range(-5, 6):
        assert abs(series[n] - (1.0 if n == 3 else 0.0)) <= 1e-12


def test_analyze_cosine():
    """Тест: cos φ → a₁ = a₋₁ = 1/2"""
    series = fourier_analyze(CircleWavefunction(np.cos), 2)
    assert series.to_dict()[1] == pytest.approx(0.5, abs=1e-12)
    assert series.to_dict()[-1] == pytest.approx(0.5, abs=1e-12)
    assert abs(series[0]) <= 1e-12 and abs(series[2]) <= 1e-12


def test_analyze_vacuum_golden():
    """Тест: a₀ вакуума = A·erf(π/√2)/√(2π)"""
    a = normalization_constant(0.0)
    expected = a * float(mpmath.erf(mpmath.pi / mpmath.sqrt(2))) / math.sqrt(2 * math.pi)
    series = fourier_analyze(vacuum(0.0), 8)
    assert series[0].real == pytest.approx(expected, abs=1e-13)
    assert abs(series[0].imag) <= 1e-15


def test_analyze_requires_margin():
    """Тест: порядок квадратуры < 4N - ошибка конфигурации"""
    with pytest.raises(ConfigurationError):
        fourier_analyze(vacuum(0.0), 5, QuadratureRule.gauss_legendre(16))


def test_synthesize_constant():
    series = FourierSeries.from_dict({0: 1.0})
    assert fourier_synthesize(series, np.array([-3.0, 0.0, 2.0])) == pytest.approx([1, 1, 1])


def test_roundtrip_harmonic():
    """Тест: анализ и синтез e^{2iφ} в точке 0.4"""
    series = fourier_analyze(CircleWavefunction(lambda phi: np.exp(2j * phi)), 4)
    assert abs(fourier_synthesize(series, 0.4) - np.exp(0.8j)) <= 1e-12


def test_roundtrip_random_trig_polynomial():
    """Тест: тригонометрический многочлен степени 6 восстанавливается при N = 8"""
    rng = np.random.default_rng(7)
    original = FourierSeries(rng.normal(size=13) + 1j * rng.normal(size=13))
    psi = original.to_wavefunction()
    restored = fourier_analyze(psi, 8)
    phi = np.linspace(-np.pi, np.pi, 101, endpoint=False)
    assert np.max(np.abs(fourier_synthesize(restored, phi) - psi(phi))) <= 1e-10


def test_vacuum_truncation_converges():
    """Тест: ряд вакуума сходится медленно (излом на шве), ошибка убывает с N"""
    psi = vacuum(0.0)
    error_32 = abs(fourier_synthesize(fourier_analyze(psi, 32), 1.0) - psi(1.0))
    error_128 = abs(fourier_synthesize(fourier_analyze(psi, 128), 1.0) - psi(1.0))
    assert error_32 < 1e-3
    assert error_128 < 2e-4


def test_l2_norm_of_harmonic():
    psi = CircleWavefunction(lambda phi: np.exp(4j * phi))
    assert l2_norm(psi) == pytest.approx(math.sqrt(2 * math.pi), abs=1e-12)


def test_wavefunction_rejects_bad_seam():
    with pytest.raises(ValueError):
        CircleWavefunction(np.cos, seam_points=(4.0,))


def test_series_index_bounds():
    series = FourierSeries.from_dict({1: 2.0})
    assert series.max_index == 1
    with pytest.raises(IndexError):
        series[2]

"""
小波与超扇的 Fourier 展开、Witt 生成元展开与求积检验
"""
import math
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np
from scipy import integrate

from farey_ppsl2.core.fields import evaluate_at_angle
from farey_ppsl2.core.modular import edge_endpoints, farey_edges
from farey_ppsl2.core.wavelets import hyperfan_support, normalized_wavelet
from farey_ppsl2.entity.entity_field import PiecewiseField, Sl2Element
from farey_ppsl2.entity.entity_geometry import Framing
from farey_ppsl2.entity.entity_group import ExtendedRational, GroupElement
from farey_ppsl2.entity.entity_series import FourierSeries
from farey_ppsl2.util.logger import fail

TWO_PI = 2 * math.pi

# Witt 展开中常数部分 (b_0, b_{+1}, b_{-1})，按 n mod 4
WITT_CONSTANTS = {
    0: (1, 0, 0),
    1: (0, 1, 0),
    2: (1, -1j, 1j),
    3: (0, 0, 1),
}


def _trig_coefficients(value: Sl2Element) -> Tuple[complex, complex, complex]:
    # (γ+β)cosθ + 2α sinθ + (γ-β) = a₋₁e^{-iθ} + a₀ + a₁e^{iθ}
    alpha, beta, gamma = float(value.alpha), float(value.beta), float(value.gamma)
    return (gamma + beta) / 2 + 1j * alpha, gamma - beta, (gamma + beta) / 2 - 1j * alpha


def _arcs(field: PiecewiseField) -> List[Tuple[float, float, Sl2Element]]:
    if field.is_global:
        return [(0.0, TWO_PI, field.values[0])]
    angles = [point.angle() for point in field.breakpoints]
    arcs = []
    for index, value in enumerate(field.values):
        start = angles[index]
        end = angles[index + 1] if index + 1 < len(angles) else angles[0] + TWO_PI
        arcs.append((start, end, value))
    return arcs


def fourier_coefficients(field: PiecewiseField, modes: Iterable[int]) -> np.ndarray:
    """
    逐段精确积分 c_n = (2π)⁻¹∫ g(θ) e^{-inθ} dθ，g 为分段三角多项式
    """
    modes = np.asarray(list(modes), dtype=np.int64)
    total = np.zeros(modes.shape, dtype=np.complex128)
    for start, end, value in _arcs(field):
        for k, weight in zip((-1, 0, 1), _trig_coefficients(value)):
            if weight == 0:
                continue
            shift = k - modes
            safe = np.where(shift == 0, 1, shift)
            antiderivative = (np.exp(1j * safe * end) - np.exp(1j * safe * start)) / (1j * safe)
            total += weight * np.where(shift == 0, end - start, antiderivative)
    return total / TWO_PI


def quadrature_oracle(field: PiecewiseField, n: int) -> complex:
    return complex(fourier_coefficients(field, [n])[0])


def numeric_quadrature(field: PiecewiseField, n: int) -> complex:
    """scipy 自适应求积，作为第二个独立检验"""
    total = 0j
    for start, end, value in _arcs(field):
        alpha, beta, gamma = float(value.alpha), float(value.beta), float(value.gamma)

        def g(theta: float) -> float:
            return (gamma + beta) * math.cos(theta) + 2 * alpha * math.sin(theta) + (gamma - beta)

        real, _ = integrate.quad(lambda t: g(t) * math.cos(n * t), start, end, limit=200)
        imag, _ = integrate.quad(lambda t: -g(t) * math.sin(n * t), start, end, limit=200)
        total += complex(real, imag)
    return total / TWO_PI


def field_series(field: PiecewiseField, nmax: int) -> FourierSeries:
    modes = np.arange(-nmax, nmax + 1)
    return FourierSeries(modes, fourier_coefficients(field, modes))


def _cayley_ratio(real_part: int, imag_part: int) -> complex:
    # (x - iy)/(x + iy)
    return complex(real_part, -imag_part) / complex(real_part, imag_part)


def wavelet_fourier(element: GroupElement, n) -> np.ndarray:
    """
    |n| >= 2 时 ϑ̄_A 的闭式系数：四项之和除以 πi(n³-n)
    """
    n = np.asarray(n, dtype=np.int64)
    if np.any(n * n <= 1):
        fail("closed-form wavelet coefficients need |n| >= 2")
    a, b, c, d = element.entries()
    terms = (
        (-((c - a) ** 2 + (b - d) ** 2), _cayley_ratio(b - d, a - c)),
        (2 * (c * c + d * d), _cayley_ratio(d, c)),
        (2 * (a * a + b * b), _cayley_ratio(b, a)),
        (-((c + a) ** 2 + (b + d) ** 2), _cayley_ratio(b + d, a + c)),
    )
    numerator = sum(weight * np.power(root, n.astype(np.float64)) for weight, root in terms)
    result = numerator / (1j * math.pi * (n.astype(np.float64) ** 3 - n))
    return result if result.ndim else complex(result)


def hyperfan_fourier(element: GroupElement, n) -> np.ndarray:
    """
    2πi·c_n = Σ_{k≠n} a_k(ζ₋^{n-k} - ζ₊^{n-k})/(k-n) + i·a_n·Δθ，
    a_{±1} = (d∓ic)²/2，a_0 = -(c²+d²)，Δθ 为支撑弧长
    """
    n = np.asarray(n, dtype=np.int64)
    a, b, c, d = element.entries()
    zeta_minus, zeta_plus = _cayley_ratio(b, a), _cayley_ratio(d, c)
    weights = {1: complex(d, -c) ** 2 / 2, 0: complex(-(c * c + d * d)), -1: complex(d, c) ** 2 / 2}
    start, end = hyperfan_support(element)
    span = (end.angle() - start.angle()) % TWO_PI
    total = np.zeros(n.shape, dtype=np.complex128)
    for k, weight in weights.items():
        shift = n - k
        safe = np.where(shift == 0, 1, shift).astype(np.float64)
        ordinary = weight * (np.power(zeta_minus, safe) - np.power(zeta_plus, safe)) / (-safe)
        total += np.where(shift == 0, 1j * weight * span, ordinary)
    result = total / (2j * math.pi)
    return result if result.ndim else complex(result)


def witt_b_constants(n: int) -> Tuple[complex, complex, complex]:
    return WITT_CONSTANTS[n % 4]


def witt_coefficients(n: int, endpoints: Tuple[ExtendedRational, ExtendedRational]) -> complex:
    """(i/4){n(ξⁿ+ηⁿ) + ((η+ξ)/(η-ξ))(ξⁿ-ηⁿ)}，ξ、η 为端点的 Cayley 像"""
    xi, eta = (complex(*map(float, point.cayley())) for point in endpoints)
    return 0.25j * (n * (xi ** n + eta ** n) + (eta + xi) / (eta - xi) * (xi ** n - eta ** n))


def witt_partial_sum(n: int, max_gen: int, framing: Framing = None) -> Callable[[Sequence[float]], np.ndarray]:
    """
    返回采样器：θ -> (b_0 + b_{+1}e^{iθ} + b_{-1}e^{-iθ}) + Σ_{代数 ≤ G 的边} g_n^e ϑ̄_e(θ)
    """
    terms = []
    for edge in farey_edges(max_gen):
        weight = witt_coefficients(n, edge_endpoints(edge.label))
        if abs(weight) > 0:
            terms.append((weight, normalized_wavelet(edge.label, framing)))
    b0, b_plus, b_minus = witt_b_constants(n)

    def sampler(thetas: Sequence[float]) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=np.float64)
        values = b0 + b_plus * np.exp(1j * thetas) + b_minus * np.exp(-1j * thetas)
        for weight, field in terms:
            values = values + weight * np.array([evaluate_at_angle(field, theta) for theta in thetas])
        return values

    return sampler


def witt_error(n: int, max_gen: int, thetas: Sequence[float]) -> float:
    thetas = np.asarray(thetas, dtype=np.float64)
    return float(np.max(np.abs(witt_partial_sum(n, max_gen)(thetas) - np.exp(1j * n * thetas))))


def fit_decay_exponent(modes: Sequence[int], coefficients: Sequence[complex]) -> float:
    """对 log|c_n| ~ -p·log|n| 作最小二乘，返回 p"""
    modes = np.abs(np.asarray(modes, dtype=np.float64))
    magnitudes = np.abs(np.asarray(coefficients, dtype=np.complex128))
    keep = magnitudes > 1e-300
    if keep.sum() < 2:
        fail("decay fit needs at least two non-zero coefficients")
    slope, _ = np.polyfit(np.log(modes[keep]), np.log(magnitudes[keep]), 1)
    return float(-slope)

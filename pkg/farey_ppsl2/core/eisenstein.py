"""
E2 的 q-展开、非全纯修正、到群上的提升，以及 Cayley 基算子与 Casimir 的有限差分检验
"""
import cmath
import math
from typing import Callable, Tuple, Union

import numpy as np

from farey_ppsl2.entity.entity_series import GroupPoint, QSeries
from farey_ppsl2.util.logger import fail

# 低于此高度时先约化到基本域再求和
REDUCE_BELOW = 0.25

Lifted = Callable[[Union[GroupPoint, np.ndarray]], complex]


def sigma_k(n: int, k: int) -> int:
    """n 的所有正因子的 k 次幂和"""
    if n <= 0:
        return 0
    divisors = []
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            divisors.append(i)
            if i * i != n:
                divisors.append(n // i)
    return sum(d ** k for d in divisors)


def _sigma_series(k: int, constant: int, scale: int, order: int) -> QSeries:
    if order < 0:
        fail(f"q-series order must be non-negative, got {order}")
    coeffs = [constant] + [scale * sigma_k(n, k) for n in range(1, order + 1)]
    return QSeries(np.array(coeffs, dtype=np.int64))


def e2_series(order: int = 200) -> QSeries:
    # 𝔼₂ = 1 - 24 Σ σ(n) qⁿ
    return _sigma_series(1, 1, -24, order)


def e4_series(order: int = 200) -> QSeries:
    # E₄ = 1 + 240 Σ σ₃(n) qⁿ
    return _sigma_series(3, 1, 240, order)


def e2_tail_bound(z: complex, order: int) -> float:
    """
    |Σ_{n>N} 24σ(n)qⁿ| ≤ 24 r^{N+1}(N+1)²(1+r)/(1-r)³，r = |q|，用 σ(n) ≤ n²
    """
    r = math.exp(-2 * math.pi * z.imag)
    return 24 * r ** (order + 1) * (order + 1) ** 2 * (1 + r) / (1 - r) ** 3


def fundamental_domain(z: complex, max_steps: int = 200) -> Tuple[complex, Tuple[int, int, int, int]]:
    """
    用 T^n 与 S 把 z 约化到基本域，返回 (w, g)，w = g·z，g = (a, b, c, d)
    """
    if z.imag <= 0:
        fail(f"{z} does not lie in the upper half-plane")
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        shift = math.floor(z.real + 0.5)
        z -= shift
        a, b = a - shift * c, b - shift * d
        if abs(z) >= 1 - 1e-15:
            return z, (a, b, c, d)
        z = -1 / z
        a, b, c, d = -c, -d, a, b
    fail(f"fundamental domain reduction did not settle after {max_steps} steps", ArithmeticError)


def _series_eval(series: QSeries, z: complex) -> complex:
    return series(cmath.exp(2j * math.pi * z))


def e2_eval_bounded(z: complex, order: int = 200, reduce: bool = True) -> Tuple[complex, float]:
    """𝔼₂(z) 及其截断误差上界"""
    z = complex(z)
    if z.imag <= 0:
        fail(f"{z} does not lie in the upper half-plane")
    if not reduce or z.imag >= REDUCE_BELOW:
        return _series_eval(e2_series(order), z), e2_tail_bound(z, order)
    # 修正后的 E 是权 2 模形式：E(z) = E(gz)/(cz+d)²
    w, (_, _, c, d) = fundamental_domain(z)
    factor = (c * z + d) ** 2
    value, bound = e2_eval_bounded(w, order, reduce=False)
    corrected = (value - 3 / (math.pi * w.imag)) / factor
    return corrected + 3 / (math.pi * z.imag), bound / abs(factor)


def e2_eval(z: complex, order: int = 200, reduce: bool = True) -> complex:
    return e2_eval_bounded(z, order, reduce)[0]


def e2_corrected(z: complex, order: int = 200, reduce: bool = True) -> complex:
    """E = 𝔼₂ - 3/(π·Im z)"""
    z = complex(z)
    return e2_eval(z, order, reduce) - 3 / (math.pi * z.imag)


def e4_eval(z: complex, order: int = 200) -> complex:
    z = complex(z)
    w, (_, _, c, d) = fundamental_domain(z)
    return _series_eval(e4_series(order), w) / (c * z + d) ** 4


def quasi_modularity_defect(z: complex, order: int = 200) -> complex:
    """𝔼₂(-1/z) - z²𝔼₂(z)，应为 12z/(2πi)；两侧都直接求和"""
    z = complex(z)
    return e2_eval(-1 / z, order, reduce=False) - z * z * e2_eval(z, order, reduce=False)


def dz_bar(func: Callable[[complex], complex], z: complex, step: float = 1e-4) -> complex:
    """∂/∂z̄ = ½(∂x + i∂y)，中心差分"""
    dx = (func(z + step) - func(z - step)) / (2 * step)
    dy = (func(z + 1j * step) - func(z - 1j * step)) / (2 * step)
    return (dx + 1j * dy) / 2


def lift(func: Callable[[complex], complex], k: int) -> Lifted:
    """
    φ_f(g) = (ci+d)^{-2k} f(g·i)；在 Iwasawa 坐标下为 y^k e^{2ikθ} f(x+iy)
    """
    def lifted(point: Union[GroupPoint, np.ndarray]) -> complex:
        if isinstance(point, GroupPoint):
            return point.y ** k * cmath.exp(2j * k * point.theta) * func(complex(point.x, point.y))
        (a, b), (c, d) = np.asarray(point, dtype=np.float64)
        denominator = c * 1j + d
        return denominator ** (-2 * k) * func((a * 1j + b) / denominator)

    return lifted


def conjugate_lift(func: Callable[[complex], complex], k: int) -> Lifted:
    lifted = lift(func, k)
    return lambda point: lifted(point).conjugate()


def _partials(phi: Lifted, point: GroupPoint, step: float) -> Tuple[complex, complex, complex]:
    def along(dx=0.0, dy=0.0, dtheta=0.0):
        return (phi(point.shifted(dx, dy, dtheta)) - phi(point.shifted(-dx, -dy, -dtheta))) / (2 * step)

    return along(dx=step), along(dy=step), along(dtheta=step)


def cayley_action(op: str, phi: Lifted, point: GroupPoint, step: float = 1e-4) -> complex:
    """
    H = -i∂θ，F = -2ie^{-2iθ}(y∂z̄ - ¼∂θ)，E = 2ie^{2iθ}(y∂z - ¼∂θ)
    """
    dx, dy, dtheta = _partials(phi, point, step)
    if op == 'H':
        return -1j * dtheta
    if op == 'F':
        return -2j * cmath.exp(-2j * point.theta) * (point.y * (dx + 1j * dy) / 2 - dtheta / 4)
    if op == 'E':
        return 2j * cmath.exp(2j * point.theta) * (point.y * (dx - 1j * dy) / 2 - dtheta / 4)
    fail(f"unknown Cayley basis element '{op}', expected H, E or F")


def casimir(phi: Lifted, point: GroupPoint, step: float = 1e-4) -> complex:
    """Δ = y²(∂x² + ∂y²) - y∂x∂θ"""
    centre = phi(point)
    dxx = (phi(point.shifted(dx=step)) - 2 * centre + phi(point.shifted(dx=-step))) / step ** 2
    dyy = (phi(point.shifted(dy=step)) - 2 * centre + phi(point.shifted(dy=-step))) / step ** 2
    dxt = (phi(point.shifted(step, 0, step)) - phi(point.shifted(step, 0, -step))
           - phi(point.shifted(-step, 0, step)) + phi(point.shifted(-step, 0, -step))) / (4 * step ** 2)
    return point.y ** 2 * (dxx + dyy) - point.y * dxt


def residual_convergence_ratio(residual: Callable[[float], complex], step: float) -> float:
    """|r(h)| / |r(h/2)|，二阶格式应接近 4"""
    coarse, fine = abs(residual(step)), abs(residual(step / 2))
    if fine == 0:
        fail("residual vanished at the finer step", ArithmeticError)
    return coarse / fine

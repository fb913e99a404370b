import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from farey_ppsl2.util.default_util import FloatUtil
from farey_ppsl2.util.logger import fail


@dataclass
class FourierSeries:
    """
    圆周函数的 Fourier 系数 c_n = (2π)⁻¹∫ f e^{-inθ} dθ
    """
    modes: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        self.modes = np.asarray(self.modes, dtype=np.int64)
        self.coefficients = np.asarray(self.coefficients, dtype=np.complex128)
        if self.modes.shape != self.coefficients.shape:
            fail("modes and coefficients must have the same shape")

    def coefficient(self, n: int) -> complex:
        hits = np.nonzero(self.modes == n)[0]
        return complex(self.coefficients[hits[0]]) if hits.size else 0j

    def is_real(self, tol: float = 1e-12) -> bool:
        """实函数满足 c_{-n} = conj(c_n)"""
        present = set(int(n) for n in self.modes)
        return all(abs(self.coefficient(-int(n)) - np.conj(value)) <= tol
                   for n, value in zip(self.modes, self.coefficients) if -int(n) in present)

    def evaluate(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
        return np.exp(1j * np.outer(theta, self.modes)) @ self.coefficients


@dataclass
class QSeries:
    """q-展开 Σ a_n q^n（整数系数）"""
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.int64)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, q: complex) -> complex:
        return complex(np.polynomial.polynomial.polyval(q, self.coeffs.astype(np.complex128)))


@dataclass(frozen=True)
class GroupPoint:
    """
    PSL2(R) 的 Iwasawa 坐标 (x, y, θ)，对应 c = -sinθ/√y, d = cosθ/√y
    """
    x: float
    y: float
    theta: float

    def __post_init__(self):
        if self.y <= 0:
            fail(f"group point needs y > 0, got {self.y}")

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> 'GroupPoint':
        (a, b), (c, d) = np.asarray(m, dtype=np.float64)
        z = (a * 1j + b) / (c * 1j + d)
        return cls(z.real, z.imag, -math.atan2(c, d))

    def matrix(self) -> np.ndarray:
        root = math.sqrt(self.y)
        cos, sin = math.cos(self.theta), math.sin(self.theta)
        return np.array([[root * cos - self.x * sin / root, root * sin + self.x * cos / root],
                         [-sin / root, cos / root]])

    def shifted(self, dx: float = 0.0, dy: float = 0.0, dtheta: float = 0.0) -> 'GroupPoint':
        return GroupPoint(self.x + dx, self.y + dy, self.theta + dtheta)

    def as_tuple(self) -> Tuple[float, float, float]:
        return self.x, self.y, self.theta


@dataclass(frozen=True)
class KKResult:
    """截断和及其尾项上界"""
    value: complex
    tail_bound: float
    truncation: int

    def to_json(self) -> dict:
        return {
            'value': FloatUtil.format_complex(self.value),
            'tail_bound': FloatUtil.format(self.tail_bound),
            'truncation': self.truncation,
        }

"""
分段 sl2 值场：求值、共轭作用、标架规范化与括号
"""
import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, List, Tuple

from farey_ppsl2.core.modular import act_right
from farey_ppsl2.entity.entity_field import PiecewiseField, Sl2Element, ZERO_SL2
from farey_ppsl2.entity.entity_geometry import Framing
from farey_ppsl2.entity.entity_group import ExtendedRational
from farey_ppsl2.util.logger import fail


def evaluate(field: PiecewiseField, x: ExtendedRational) -> Fraction:
    """标量场在 x 处的值，断点处取两侧平均"""
    before, after = field.value_before(x), field.value_after(x)
    if before == after:
        return after.scalar_at(x)
    return (before.scalar_at(x) + after.scalar_at(x)) / 2


def evaluate_at_angle(field: PiecewiseField, theta: float) -> float:
    """数值求值：θ 取 Cayley 角，e^{iθ} = (s - i)/(s + i)"""
    theta = theta % (2 * math.pi)
    if theta == 0:
        x = ExtendedRational(1, 0)
    else:
        # s = -cot(θ/2) 的有理近似只用于定位所在弧
        x = ExtendedRational.of(Fraction(-math.cos(theta / 2) / math.sin(theta / 2)).limit_denominator(10 ** 12))
    value = field.value_after(x)
    alpha, beta, gamma = float(value.alpha), float(value.beta), float(value.gamma)
    return (gamma + beta) * math.cos(theta) + 2 * alpha * math.sin(theta) + (gamma - beta)


def conjugate(field: PiecewiseField, element) -> PiecewiseField:
    """弧 J 上的值 X 变为弧 J.A 上的 A⁻¹XA"""
    if field.is_global:
        return PiecewiseField.constant(field.values[0].conjugate_by(element))
    return PiecewiseField.from_pieces(
        (act_right(point, element), value.conjugate_by(element))
        for point, value in zip(field.breakpoints, field.values))


def bracket(first: PiecewiseField, second: PiecewiseField) -> PiecewiseField:
    return first.combine(second, lambda x, y: x.bracket(y))


def scalar_field(value: Sl2Element, x: ExtendedRational) -> Fraction:
    return value.scalar_at(x)


def _solve3(rows: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    # Cramer 法则
    def det(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    base = det(rows)
    if base == 0:
        fail("normalization system is singular", ArithmeticError)
    solution = []
    for column in range(3):
        replaced = [[rhs[r] if c == column else rows[r][c] for c in range(3)] for r in range(3)]
        solution.append(det(replaced) / base)
    return solution


def framing_value(framing: Framing, values: Tuple[Fraction, Fraction, Fraction]) -> Sl2Element:
    """在三个标架点上取给定标量值的唯一 sl2 元素"""
    rows = []
    for point in framing.points():
        p, q = point.p, point.q
        norm = Fraction(2, p * p + q * q)
        rows.append([-2 * p * q * norm, -q * q * norm, p * p * norm])
    alpha, beta, gamma = _solve3(rows, list(values))
    return Sl2Element(alpha, beta, gamma)


def normalize(field: PiecewiseField, framing: Framing = None) -> Tuple[PiecewiseField, Sl2Element]:
    """
    减去在标架三点上与 field 取值相同的全局 X，使结果在标架点处为零
    """
    framing = framing or Framing.standard()
    correction = framing_value(framing, tuple(evaluate(field, point) for point in framing.points()))
    shifted = field.map_values(lambda value: value - correction)
    return shifted, correction


def sum_fields(fields: Iterable[PiecewiseField], coefficients: Iterable = None) -> PiecewiseField:
    """一次性在所有断点的并上求线性组合"""
    fields = list(fields)
    coefficients = [Fraction(1)] * len(fields) if coefficients is None else [Fraction(c) for c in coefficients]
    points = sorted({point for field in fields for point in field.breakpoints}, key=lambda point: point.key)
    if not points:
        total = ZERO_SL2
        for field, coefficient in zip(fields, coefficients):
            total = total + field.values[0] * coefficient
        return PiecewiseField.constant(total)
    totals = defaultdict(lambda: ZERO_SL2)
    for field, coefficient in zip(fields, coefficients):
        if coefficient == 0:
            continue
        for point in points:
            totals[point] = totals[point] + field.value_after(point) * coefficient
    return PiecewiseField.from_pieces((point, totals[point]) for point in points)

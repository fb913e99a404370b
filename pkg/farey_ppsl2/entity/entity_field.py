from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Tuple

from farey_ppsl2.entity.entity_group import ExtendedRational, GroupElement
from farey_ppsl2.util.default_util import RationalUtil
from farey_ppsl2.util.logger import fail


@dataclass(frozen=True)
class Sl2Element:
    """
    sl2(Q) 元素 (α β; γ −α)，即 αh + βe + γf
    """
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)

    def __post_init__(self):
        # 统一存为 Fraction，保证相等比较与哈希一致
        object.__setattr__(self, 'alpha', Fraction(self.alpha))
        object.__setattr__(self, 'beta', Fraction(self.beta))
        object.__setattr__(self, 'gamma', Fraction(self.gamma))

    @classmethod
    def from_matrix(cls, m00, m01, m10, m11) -> 'Sl2Element':
        if Fraction(m00) + Fraction(m11) != 0:
            fail(f"({m00} {m01}; {m10} {m11}) is not traceless")
        return cls(m00, m01, m10)

    def __add__(self, other: 'Sl2Element') -> 'Sl2Element':
        return Sl2Element(self.alpha + other.alpha, self.beta + other.beta, self.gamma + other.gamma)

    def __sub__(self, other: 'Sl2Element') -> 'Sl2Element':
        return Sl2Element(self.alpha - other.alpha, self.beta - other.beta, self.gamma - other.gamma)

    def __neg__(self) -> 'Sl2Element':
        return Sl2Element(-self.alpha, -self.beta, -self.gamma)

    def __mul__(self, scalar) -> 'Sl2Element':
        scalar = Fraction(scalar)
        return Sl2Element(scalar * self.alpha, scalar * self.beta, scalar * self.gamma)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.alpha == 0 and self.beta == 0 and self.gamma == 0

    def bracket(self, other: 'Sl2Element') -> 'Sl2Element':
        return Sl2Element(self.beta * other.gamma - self.gamma * other.beta,
                          2 * (self.alpha * other.beta - self.beta * other.alpha),
                          2 * (self.gamma * other.alpha - self.alpha * other.gamma))

    def trace_form(self, other: 'Sl2Element') -> Fraction:
        # tr(XY)
        return 2 * self.alpha * other.alpha + self.beta * other.gamma + self.gamma * other.beta

    def conjugate_by(self, m) -> 'Sl2Element':
        """M⁻¹ X M，M 为任意非退化矩阵（带 a,b,c,d 属性）"""
        a, b, c, d = (Fraction(v) for v in (m.a, m.b, m.c, m.d))
        det = a * d - b * c
        if det == 0:
            fail("cannot conjugate by a singular matrix")
        x00, x01, x10, x11 = self.alpha, self.beta, self.gamma, -self.alpha
        # adj(M)·X
        p00, p01 = d * x00 - b * x10, d * x01 - b * x11
        p10, p11 = -c * x00 + a * x10, -c * x01 + a * x11
        return Sl2Element((p00 * a + p01 * c) / det, (p00 * b + p01 * d) / det, (p10 * a + p11 * c) / det)

    def scalar_at(self, x: ExtendedRational) -> Fraction:
        """圆周上的标量向量场在 x=p/q 处的值"""
        p, q = x.p, x.q
        return 2 * (self.gamma * p * p - 2 * self.alpha * p * q - self.beta * q * q) / (p * p + q * q)

    def matrix(self) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
        return (self.alpha, self.beta), (self.gamma, -self.alpha)

    def to_json(self) -> dict:
        return {
            'alpha': RationalUtil.format(self.alpha),
            'beta': RationalUtil.format(self.beta),
            'gamma': RationalUtil.format(self.gamma),
        }

    def __str__(self) -> str:
        return f'({self.alpha} {self.beta}; {self.gamma} {-self.alpha})'


ZERO_SL2 = Sl2Element()
SL2_H = Sl2Element(1, 0, 0)
SL2_E = Sl2Element(0, 1, 0)
SL2_F = Sl2Element(0, 0, 1)


@dataclass(frozen=True)
class PiecewiseField:
    """
    圆周上的分段 sl2 值场
    values[i] 取在从 breakpoints[i] 逆时针到 breakpoints[i+1] 的弧上；无断点时为全局场
    """
    breakpoints: Tuple[ExtendedRational, ...]
    values: Tuple[Sl2Element, ...]

    def __post_init__(self):
        if not self.breakpoints:
            if len(self.values) != 1:
                fail("a global field carries exactly one value")
            return
        if len(self.breakpoints) != len(self.values) or len(self.breakpoints) < 2:
            fail("a piecewise field needs at least two breakpoints, one value per arc")
        keys = [point.key for point in self.breakpoints]
        if any(left >= right for left, right in zip(keys, keys[1:])):
            fail("breakpoints must be strictly increasing in ccw order")
        for index, value in enumerate(self.values):
            if value == self.values[index - 1]:
                fail(f"breakpoint {self.breakpoints[index]} separates equal values")

    @classmethod
    def constant(cls, value: Sl2Element) -> 'PiecewiseField':
        return cls((), (value,))

    @classmethod
    def zero(cls) -> 'PiecewiseField':
        return cls.constant(ZERO_SL2)

    @classmethod
    def from_pieces(cls, pieces: Iterable[Tuple[ExtendedRational, Sl2Element]]) -> 'PiecewiseField':
        """排序、去重并合并相邻相等的弧，得到规范形式"""
        ordered = sorted(pieces, key=lambda piece: piece[0].key)
        if not ordered:
            fail("a field needs at least one piece")
        for (left, _), (right, _) in zip(ordered, ordered[1:]):
            if left == right:
                fail(f"breakpoint {left} is listed twice")
        kept = [(point, value) for index, (point, value) in enumerate(ordered)
                if value != ordered[index - 1][1]]
        if not kept:
            return cls.constant(ordered[0][1])
        return cls(tuple(point for point, _ in kept), tuple(value for _, value in kept))

    @property
    def is_global(self) -> bool:
        return not self.breakpoints

    @property
    def global_value(self) -> Sl2Element:
        if not self.is_global:
            fail("field is not global", ArithmeticError)
        return self.values[0]

    @cached_property
    def _keys(self) -> list:
        return [point.key for point in self.breakpoints]

    def _arc_index(self, x: ExtendedRational) -> int:
        # 包含 x 或以 x 为起点的弧
        position = bisect_right(self._keys, x.key) - 1
        return position % len(self.breakpoints)

    def value_after(self, x: ExtendedRational) -> Sl2Element:
        if self.is_global:
            return self.values[0]
        return self.values[self._arc_index(x)]

    def value_before(self, x: ExtendedRational) -> Sl2Element:
        if self.is_global:
            return self.values[0]
        index = self._arc_index(x)
        if self.breakpoints[index] == x:
            index -= 1
        return self.values[index]

    def jump(self, x: ExtendedRational) -> Sl2Element:
        return self.value_after(x) - self.value_before(x)

    def map_values(self, func: Callable[[Sl2Element], Sl2Element]) -> 'PiecewiseField':
        if self.is_global:
            return PiecewiseField.constant(func(self.values[0]))
        return PiecewiseField.from_pieces(zip(self.breakpoints, map(func, self.values)))

    def combine(self, other: 'PiecewiseField',
                op: Callable[[Sl2Element, Sl2Element], Sl2Element]) -> 'PiecewiseField':
        """在公共加细上逐弧组合"""
        points = set(self.breakpoints) | set(other.breakpoints)
        if not points:
            return PiecewiseField.constant(op(self.values[0], other.values[0]))
        return PiecewiseField.from_pieces(
            (point, op(self.value_after(point), other.value_after(point))) for point in points)

    def __add__(self, other: 'PiecewiseField') -> 'PiecewiseField':
        return self.combine(other, lambda x, y: x + y)

    def __sub__(self, other: 'PiecewiseField') -> 'PiecewiseField':
        return self.combine(other, lambda x, y: x - y)

    def __neg__(self) -> 'PiecewiseField':
        return self.map_values(lambda x: -x)

    def __mul__(self, scalar) -> 'PiecewiseField':
        return self.map_values(lambda x: x * scalar)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        if self.is_global:
            return {'global': self.values[0].to_json()}
        return {'pieces': [{'at': str(point), **value.to_json()}
                           for point, value in zip(self.breakpoints, self.values)]}


@dataclass
class HyperfanCombination:
    """
    有限组合 Σ c_A ψ_A + 全局部分
    """
    terms: Dict[GroupElement, Fraction] = field(default_factory=dict)
    global_part: Sl2Element = ZERO_SL2

    def add_term(self, label: GroupElement, coefficient) -> 'HyperfanCombination':
        coefficient = Fraction(coefficient)
        total = self.terms.get(label, Fraction(0)) + coefficient
        if total == 0:
            self.terms.pop(label, None)
        else:
            self.terms[label] = total
        return self

    def __add__(self, other: 'HyperfanCombination') -> 'HyperfanCombination':
        result = HyperfanCombination(dict(self.terms), self.global_part + other.global_part)
        for label, coefficient in other.terms.items():
            result.add_term(label, coefficient)
        return result

    def __sub__(self, other: 'HyperfanCombination') -> 'HyperfanCombination':
        return self + other.scale(-1)

    def scale(self, scalar) -> 'HyperfanCombination':
        scalar = Fraction(scalar)
        if scalar == 0:
            return HyperfanCombination()
        return HyperfanCombination({label: scalar * c for label, c in self.terms.items()},
                                   self.global_part * scalar)

    def conjugate(self, by: GroupElement) -> 'HyperfanCombination':
        # 标签 L -> L·B，全局部分 g -> B⁻¹gB
        return HyperfanCombination({label * by: c for label, c in self.terms.items()},
                                   self.global_part.conjugate_by(by))

    def to_json(self, namer: Optional[Callable[[GroupElement], str]] = None) -> dict:
        terms = sorted(self.terms.items(), key=lambda item: (item[0].c, item[0].a, item[0].d, item[0].b))
        return {
            'terms': [{'label': label.to_json(),
                       'word': namer(label) if namer else str(label),
                       'coef': RationalUtil.format(c)} for label, c in terms],
            'global': self.global_part.to_json(),
        }


@dataclass
class BasisExpansion(HyperfanCombination):
    """
    在定向边集 𝒪 上的展开；global_part 为无法在截断深度内吸收的全局余项
    """
    depth: int = 0
    exact_in_basis: bool = True
    remainder_expansion: Optional[HyperfanCombination] = None

    def to_json(self, namer: Optional[Callable[[GroupElement], str]] = None) -> dict:
        payload = super().to_json(namer)
        payload['depth'] = self.depth
        payload['exact_in_basis'] = self.exact_in_basis
        if self.remainder_expansion is not None:
            payload['remainder'] = self.remainder_expansion.to_json(namer)
        return payload


@dataclass
class OneFormTruncation:
    """
    截断的 1-形式：每条无向 Farey 边对应其取负的规范化小波
    """
    framing: object
    max_gen: int
    fields: Dict[frozenset, PiecewiseField] = field(default_factory=dict)

    def field_of(self, key: frozenset) -> PiecewiseField:
        if key not in self.fields:
            fail(f"edge {sorted(map(str, key))} lies beyond generation {self.max_gen}")
        return self.fields[key]

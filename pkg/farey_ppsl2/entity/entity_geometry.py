from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple

from farey_ppsl2.entity.entity_group import ExtendedRational, GroupElement, INFINITY, ONE, ZERO
from farey_ppsl2.util.default_util import FloatUtil, RationalUtil
from farey_ppsl2.util.logger import fail


@dataclass(frozen=True)
class RationalMatrix:
    """PGL2(Q) 的一个代表元"""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det == 0:
            fail(f"({self.a} {self.b}; {self.c} {self.d}) is singular")

    @classmethod
    def from_group(cls, element: GroupElement) -> 'RationalMatrix':
        return cls(*element.entries())

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: 'RationalMatrix') -> 'RationalMatrix':
        return RationalMatrix(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                              self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self) -> 'RationalMatrix':
        det = self.det
        return RationalMatrix(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def scaled(self, factor) -> 'RationalMatrix':
        return RationalMatrix(self.a * factor, self.b * factor, self.c * factor, self.d * factor)

    def projectively_equal(self, other: 'RationalMatrix') -> bool:
        return (self.a * other.b == self.b * other.a and self.a * other.c == self.c * other.a
                and self.a * other.d == self.d * other.a and self.b * other.c == self.c * other.b
                and self.b * other.d == self.d * other.b and self.c * other.d == self.d * other.c)

    def to_json(self) -> list:
        return [[RationalUtil.format(self.a), RationalUtil.format(self.b)],
                [RationalUtil.format(self.c), RationalUtil.format(self.d)]]


@dataclass(frozen=True)
class LaurentMatrix:
    """s·P + s⁻¹·Q 形式的单参数矩阵族，P、Q 按 (a, b, c, d) 存放"""
    linear: Tuple[int, int, int, int]
    inverse_linear: Tuple[int, int, int, int]

    def at(self, s) -> RationalMatrix:
        s = Fraction(s)
        return RationalMatrix(*(Fraction(p) * s + Fraction(q) / s
                                for p, q in zip(self.linear, self.inverse_linear)))

    def derivative_at_one(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(p) - Fraction(q) for p, q in zip(self.linear, self.inverse_linear))


@dataclass(frozen=True)
class Framing:
    """R̂ 中三个互异点 (u, v, w)"""
    u: ExtendedRational
    v: ExtendedRational
    w: ExtendedRational

    def __post_init__(self):
        if len({self.u, self.v, self.w}) != 3:
            fail(f"framing ({self.u}, {self.v}, {self.w}) has repeated points")

    @classmethod
    def standard(cls) -> 'Framing':
        return cls(ZERO, INFINITY, ONE)

    def points(self) -> Tuple[ExtendedRational, ExtendedRational, ExtendedRational]:
        return self.u, self.v, self.w

    def to_json(self) -> list:
        return [str(point) for point in self.points()]


@dataclass(frozen=True)
class DecoratedPoint:
    """装饰点：圆心 s 与欧氏直径 δ（s=∞ 时为高度）"""
    s: ExtendedRational
    delta: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'delta', Fraction(self.delta))
        if self.delta <= 0:
            fail(f"horocycle at {self.s} needs a positive size, got {self.delta}")

    def to_json(self) -> dict:
        return {'s': str(self.s), 'delta': RationalUtil.format(self.delta)}


EdgeKey = FrozenSet[int]


@dataclass(frozen=True)
class TriangulatedPolygon:
    """
    顶点 0..n-1 逆时针排列的理想多边形三角剖分，可带一条定向的 doe
    """
    n: int
    diagonals: FrozenSet[EdgeKey]
    doe: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.n < 3:
            fail("a polygon needs at least three vertices")
        if len(self.diagonals) != self.n - 3:
            fail(f"a triangulated {self.n}-gon has {self.n - 3} diagonals, got {len(self.diagonals)}")
        for diagonal in self.diagonals:
            i, j = sorted(diagonal)
            if self.is_boundary(i, j):
                fail(f"{{{i}, {j}}} is a boundary edge, not a diagonal")
        for first, second in combinations(self.diagonals, 2):
            i, j = sorted(first)
            k, l = sorted(second)
            if (i < k < j < l) or (k < i < l < j):
                fail(f"diagonals {{{i},{j}}} and {{{k},{l}}} cross")
        if self.doe is not None and not self.is_edge(*self.doe):
            fail(f"doe {self.doe} is not an edge of the triangulation")

    @classmethod
    def fan(cls, n: int, doe: Optional[Tuple[int, int]] = None) -> 'TriangulatedPolygon':
        return cls(n, frozenset(frozenset((0, j)) for j in range(2, n - 1)), doe)

    def is_boundary(self, i: int, j: int) -> bool:
        return (j - i) % self.n in (1, self.n - 1)

    def is_edge(self, i: int, j: int) -> bool:
        return self.is_boundary(i, j) or frozenset((i, j)) in self.diagonals

    def triangles(self) -> List[Tuple[int, int, int]]:
        return [triple for triple in combinations(range(self.n), 3)
                if self.is_edge(triple[0], triple[1]) and self.is_edge(triple[1], triple[2])
                and self.is_edge(triple[0], triple[2])]


@dataclass(frozen=True)
class Tessellation:
    """
    截断的理想三角剖分：顶点、无向边与定向 doe
    """
    vertices: FrozenSet
    edges: FrozenSet[FrozenSet]
    doe: Tuple

    def has_edge(self, x, y) -> bool:
        return frozenset((x, y)) in self.edges


@dataclass
class TessellationMap:
    """从 Farey 点到圆周点的特征映射（截断到 depth 代）"""
    depth: int
    images: Dict[ExtendedRational, object] = field(default_factory=dict)
    edges: List[Tuple[object, object]] = field(default_factory=list)

    def as_tessellation(self) -> Tessellation:
        return Tessellation(frozenset(self.images.values()),
                            frozenset(frozenset(edge) for edge in self.edges),
                            (self.images[ZERO], self.images[INFINITY]))


@dataclass
class DecoratedTessellationTruncation:
    """到 G 代为止的装饰 Farey 剖分"""
    depth: int
    vertices: Dict[ExtendedRational, DecoratedPoint] = field(default_factory=dict)
    lambdas: Dict[FrozenSet[ExtendedRational], Fraction] = field(default_factory=dict)
    # 边 -> 标签 A 的生成元词，e_A 取 𝒪 中的定向
    labels: Dict[FrozenSet[ExtendedRational], str] = field(default_factory=dict)

    def to_json(self) -> dict:
        vertices = sorted(self.vertices.items(), key=lambda item: item[0].key)
        return {
            'G': self.depth,
            'vertices': [{'p': str(x.p), 'q': str(x.q), **point.to_json()} for x, point in vertices],
            'edges': [{'label': self.labels.get(key, ''), 'lambda_sq': _format_length(value * value)}
                      for key, value in self.lambdas.items()],
        }


def _format_length(value) -> str:
    return RationalUtil.format(value) if isinstance(value, (int, Fraction)) else FloatUtil.format(value)

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

from farey_ppsl2.util.logger import fail

Number = Union[int, Fraction]


@dataclass(frozen=True)
class ExtendedRational:
    """
    R̂ 上的有理点 p/q，约定 gcd(p,q)=1、q>=0，无穷远点唯一记作 1/0
    """
    p: int
    q: int

    def __post_init__(self):
        if self.q < 0 or math.gcd(self.p, self.q) != 1 or (self.q == 0 and self.p != 1):
            fail(f"({self.p}, {self.q}) is not a normalized extended rational")

    @classmethod
    def of(cls, num: Number, den: Number = 1) -> 'ExtendedRational':
        """齐次坐标 (num, den) 规范化，允许有理数分量"""
        num, den = Fraction(num), Fraction(den)
        if den == 0:
            if num == 0:
                fail("(0, 0) does not name a point of the projective line")
            return cls(1, 0)
        value = num / den
        return cls(value.numerator, value.denominator)

    @classmethod
    def parse(cls, text: str) -> 'ExtendedRational':
        cleaned = str(text).strip()
        if cleaned in ('inf', 'oo', '∞', '1/0', '-1/0'):
            return cls(1, 0)
        matched = re.match(r'^([+-]?\d+)(?:/([+-]?\d+))?$', cleaned)
        if matched is None:
            fail(f"'{text}' is not an extended rational")
        return cls.of(int(matched.group(1)), int(matched.group(2) or 1))

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @property
    def value(self) -> Fraction:
        if self.is_infinite:
            fail("the point at infinity has no finite value")
        return Fraction(self.p, self.q)

    @property
    def key(self) -> Tuple[int, Fraction]:
        # 逆时针排序键：∞ 在最前，其后按 s 递增
        return (0, Fraction(0)) if self.is_infinite else (1, Fraction(self.p, self.q))

    def cayley(self) -> Tuple[Fraction, Fraction]:
        """单位圆上的像 (cosθ, sinθ)"""
        norm = self.p * self.p + self.q * self.q
        return Fraction(self.p * self.p - self.q * self.q, norm), Fraction(-2 * self.p * self.q, norm)

    def angle(self) -> float:
        cos, sin = self.cayley()
        return math.atan2(float(sin), float(cos)) % (2 * math.pi)

    def __neg__(self) -> 'ExtendedRational':
        return self if self.is_infinite else ExtendedRational(-self.p, self.q)

    def __str__(self) -> str:
        return f'{self.p}/{self.q}'


INFINITY = ExtendedRational(1, 0)
ZERO = ExtendedRational(0, 1)
ONE = ExtendedRational(1, 1)
MINUS_ONE = ExtendedRational(-1, 1)


@dataclass(frozen=True)
class GroupElement:
    """
    PSL2(Z) 元素，代表元满足 c>0，或 c=0 且 a>0
    """
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            fail(f"({self.a} {self.b}; {self.c} {self.d}) does not have determinant 1")
        if not (self.c > 0 or (self.c == 0 and self.a > 0)):
            fail(f"({self.a} {self.b}; {self.c} {self.d}) is not the normalized sign representative")

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int) -> 'GroupElement':
        if a * d - b * c != 1:
            fail(f"({a} {b}; {c} {d}) is not unimodular")
        if c < 0 or (c == 0 and a < 0):
            a, b, c, d = -a, -b, -c, -d
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> 'GroupElement':
        return cls(1, 0, 0, 1)

    def __mul__(self, other: 'GroupElement') -> 'GroupElement':
        return GroupElement.of(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                               self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def __pow__(self, power: int) -> 'GroupElement':
        base = self if power >= 0 else self.inverse()
        result = GroupElement.identity()
        for _ in range(abs(power)):
            result = result * base
        return result

    def inverse(self) -> 'GroupElement':
        return GroupElement.of(self.d, -self.b, -self.c, self.a)

    def entries(self) -> Tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def to_json(self) -> list:
        return [[self.a, self.b], [self.c, self.d]]

    def __str__(self) -> str:
        return f'({self.a} {self.b}; {self.c} {self.d})'


IDENTITY = GroupElement(1, 0, 0, 1)
GEN_U = GroupElement(1, 0, 1, 1)
GEN_T = GroupElement(1, 1, 0, 1)
GEN_S = GroupElement(0, -1, 1, 0)
GEN_R = GroupElement(0, -1, 1, 1)

LETTERS = {
    'U': GEN_U,
    'U^-1': GEN_U.inverse(),
    'T': GEN_T,
    'T^-1': GEN_T.inverse(),
    'S': GEN_S,
    'R': GEN_R,
    'R^2': GEN_R * GEN_R,
}

_token_pattern = re.compile(r'([IRSTU])(\^-1|⁻¹|-1|\^2|²)?')


@dataclass(frozen=True)
class GroupWord:
    """字母表 {U, U^-1, T, T^-1, S, R, R^2} 上的词"""
    letters: Tuple[str, ...] = ()

    def __post_init__(self):
        for letter in self.letters:
            if letter not in LETTERS:
                fail(f"'{letter}' is not a letter of the generator alphabet")

    @classmethod
    def parse(cls, text: str) -> 'GroupWord':
        compact = re.sub(r'[\s·.*]', '', text)
        letters, position = [], 0
        while position < len(compact):
            matched = _token_pattern.match(compact, position)
            if matched is None:
                fail(f"cannot parse word '{text}' at position {position}")
            name, exponent = matched.group(1), matched.group(2)
            position = matched.end()
            if name == 'I':
                continue
            if exponent in ('^-1', '⁻¹', '-1'):
                letter = f'{name}^-1'
            elif exponent in ('^2', '²'):
                letter = f'{name}^2'
            else:
                letter = name
            if letter not in LETTERS:
                fail(f"'{letter}' is not a letter of the generator alphabet")
            letters.append(letter)
        return cls(tuple(letters))

    def __str__(self) -> str:
        return ' '.join(self.letters) if self.letters else 'I'


@dataclass(frozen=True)
class OrientedEdge:
    """Farey 边 e_A，从 0.A 指向 ∞.A"""
    label: GroupElement
    initial: ExtendedRational
    terminal: ExtendedRational

    @property
    def key(self) -> frozenset:
        return frozenset((self.initial, self.terminal))

    def __str__(self) -> str:
        return f'{self.initial}->{self.terminal}'

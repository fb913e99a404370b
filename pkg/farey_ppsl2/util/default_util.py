import json
import re
from fractions import Fraction
from hashlib import sha256
from math import isqrt
from typing import Any, Optional, Union

from farey_ppsl2.util.logger import fail

_rational_pattern = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$')
_float_formatter: str = '%.12e'


class RationalUtil:
    @staticmethod
    def parse(text: Union[str, int, Fraction]) -> Fraction:
        """解析 'p/q' 或整数形式的有理数"""
        if isinstance(text, (int, Fraction)):
            return Fraction(text)
        matched = _rational_pattern.match(str(text))
        if matched is None:
            fail(f"'{text}' is not a rational of the form p/q")
        numerator, denominator = matched.group(1), matched.group(2)
        if denominator is not None and int(denominator) == 0:
            fail(f"'{text}' has a zero denominator")
        return Fraction(int(numerator), int(denominator or 1))

    @staticmethod
    def format(value: Union[int, Fraction]) -> str:
        value = Fraction(value)
        return f'{value.numerator}/{value.denominator}'

    @staticmethod
    def exact_sqrt(value: Fraction) -> Optional[Fraction]:
        """有理数的精确平方根，非完全平方时返回 None"""
        value = Fraction(value)
        if value < 0:
            return None
        num, den = isqrt(value.numerator), isqrt(value.denominator)
        if num * num == value.numerator and den * den == value.denominator:
            return Fraction(num, den)
        return None

    @staticmethod
    def sqrt(value: Fraction) -> Union[Fraction, float]:
        exact = RationalUtil.exact_sqrt(value)
        return exact if exact is not None else float(value) ** 0.5


class FloatUtil:
    @staticmethod
    def format(value: float) -> str:
        return _float_formatter % value

    @staticmethod
    def format_complex(value: complex) -> dict:
        return {'re': FloatUtil.format(value.real), 'im': FloatUtil.format(value.imag)}


class StringUtil:
    @staticmethod
    def hash(val: str) -> str:
        return sha256(val.encode()).hexdigest()

    @staticmethod
    def digest(payload: Any) -> str:
        # 报告内容的稳定摘要
        return StringUtil.hash(json.dumps(payload, sort_keys=True, ensure_ascii=False))

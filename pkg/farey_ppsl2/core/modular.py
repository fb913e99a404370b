"""
PPSL2(Z) 的组合模型：右作用、词、换位子陪集、Farey 枚举与特征映射
"""
import random
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

from farey_ppsl2.entity.entity_geometry import Tessellation, TessellationMap
from farey_ppsl2.entity.entity_group import ExtendedRational, GroupElement, GroupWord, OrientedEdge, \
    IDENTITY, INFINITY, LETTERS, ZERO
from farey_ppsl2.util.logger import fail, logger

CirclePoint = Union[ExtendedRational, Fraction]

# 换位子商 PSL2(Z)/[PSL2(Z),PSL2(Z)] ≅ Z/6 中各字母的权重
LETTER_WEIGHTS: Dict[str, int] = {
    'U': 1, 'U^-1': -1, 'T': -1, 'T^-1': 1, 'S': 3, 'R': 2, 'R^2': 4,
}


def act_right(x: ExtendedRational, element) -> ExtendedRational:
    """x.A = (dp - bq)/(-cp + aq)，对 A 为反同态"""
    return ExtendedRational.of(element.d * x.p - element.b * x.q, -element.c * x.p + element.a * x.q)


def edge_endpoints(element: GroupElement) -> Tuple[ExtendedRational, ExtendedRational]:
    return act_right(ZERO, element), act_right(INFINITY, element)


def oriented_edge(element: GroupElement) -> OrientedEdge:
    initial, terminal = edge_endpoints(element)
    return OrientedEdge(element, initial, terminal)


def edge_label(initial: ExtendedRational, terminal: ExtendedRational) -> GroupElement:
    """满足 e_A = initial -> terminal 的唯一 A"""
    p, q, r, s = initial.p, initial.q, terminal.p, terminal.q
    det = p * s - q * r
    if det == 1:
        return GroupElement.of(q, -p, s, -r)
    if det == -1:
        return GroupElement.of(q, -p, -s, r)
    fail(f"{initial} and {terminal} are not Farey neighbours")


def word_to_matrix(word: Union[GroupWord, str]) -> GroupElement:
    if isinstance(word, str):
        word = GroupWord.parse(word)
    result = IDENTITY
    for letter in word.letters:
        result = result * LETTERS[letter]
    return result


def _t_power(exponent: int) -> List[str]:
    return ['T'] * exponent if exponent >= 0 else ['T^-1'] * (-exponent)


def matrix_to_word(element: GroupElement) -> GroupWord:
    """
    欧几里得算法：反复左乘 T^{-q} 再左乘 S 直到 c=0，商取向下取整
    """
    a, b, c, d = element.entries()
    letters: List[str] = []
    while c != 0:
        quotient = a // c
        a, b = a - quotient * c, b - quotient * d
        a, b, c, d = -c, -d, a, b
        letters.extend(_t_power(quotient))
        letters.append('S')
    # 剩余 ±T^n，a = ±1
    letters.extend(_t_power(b * a))
    return GroupWord(tuple(letters))


RANDOM_ALPHABET = ('U', 'U^-1', 'T', 'T^-1', 'S')


def random_word(rng: random.Random, max_length: int) -> GroupWord:
    """长度不超过 max_length 的随机词，供带种子的验证用例使用"""
    length = rng.randint(0, max_length)
    return GroupWord(tuple(rng.choice(RANDOM_ALPHABET) for _ in range(length)))


def word_coset(word: Union[GroupWord, str]) -> int:
    if isinstance(word, str):
        word = GroupWord.parse(word)
    return sum(LETTER_WEIGHTS[letter] for letter in word.letters) % 6


def commutant_coset(element: GroupElement) -> int:
    return word_coset(matrix_to_word(element))


def generation(x: ExtendedRational) -> int:
    """连分数部分商之和，0 与 ∞ 为第 0 代"""
    if x.is_infinite or x.p == 0:
        return 0
    numerator, denominator, total = abs(x.p), x.q, 0
    while denominator:
        total += numerator // denominator
        numerator, denominator = denominator, numerator % denominator
    return total


def _stern_brocot_descent(x: ExtendedRational) -> Tuple[List[int], ExtendedRational, ExtendedRational]:
    # x > 0 有限；返回路径比特与两个父点
    lo, hi = (0, 1), (1, 0)
    target = Fraction(x.p, x.q)
    bits: List[int] = []
    while True:
        mediant = (lo[0] + hi[0], lo[1] + hi[1])
        value = Fraction(*mediant)
        if value == target:
            return bits, ExtendedRational(*lo), ExtendedRational(*hi)
        if target < value:
            bits.append(0)
            hi = mediant
        else:
            bits.append(1)
            lo = mediant


def _positive_at(level: int, index: int) -> ExtendedRational:
    lo, hi = (0, 1), (1, 0)
    for shift in range(level - 2, -1, -1):
        mediant = (lo[0] + hi[0], lo[1] + hi[1])
        if (index >> shift) & 1:
            lo = mediant
        else:
            hi = mediant
    return ExtendedRational(lo[0] + hi[0], lo[1] + hi[1])


def farey_enumeration(n: int) -> ExtendedRational:
    """
    第 n 个 Farey 点：0/1、1/0，之后第 g 代占据下标 [2^g, 2^{g+1})，代内自 0 逆时针排列
    """
    if n < 0:
        fail(f"enumeration index must be non-negative, got {n}")
    if n < 2:
        return ZERO if n == 0 else INFINITY
    level = n.bit_length() - 1
    offset, half = n - (1 << level), 1 << (level - 1)
    if offset < half:
        return _positive_at(level, offset)
    return -_positive_at(level, half - 1 - (offset - half))


def farey_index(x: ExtendedRational) -> int:
    if x == ZERO:
        return 0
    if x == INFINITY:
        return 1
    level = generation(x)
    bits, _, _ = _stern_brocot_descent(ExtendedRational(abs(x.p), x.q))
    offset = int(''.join(map(str, bits)) or '0', 2)
    half = 1 << (level - 1)
    if x.p > 0:
        return (1 << level) + offset
    return (1 << level) + half + (half - 1 - offset)


def farey_parents(x: ExtendedRational) -> Tuple[ExtendedRational, ExtendedRational]:
    """x 的两个低代邻点 (u, v)，x 位于从 u 到 v 的逆时针弧内"""
    if generation(x) == 0:
        fail(f"{x} belongs to generation 0 and has no parents")
    _, lo, hi = _stern_brocot_descent(ExtendedRational(abs(x.p), x.q))
    if x.p > 0:
        return lo, hi
    return -hi, -lo


def farey_points(max_gen: int) -> List[ExtendedRational]:
    return [farey_enumeration(n) for n in range(1 << (max_gen + 1))]


def farey_edges(max_gen: int) -> List[OrientedEdge]:
    """定向边集 𝒪 中两端代数都不超过 max_gen 的边：doe 加上由低代指向高代的边"""
    edges = [oriented_edge(IDENTITY)]
    for x in farey_points(max_gen)[2:]:
        for parent in farey_parents(x):
            edges.append(OrientedEdge(edge_label(parent, x), parent, x))
    return edges


def farey_triangles(max_gen: int) -> List[Tuple[ExtendedRational, ExtendedRational, ExtendedRational]]:
    return [(*farey_parents(x), x) for x in farey_points(max_gen)[2:]]


def ccw(a: ExtendedRational, b: ExtendedRational, c: ExtendedRational) -> bool:
    """Cayley 像按逆时针排列"""
    if len({a, b, c}) != 3:
        fail(f"ccw needs three distinct points, got {a}, {b}, {c}")
    (xa, ya), (xb, yb), (xc, yc) = a.cayley(), b.cayley(), c.cayley()
    return (xb - xa) * (yc - ya) - (yb - ya) * (xc - xa) > 0


def circle_key(point: CirclePoint):
    if isinstance(point, ExtendedRational):
        return point.key
    return (Fraction(point),)


def cyclic_between(start: CirclePoint, point: CirclePoint, end: CirclePoint) -> bool:
    """point 严格位于从 start 到 end 的逆时针开弧内"""
    ks, kp, ke = circle_key(start), circle_key(point), circle_key(end)
    if ks < ke:
        return ks < kp < ke
    return kp > ks or kp < ke


def dyadic_enumeration(n: int) -> Fraction:
    """圆周上的二进点（单位为圈），与 Farey 点同样按代、代内自 1/2 逆时针排列"""
    if n < 0:
        fail(f"enumeration index must be non-negative, got {n}")
    if n < 2:
        return Fraction(1, 2) if n == 0 else Fraction(0)
    level = n.bit_length() - 1
    offset, half = n - (1 << level), 1 << (level - 1)
    index = half + offset if offset < half else offset - half
    return Fraction(2 * index + 1, 1 << (level + 1))


def _is_cyclically_increasing(sequence: Sequence[CirclePoint]) -> bool:
    keys = [circle_key(point) for point in sequence]
    descents = sum(1 for left, right in zip(keys, keys[1:] + keys[:1]) if right <= left)
    return descents <= 1


def tessellation_from_enumeration(points: Sequence[CirclePoint], depth: int) -> TessellationMap:
    """
    逐代把 Farey 点送到其父点像之间的实心区间内下标最小的未用点
    """
    if len(points) < 2 or len(set(points)) != len(points):
        fail("an enumeration needs at least two distinct points")
    kinds = {isinstance(point, ExtendedRational) for point in points}
    if len(kinds) != 1:
        fail("an enumeration mixes extended rationals and circle turns")
    if not isinstance(points[0], ExtendedRational) and any(not 0 <= point < 1 for point in points):
        fail("circle turns must lie in [0, 1)")
    mapping = TessellationMap(depth)
    mapping.images[ZERO], mapping.images[INFINITY] = points[0], points[1]
    used = {0, 1}
    for x in farey_points(depth)[2:]:
        u, v = farey_parents(x)
        start, end = mapping.images[u], mapping.images[v]
        chosen = next((index for index, candidate in enumerate(points)
                       if index not in used and cyclic_between(start, candidate, end)), None)
        if chosen is None:
            fail(f"no enumerated point lies between {start} and {end} (needed for {x})")
        used.add(chosen)
        mapping.images[x] = points[chosen]
    ordered = sorted(mapping.images, key=lambda point: point.key)
    if not _is_cyclically_increasing([mapping.images[point] for point in ordered]):
        fail("constructed map does not preserve the cyclic order", ArithmeticError)
    mapping.edges = [(mapping.images[edge.initial], mapping.images[edge.terminal])
                     for edge in farey_edges(depth)]
    logger.debug(f'Tessellation of depth {depth} uses {len(used)} of {len(points)} point(s)')
    return mapping


def tessellation_from_label(element: GroupElement, max_gen: int) -> Tessellation:
    """以 e_A 为 doe 的 Farey 剖分，截断到 max_gen 代的像"""
    edges = frozenset(frozenset((act_right(edge.initial, element), act_right(edge.terminal, element)))
                      for edge in farey_edges(max_gen))
    vertices = frozenset(act_right(x, element) for x in farey_points(max_gen))
    return Tessellation(vertices, edges, edge_endpoints(element))


@lru_cache(maxsize=None)
def _characteristic_image(tess: Tessellation, x: ExtendedRational) -> CirclePoint:
    if x == ZERO:
        return tess.doe[0]
    if x == INFINITY:
        return tess.doe[1]
    u, v = farey_parents(x)
    start, end = _characteristic_image(tess, u), _characteristic_image(tess, v)
    candidates = [w for w in tess.vertices
                  if tess.has_edge(start, w) and tess.has_edge(w, end) and cyclic_between(start, w, end)]
    if len(candidates) != 1:
        fail(f"tessellation does not determine the image of {x} ({len(candidates)} candidate(s))")
    return candidates[0]


def characteristic_map(tess: Tessellation, x: ExtendedRational) -> CirclePoint:
    """由 doe 出发逐个三角形匹配得到的 f_τ(x)"""
    return _characteristic_image(tess, x)


def vertex_fan(x: ExtendedRational, max_gen: int) -> List[ExtendedRational]:
    """x 在截断剖分中的邻点，自 x 起逆时针排列"""
    neighbours = set()
    for edge in farey_edges(max_gen):
        if x in (edge.initial, edge.terminal):
            neighbours.add(edge.terminal if edge.initial == x else edge.initial)
    ordered = sorted(neighbours, key=lambda point: point.key)
    return [y for y in ordered if y.key > x.key] + [y for y in ordered if y.key < x.key]


def fan_coset_steps(x: ExtendedRational, max_gen: int) -> List[int]:
    """
    扇中相邻两条出边标签的陪集差（mod 6）；只比较彼此也是 Farey 邻点的两条边
    """
    fan = vertex_fan(x, max_gen)
    steps = []
    for first, second in zip(fan, fan[1:]):
        if abs(first.p * second.q - first.q * second.p) == 1:
            steps.append((commutant_coset(edge_label(x, second)) - commutant_coset(edge_label(x, first))) % 6)
    return steps

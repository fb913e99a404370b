"""
上半平面中的装饰点、λ-长度、h-长度、标架矩阵与多边形翻转
"""
import math
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Tuple, Union

from farey_ppsl2.core.modular import farey_edges, farey_parents, farey_points, matrix_to_word
from farey_ppsl2.entity.entity_field import PiecewiseField, Sl2Element
from farey_ppsl2.entity.entity_geometry import DecoratedPoint, DecoratedTessellationTruncation, Framing, \
    LaurentMatrix, RationalMatrix, TriangulatedPolygon
from farey_ppsl2.entity.entity_group import ExtendedRational, INFINITY, MINUS_ONE, ONE, ZERO
from farey_ppsl2.util.default_util import RationalUtil
from farey_ppsl2.util.logger import fail, logger

Length = Union[Fraction, float]


def mobius_point(x: ExtendedRational, matrix) -> ExtendedRational:
    """与 act_right 相同的公式，允许有理矩阵"""
    return ExtendedRational.of(matrix.d * x.p - matrix.b * x.q, -matrix.c * x.p + matrix.a * x.q)


def lambda_length_sq(first: DecoratedPoint, second: DecoratedPoint) -> Fraction:
    if first.s == second.s:
        fail(f"horocycles share the center {first.s}")
    if first.s.is_infinite:
        return first.delta / second.delta
    if second.s.is_infinite:
        return second.delta / first.delta
    return (first.s.value - second.s.value) ** 2 / (first.delta * second.delta)


def lambda_length(first: DecoratedPoint, second: DecoratedPoint) -> Length:
    """精确时返回 Fraction，否则返回浮点数"""
    return RationalUtil.sqrt(lambda_length_sq(first, second))


def h_length(opposite: Length, left: Length, right: Length) -> Length:
    return opposite / (left * right)


def ptolemy_flip(a: Length, b: Length, c: Length, d: Length, e: Length) -> Length:
    """四边形边 a,b,c,d 逆时针排列，e 为对角线，返回翻转后的对角线 f"""
    return (a * c + b * d) / e


def cross_ratio_shear(a: Length, b: Length, c: Length, d: Length) -> Length:
    return (a * c) / (b * d)


def shear(a: Length, b: Length, c: Length, d: Length) -> float:
    return math.log(cross_ratio_shear(a, b, c, d))


def mobius_on_coordinates(point: DecoratedPoint, matrix) -> DecoratedPoint:
    """
    s -> (ds - b)/(-cs + a)，δ -> |det|·δ/(a - cs)²；涉及 ∞ 的情形由 λ 不变性确定
    反向定向的矩阵同样保持 λ-长度，顺时针标架因此也可用
    """
    a, b, c, d = (Fraction(v) for v in (matrix.a, matrix.b, matrix.c, matrix.d))
    det = abs(a * d - b * c)
    if det == 0:
        fail("decorations cannot be moved by a singular matrix")
    if point.s.is_infinite:
        if c == 0:
            return DecoratedPoint(INFINITY, point.delta * det / (a * a))
        return DecoratedPoint(ExtendedRational.of(-d, c), det / (c * c * point.delta))
    s = point.s.value
    pole = a - c * s
    if pole == 0:
        return DecoratedPoint(INFINITY, det / (c * c * point.delta))
    return DecoratedPoint(ExtendedRational.of(d * s - b, pole), det * point.delta / (pole * pole))


def framing_matrix(framing: Framing) -> RationalMatrix:
    """把 (u, v, w) 送到 (0, ∞, 1) 的矩阵 L_F（未缩放）"""
    u, v, w = framing.points()
    if u.is_infinite:
        v, w = v.value, w.value
        return RationalMatrix(v, w - v, 1, 0)
    if v.is_infinite:
        u, w = u.value, w.value
        return RationalMatrix(u - w, -u, 0, -1)
    if w.is_infinite:
        u, v = u.value, v.value
        return RationalMatrix(-v, u, -1, 1)
    u, v, w = u.value, v.value, w.value
    return RationalMatrix(v * (u - w), u * (w - v), u - w, w - v)


def transition(framing: Framing, other: Framing) -> RationalMatrix:
    return framing_matrix(framing) * framing_matrix(other).inverse()


def stabilize(coords: Sequence[DecoratedPoint], new_point: DecoratedPoint,
              framing: Framing, other: Framing) -> List[DecoratedPoint]:
    """插入新点后用标架转移矩阵重新规范化"""
    if any(point.s == new_point.s for point in coords):
        fail(f"a decorated point already sits at {new_point.s}")
    matrix = transition(framing, other)
    moved = [mobius_on_coordinates(point, matrix) for point in (*coords, new_point)]
    return sorted(moved, key=lambda point: point.s.key)


def polygon_h_lengths_sq(points: Sequence[DecoratedPoint]) -> List[Fraction]:
    count = len(points)
    if count < 3:
        fail("a polygon needs at least three decorated vertices")
    squares = []
    for index in range(count):
        before, here, after = points[index - 1], points[index], points[(index + 1) % count]
        squares.append(lambda_length_sq(before, after)
                       / (lambda_length_sq(before, here) * lambda_length_sq(here, after)))
    return squares


def polygon_h_lengths(points: Sequence[DecoratedPoint]) -> List[Length]:
    """逐顶点直接计算的 h-长度"""
    return [RationalUtil.sqrt(square) for square in polygon_h_lengths_sq(points)]


def peeled_h_lengths(points: Sequence[DecoratedPoint]) -> List[Length]:
    """
    剥去顶点 1 所在的耳三角形后递归，h-长度对三角形可加
    """
    count = len(points)
    if count == 3:
        return polygon_h_lengths(points)
    ear = polygon_h_lengths([points[0], points[1], points[2]])
    rest = peeled_h_lengths([points[0], *points[2:]])
    return [rest[0] + ear[0], ear[1], rest[1] + ear[2], *rest[2:]]


def insertion_update(a: Length, b: Length, c: Length) -> Tuple[Length, Length, Length]:
    """
    在 λ(x,y)=c 的边上插入新点，λ(x,new)=a、λ(y,new)=b：
    x、y 的 h-长度分别增加 b/(ac)、a/(bc)，新点取 c/(ab)
    """
    return b / (a * c), a / (b * c), c / (a * b)


def _edge(x: ExtendedRational, y: ExtendedRational) -> FrozenSet[ExtendedRational]:
    return frozenset((x, y))


def build_tessellation(lambdas: Dict[FrozenSet[ExtendedRational], Fraction], max_gen: int,
                       squared: bool = False) -> DecoratedTessellationTruncation:
    """
    由 λ-长度逐代重建装饰：δ_∞ = 1，0 处 δ = 1/λ_doe²，新点落在父点之间
    """
    if squared:
        rooted = {}
        for key, value in lambdas.items():
            root = RationalUtil.exact_sqrt(Fraction(value))
            if root is None:
                fail(f"lambda² = {value} on {sorted(map(str, key))} is not a rational square")
            rooted[key] = root
        lambdas = rooted
    edges = farey_edges(max_gen)
    for edge in edges:
        value = lambdas.get(edge.key)
        if value is None:
            fail(f"missing lambda length on edge {edge}")
        if Fraction(value) <= 0:
            fail(f"lambda length on edge {edge} must be positive")
    doe = Fraction(lambdas[_edge(ZERO, INFINITY)])
    roots: Dict[ExtendedRational, Fraction] = {INFINITY: Fraction(1), ZERO: 1 / doe}
    centers: Dict[ExtendedRational, ExtendedRational] = {INFINITY: INFINITY, ZERO: ZERO}
    for x in farey_points(max_gen)[2:]:
        u, v = farey_parents(x)
        a, b = Fraction(lambdas[_edge(u, x)]), Fraction(lambdas[_edge(v, x)])
        if u.is_infinite or v.is_infinite:
            finite, length_inf, length_finite = (v, a, b) if u.is_infinite else (u, b, a)
            root = roots[INFINITY] / length_inf
            step = length_finite * root * roots[finite]
            base = centers[finite].value
            center = base + step if x.value > finite.value else base - step
        else:
            su, sv = centers[u].value, centers[v].value
            root = abs(su - sv) / (a * roots[u] + b * roots[v])
            direction = 1 if sv > su else -1
            center = su + direction * a * root * roots[u]
        roots[x] = root
        centers[x] = ExtendedRational.of(center)
    truncation = DecoratedTessellationTruncation(max_gen)
    for x, root in roots.items():
        truncation.vertices[x] = DecoratedPoint(centers[x], root * root)
    for edge in edges:
        truncation.lambdas[edge.key] = Fraction(lambdas[edge.key])
        truncation.labels[edge.key] = str(matrix_to_word(edge.label))
    logger.debug(f'Built decorated tessellation of depth {max_gen} with {len(roots)} vertices')
    return truncation


def read_lambdas(truncation: DecoratedTessellationTruncation) -> Dict[FrozenSet[ExtendedRational], Length]:
    """从装饰点重新读出各边 λ-长度"""
    result = {}
    for key in truncation.lambdas:
        first, second = (truncation.vertices[x] for x in key)
        result[key] = lambda_length(first, second)
    return result


def canonical_decoration(max_gen: int) -> DecoratedTessellationTruncation:
    ones = {edge.key: Fraction(1) for edge in farey_edges(max_gen)}
    return build_tessellation(ones, max_gen)


# Λ(s) 在四个象限上的分段 Möbius 形变，左作用，象限端点均不动
LAMBDA_FAMILY: Tuple[Tuple[ExtendedRational, LaurentMatrix], ...] = (
    (INFINITY, LaurentMatrix((1, 1, 0, 0), (0, -1, 0, 1))),
    (MINUS_ONE, LaurentMatrix((0, 0, 1, 1), (1, 0, -1, 0))),
    (ZERO, LaurentMatrix((0, 0, -1, 1), (1, 0, 1, 0))),
    (ONE, LaurentMatrix((1, -1, 0, 0), (0, 1, 0, 1))),
)


def lambda_family(s) -> List[Tuple[ExtendedRational, RationalMatrix]]:
    """Λ(s) 的四段矩阵，按象限起点 ∞, -1, 0, 1 排列；s = 1 时全为单位阵"""
    if Fraction(s) <= 0:
        fail(f"the earthquake family needs a positive parameter, got {s}")
    return [(start, matrix.at(s)) for start, matrix in LAMBDA_FAMILY]


def lambda_family_tangent() -> PiecewiseField:
    """Λ(s) 在 s = 1 处的导数，逐象限为 sl2 值"""
    return PiecewiseField.from_pieces((start, Sl2Element.from_matrix(*piece.derivative_at_one()))
                                      for start, piece in LAMBDA_FAMILY)


def _left_action(point: DecoratedPoint, matrix: RationalMatrix) -> DecoratedPoint:
    # 左作用 z -> (az+b)/(cz+d) 等于右作用于伴随矩阵
    adjugate = RationalMatrix(matrix.d, -matrix.b, -matrix.c, matrix.a)
    return mobius_on_coordinates(point, adjugate)


def _quadrant_of(x: ExtendedRational) -> int:
    bounds = [piece[0].key for piece in LAMBDA_FAMILY]
    position = sum(1 for bound in bounds if bound <= x.key) - 1
    return position % len(bounds)


def lambda_family_action(s, max_gen: int) -> DecoratedTessellationTruncation:
    """把 Λ(s) 作用于标准装饰，返回新的装饰与各边 λ-长度"""
    pieces = lambda_family(s)
    canonical = canonical_decoration(max_gen)
    deformed = DecoratedTessellationTruncation(max_gen, labels=dict(canonical.labels))
    for x, point in canonical.vertices.items():
        matrix = pieces[_quadrant_of(x)][1]
        deformed.vertices[x] = _left_action(point, matrix)
    for key in canonical.lambdas:
        first, second = (deformed.vertices[x] for x in key)
        deformed.lambdas[key] = lambda_length(first, second)
    return deformed


def _first_order_data(matrix: RationalMatrix, x: ExtendedRational) -> Tuple[ExtendedRational, Fraction]:
    # 左作用在有限点 x 处的像与导数
    z = x.value
    denominator = matrix.c * z + matrix.d
    image = ExtendedRational.of(matrix.a * z + matrix.b, denominator)
    return image, matrix.det / (denominator * denominator) if denominator != 0 else None


def lambda_family_is_c1(s) -> bool:
    """相邻分段在公共端点处值与一阶导数一致（∞ 处经 z -> -1/z 换元）"""
    flip = RationalMatrix(0, -1, 1, 0)
    pieces = [matrix for _, matrix in lambda_family(s)]
    for index, (point, _) in enumerate(LAMBDA_FAMILY):
        before, after = pieces[index - 1], pieces[index]
        if point.is_infinite:
            before, after, point = flip.inverse() * before * flip, flip.inverse() * after * flip, ZERO
        if _first_order_data(before, point) != _first_order_data(after, point):
            return False
    return True


def polygon_flip(polygon: TriangulatedPolygon, diagonal: FrozenSet[int]) -> TriangulatedPolygon:
    """
    翻转一条对角线；若为 doe，则新 doe 由旧 doe 在四边形内逆时针旋转得到
    """
    if diagonal not in polygon.diagonals:
        fail(f"{sorted(diagonal)} is not a diagonal of the triangulation")
    i, j = sorted(diagonal)
    apexes = [k for k in range(polygon.n) if k not in (i, j)
              and polygon.is_edge(i, k) and polygon.is_edge(j, k)]
    if len(apexes) != 2:
        fail(f"diagonal {sorted(diagonal)} does not bound exactly two triangles", ArithmeticError)
    k, l = apexes
    flipped = frozenset((k, l))
    diagonals = (polygon.diagonals - {diagonal}) | {flipped}
    doe = polygon.doe
    if doe is not None and frozenset(doe) == diagonal:
        corners = sorted((i, j, k, l))

        def following(vertex: int) -> int:
            return corners[(corners.index(vertex) + 1) % 4]

        doe = (following(doe[0]), following(doe[1]))
    return TriangulatedPolygon(polygon.n, diagonals, doe)


def flipped_diagonal(polygon: TriangulatedPolygon, diagonal: FrozenSet[int]) -> FrozenSet[int]:
    after = polygon_flip(polygon, diagonal)
    (created,) = after.diagonals - polygon.diagonals
    return created


def all_triangulations(n: int) -> List[TriangulatedPolygon]:
    """n 边形的全部三角剖分（Catalan 数个）"""
    def split(vertices: Tuple[int, ...]) -> List[FrozenSet[FrozenSet[int]]]:
        if len(vertices) < 3:
            return [frozenset()]
        first, last = vertices[0], vertices[-1]
        results = []
        for index in range(1, len(vertices) - 1):
            apex = vertices[index]
            chords = frozenset(frozenset(pair) for pair in ((first, apex), (apex, last))
                               if (pair[1] - pair[0]) % n not in (1, n - 1))
            for left in split(vertices[:index + 1]):
                for right in split(vertices[index:]):
                    results.append(chords | left | right)
        return results

    return [TriangulatedPolygon(n, diagonals) for diagonals in split(tuple(range(n)))]


def _shares_triangle(polygon: TriangulatedPolygon, first: FrozenSet[int], second: FrozenSet[int]) -> bool:
    return any(set(first) | set(second) <= set(triangle) for triangle in polygon.triangles())


def _pentagon_diagonals(polygon: TriangulatedPolygon, corners: FrozenSet[int]) -> List[FrozenSet[int]]:
    return [diagonal for diagonal in polygon.diagonals if diagonal <= corners]


def face_order(polygon: TriangulatedPolygon, diagonal: FrozenSet[int], limit: int = 16) -> int:
    """反复翻转同一条对角线直到回到原剖分（含 doe）"""
    current, target = polygon, diagonal
    for step in range(1, limit + 1):
        target, current = flipped_diagonal(current, target), polygon_flip(current, target)
        if current == polygon:
            return step
    fail(f"face sequence did not close within {limit} flips", ArithmeticError)


def pentagon_order(polygon: TriangulatedPolygon, first: FrozenSet[int], second: FrozenSet[int],
                   limit: int = 32) -> int:
    """
    在两条共三角形的对角线张成的五边形内交替翻转，返回回到原剖分所需步数
    """
    if not _shares_triangle(polygon, first, second):
        fail(f"{sorted(first)} and {sorted(second)} do not share a triangle")
    corners = frozenset(first | second)
    corners |= next(frozenset(triangle) for triangle in polygon.triangles() if set(first) <= set(triangle)
                    and not set(triangle) <= corners)
    corners |= next(frozenset(triangle) for triangle in polygon.triangles() if set(second) <= set(triangle)
                    and not set(triangle) <= corners)
    if len(corners) != 5:
        fail(f"diagonals {sorted(first)} and {sorted(second)} do not span a pentagon", ArithmeticError)
    current, created = polygon, None
    for step in range(1, limit + 1):
        target = next(diagonal for diagonal in _pentagon_diagonals(current, corners) if diagonal != created)
        created, current = flipped_diagonal(current, target), polygon_flip(current, target)
        if current == polygon:
            return step
    fail(f"pentagon sequence did not close within {limit} flips", ArithmeticError)


def flips_commute(polygon: TriangulatedPolygon, first: FrozenSet[int], second: FrozenSet[int]) -> bool:
    """两条不共三角形的对角线：先翻哪条结果相同"""
    if _shares_triangle(polygon, first, second):
        fail(f"{sorted(first)} and {sorted(second)} share a triangle")
    one = polygon_flip(polygon_flip(polygon, first), second)
    other = polygon_flip(polygon_flip(polygon, second), first)
    return one == other

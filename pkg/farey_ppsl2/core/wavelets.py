"""
母小波、Farey 边小波、超扇 ψ_A 及其线性结构
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from farey_ppsl2.core.fields import conjugate, normalize, sum_fields
from farey_ppsl2.core.modular import cyclic_between, edge_endpoints, farey_edges, farey_points, generation
from farey_ppsl2.entity.entity_field import BasisExpansion, HyperfanCombination, PiecewiseField, Sl2Element, \
    SL2_E, SL2_F, SL2_H, ZERO_SL2
from farey_ppsl2.entity.entity_geometry import Framing
from farey_ppsl2.entity.entity_group import ExtendedRational, GroupElement, GEN_S, GEN_T, GEN_U, IDENTITY, \
    INFINITY, MINUS_ONE, ONE, ZERO
from farey_ppsl2.util.logger import fail, logger

GEN_U_INV = GEN_U.inverse()
GEN_T_INV = GEN_T.inverse()


def earthquake_value(initial: ExtendedRational, terminal: ExtendedRational) -> Sl2Element:
    """
    X(p/q -> r/s) = (ps-qr)⁻¹ (ps+qr, -2pr; 2qs, -(ps+qr))
    """
    p, q, r, s = initial.p, initial.q, terminal.p, terminal.q
    det = p * s - q * r
    if det == 0:
        fail(f"earthquake between coincident points {initial} and {terminal}")
    return Sl2Element(Fraction(p * s + q * r, det), Fraction(-2 * p * r, det), Fraction(2 * q * s, det))


def quad_wavelet(u: ExtendedRational, v: ExtendedRational,
                 w: ExtendedRational, z: ExtendedRational) -> PiecewiseField:
    """
    边 {u, v} 所在四边形（对顶点 w、z）上的小波：
    越过每条侧边的弧上取该侧边自其与 {u, v} 的公共顶点出发的 X
    """
    edge = {u, v}
    corners = sorted((u, v, w, z), key=lambda point: point.key)
    if len(set(corners)) != 4:
        fail("a quadrilateral needs four distinct corners")
    pieces = []
    for index, start in enumerate(corners):
        end = corners[(index + 1) % 4]
        if start in edge and end in edge:
            fail(f"{w} and {z} do not lie on opposite sides of {u}-{v}")
        shared, other = (start, end) if start in edge else (end, start)
        pieces.append((start, earthquake_value(shared, other)))
    return PiecewiseField.from_pieces(pieces)


def mother_wavelet() -> PiecewiseField:
    """ϑ_I：象限 I..IV 上分别为 h+2e, -h+2f, -h-2f, h-2e"""
    return PiecewiseField.from_pieces((
        (INFINITY, SL2_H + SL2_E * 2),
        (MINUS_ONE, -SL2_H + SL2_F * 2),
        (ZERO, -SL2_H - SL2_F * 2),
        (ONE, SL2_H - SL2_E * 2),
    ))


def wavelet(element: GroupElement) -> PiecewiseField:
    return conjugate(mother_wavelet(), element)


def normalized_wavelet(element: GroupElement, framing: Framing = None) -> PiecewiseField:
    return normalize(wavelet(element), framing)[0]


def nilpotent_at(x: ExtendedRational) -> Sl2Element:
    """在 x=p/q 处消失的幂零元 (-pq, p²; -q², pq)"""
    return Sl2Element(-x.p * x.q, x.p * x.p, -x.q * x.q)


def hyperfan_value(element: GroupElement) -> Sl2Element:
    a, b, c, d = element.entries()
    return Sl2Element(c * d, d * d, -c * c)


def hyperfan_support(element: GroupElement) -> Tuple[ExtendedRational, ExtendedRational]:
    """支撑为从 -d/c 逆时针到 -b/a 的弧"""
    initial, terminal = edge_endpoints(element)
    return terminal, initial


def hyperfan(element: GroupElement) -> PiecewiseField:
    start, end = hyperfan_support(element)
    return PiecewiseField.from_pieces(((start, hyperfan_value(element)), (end, ZERO_SL2)))


def materialize(combination: HyperfanCombination) -> PiecewiseField:
    labels = list(combination.terms)
    fields = [hyperfan(label) for label in labels] + [PiecewiseField.constant(combination.global_part)]
    return sum_fields(fields, [combination.terms[label] for label in labels] + [1])


def usa_combination(element: GroupElement) -> HyperfanCombination:
    """Ψ_A = ψ_{STA} - 2ψ_{SA} + ψ_{ST⁻¹A} - ψ_{UA} + 2ψ_A - ψ_{U⁻¹A}"""
    combination = HyperfanCombination()
    for prefix, coefficient in ((GEN_S * GEN_T, 1), (GEN_S, -2), (GEN_S * GEN_T_INV, 1),
                                (GEN_U, -1), (IDENTITY, 2), (GEN_U_INV, -1)):
        combination.add_term(prefix * element, coefficient)
    return combination


def usa_deficiency(element: GroupElement) -> Sl2Element:
    field = materialize(usa_combination(element))
    if not field.is_global:
        fail(f"USA deficiency of {element} is not global", ArithmeticError)
    return field.global_value


def usa_closed_form(element: GroupElement) -> Sl2Element:
    a, b, c, d = element.entries()
    return Sl2Element(c * (d + b) + a * (d - b), d * d - b * b + 2 * b * d, a * a - c * c - 2 * a * c)


def sl2_from_hyperfans() -> Dict[str, HyperfanCombination]:
    """
    h = Ψ_I - (Ψ_T + Ψ_{U⁻¹})/3，e = (2Ψ_T - Ψ_{U⁻¹})/3，f = (2Ψ_{U⁻¹} - Ψ_T)/3
    """
    psi_i, psi_t, psi_u = usa_combination(IDENTITY), usa_combination(GEN_T), usa_combination(GEN_U_INV)
    third = Fraction(1, 3)
    return {
        'h': psi_i - (psi_t + psi_u).scale(third),
        'e': (psi_t.scale(2) - psi_u).scale(third),
        'f': (psi_u.scale(2) - psi_t).scale(third),
    }


def sl2_combination(value: Sl2Element) -> HyperfanCombination:
    """把全局元素写成超扇组合"""
    basis = sl2_from_hyperfans()
    return basis['h'].scale(value.alpha) + basis['e'].scale(value.beta) + basis['f'].scale(value.gamma)


def hyperfan_f_combination() -> HyperfanCombination:
    """ψ_S + f = f·χ_{I∪II}"""
    return HyperfanCombination({GEN_S: Fraction(1)}, SL2_F)


def hyperfan_h_combination() -> HyperfanCombination:
    """ψ_I + ψ_{US} - ψ_S - ψ_{U⁻¹} - f = h·χ_{I∪II}"""
    combination = HyperfanCombination(global_part=-SL2_F)
    for label, coefficient in ((IDENTITY, 1), (GEN_U * GEN_S, 1), (GEN_S, -1), (GEN_U_INV, -1)):
        combination.add_term(label, coefficient)
    return combination


def upper_indicator(value: Sl2Element, element: GroupElement = IDENTITY) -> HyperfanCombination:
    """
    value·χ，χ 为 ψ_B 支撑的示性函数；由 B=I 的三个恒等式共轭得到
    """
    y = value.conjugate_by(element.inverse())
    combination = HyperfanCombination(global_part=SL2_F.conjugate_by(element) * (y.gamma - y.alpha))
    combination.add_term(element, y.beta + y.alpha)
    combination.add_term(GEN_S * element, y.gamma - y.alpha)
    combination.add_term(GEN_U * GEN_S * element, y.alpha)
    combination.add_term(GEN_U_INV * element, -y.alpha)
    return combination


def adjoint_matrix(element: GroupElement) -> np.ndarray:
    """
    M_A：列依次为 A⁻¹eA、A⁻¹fA、A⁻¹hA 在 (e, f, h) 下的坐标，M_{AB} = M_B·M_A
    """
    a, b, c, d = element.entries()
    return np.array([[d * d, -b * b, 2 * b * d],
                     [-c * c, a * a, -2 * a * c],
                     [c * d, -a * b, a * d + b * c]], dtype=object)


def _arc_within(inner: Tuple[ExtendedRational, ExtendedRational],
                outer: Tuple[ExtendedRational, ExtendedRational]) -> bool:
    # Farey 弧两两不交叉
    (i0, i1), (o0, o1) = inner, outer
    if i0 == o1:
        return False
    starts_inside = i0 == o0 or cyclic_between(o0, i0, o1)
    return starts_inside and (i1 == o1 or cyclic_between(i0, i1, o1))


@dataclass
class BracketStructure:
    case: str
    overlap: Sl2Element
    combination: HyperfanCombination


UPPER_ARC = (INFINITY, ZERO)
LOWER_ARC = (ZERO, INFINITY)


def bracket_structure(element: GroupElement) -> BracketStructure:
    """
    [ψ_I, ψ_A]：在支撑重叠处取 V = [e, A⁻¹eA] = -c²h - 2cd·e，按弧的包含关系分四种情形
    """
    if element.c == 0:
        return BracketStructure('c=0', ZERO_SL2, HyperfanCombination())
    overlap = SL2_E.bracket(SL2_E.conjugate_by(element))
    support = hyperfan_support(element)
    if _arc_within(support, LOWER_ARC):
        return BracketStructure('case1', overlap, HyperfanCombination())
    if _arc_within(UPPER_ARC, support):
        return BracketStructure('case2', overlap, upper_indicator(overlap))
    if _arc_within(support, UPPER_ARC):
        return BracketStructure('case3', overlap, upper_indicator(overlap, element))
    return BracketStructure('case4', overlap,
                            upper_indicator(overlap) - upper_indicator(overlap, GEN_S * element))


def case2_closed_form(element: GroupElement) -> HyperfanCombination:
    """-c(c+2d)ψ_I + c²(ψ_S + ψ_{U⁻¹} - ψ_{US} + f)"""
    c, d = element.c, element.d
    combination = HyperfanCombination(global_part=SL2_F * (c * c))
    combination.add_term(IDENTITY, -c * (c + 2 * d))
    for label, sign in ((GEN_S, 1), (GEN_U_INV, 1), (GEN_U * GEN_S, -1)):
        combination.add_term(label, sign * c * c)
    return combination


def general_bracket(left: GroupElement, right: GroupElement) -> HyperfanCombination:
    """[ψ_B, ψ_A] = B⁻¹[ψ_I, ψ_{AB⁻¹}]B"""
    return bracket_structure(right * left.inverse()).combination.conjugate(left)


def fan_partial_sum(element: GroupElement, count: int, framing: Framing = None) -> PiecewiseField:
    """Σ_{n=0}^{N} ϑ̄_{UⁿA}"""
    return sum_fields(normalized_wavelet(GEN_U ** n * element, framing) for n in range(count + 1))


def hyperfan_partial_sum(element: GroupElement, count: int, framing: Framing = None,
                         right: bool = False) -> PiecewiseField:
    """Σ_{n=0}^{N} n·ϑ̄_{UⁿA}；right=True 时为右超扇 Σ_{n=-N}^{0} n·ϑ̄_{UⁿA}"""
    step, sign = (GEN_U_INV, -1) if right else (GEN_U, 1)
    return sum_fields((normalized_wavelet(step ** n * element, framing) for n in range(1, count + 1)),
                      (sign * n for n in range(1, count + 1)))


def is_basis_label(element: GroupElement) -> bool:
    """属于 𝒪：doe 0->∞，或由低代指向高代的 Farey 边"""
    initial, terminal = edge_endpoints(element)
    if (initial, terminal) == (ZERO, INFINITY):
        return True
    return generation(initial) < generation(terminal)


def _solve_exact(rows: Sequence[Dict[int, Fraction]], rhs: Sequence[Fraction],
                 columns: int) -> Optional[List[Fraction]]:
    """
    稀疏有理数消元；不相容时返回 None，自由变量取 0
    """
    pivots: List[Tuple[int, Dict[int, Fraction], Fraction]] = []
    for row, value in zip(rows, rhs):
        row, value = dict(row), Fraction(value)
        for column, pivot_row, pivot_value in pivots:
            factor = row.get(column)
            if factor:
                for key, entry in pivot_row.items():
                    updated = row.get(key, Fraction(0)) - factor * entry
                    if updated:
                        row[key] = updated
                    else:
                        row.pop(key, None)
                value -= factor * pivot_value
        if not row:
            if value != 0:
                return None
            continue
        column = min(row)
        scale = row[column]
        pivots.append((column, {key: entry / scale for key, entry in row.items()}, value / scale))
    solution = [Fraction(0)] * columns
    for column, pivot_row, pivot_value in reversed(pivots):
        solution[column] = pivot_value - sum(entry * solution[key] for key, entry in pivot_row.items()
                                             if key != column)
    return solution


def _expansion_system(field: PiecewiseField, depth: int, with_value: bool):
    edges = farey_edges(depth)
    fans = [hyperfan(edge.label) for edge in edges]
    rows, rhs = [], []
    for x in farey_points(depth):
        target = field.jump(x)
        for component in ('alpha', 'beta', 'gamma'):
            row = {index: getattr(fan.jump(x), component) for index, fan in enumerate(fans)
                   if getattr(fan.jump(x), component) != 0}
            rows.append(row)
            rhs.append(getattr(target, component))
    if with_value:
        target = field.value_after(INFINITY)
        for component in ('alpha', 'beta', 'gamma'):
            rows.append({index: getattr(fan.value_after(INFINITY), component) for index, fan in enumerate(fans)
                         if getattr(fan.value_after(INFINITY), component) != 0})
            rhs.append(getattr(target, component))
    return edges, rows, rhs


def expand_in_basis(field: PiecewiseField, extra_depth: int = 2) -> BasisExpansion:
    """
    把 field 展开为 𝒪 中超扇的组合；若截断深度内无法吸收全局部分，
    则只解跳跃方程并把全局余项经 sl2_from_hyperfans 写出
    """
    base = max((generation(point) for point in field.breakpoints), default=0)
    base = max(base, 1)
    expansion = None
    for depth in range(base, base + extra_depth + 1):
        edges, rows, rhs = _expansion_system(field, depth, with_value=True)
        solution = _solve_exact(rows, rhs, len(edges))
        if solution is not None:
            expansion = BasisExpansion(depth=depth)
            for edge, coefficient in zip(edges, solution):
                expansion.add_term(edge.label, coefficient)
            break
    if expansion is None:
        edges, rows, rhs = _expansion_system(field, base, with_value=False)
        solution = _solve_exact(rows, rhs, len(edges))
        if solution is None:
            fail(f"jump equations are inconsistent up to generation {base}", ArithmeticError)
        expansion = BasisExpansion(depth=base, exact_in_basis=False)
        for edge, coefficient in zip(edges, solution):
            expansion.add_term(edge.label, coefficient)
        remainder = field - materialize(expansion)
        expansion.global_part = remainder.global_value
        expansion.remainder_expansion = sl2_combination(expansion.global_part)
        logger.info(f'Expansion keeps a global remainder {expansion.global_part} at depth {base}')
    if materialize(expansion) != field:
        fail("basis expansion does not reconstruct the field", ArithmeticError)
    return expansion

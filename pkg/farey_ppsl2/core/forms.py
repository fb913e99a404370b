"""
两个 2-形式：ppsl2 上的 Lie 代数 2-上闭链 γ 与 Weil–Petersson 形式 ω，以及 Kirillov–Kostant 形式
"""
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Tuple

import numpy as np

from farey_ppsl2.core.fields import bracket
from farey_ppsl2.core.harmonic import fourier_coefficients
from farey_ppsl2.core.modular import ccw, farey_edges, farey_triangles
from farey_ppsl2.core.wavelets import normalized_wavelet
from farey_ppsl2.entity.entity_field import PiecewiseField
from farey_ppsl2.entity.entity_group import GEN_S, GEN_T, GEN_U, ExtendedRational, GroupElement
from farey_ppsl2.entity.entity_series import KKResult
from farey_ppsl2.util.logger import fail

EdgeKey = FrozenSet[ExtendedRational]
EdgeTangent = Dict[EdgeKey, Fraction]

# γ 与 ω 的比值按 2γ/ω 报告
COCYCLE_SCALE = 2


def la_cocycle(first: PiecewiseField, second: PiecewiseField) -> Fraction:
    """γ(f, g) = ½ Σ_{θ∈Π(g)} tr[(f⁺ + f⁻)(g⁺ - g⁻)]"""
    total = Fraction(0)
    for point in second.breakpoints:
        mean = first.value_after(point) + first.value_before(point)
        total += mean.trace_form(second.jump(point))
    return total / 2


def cocycle_defect(f: PiecewiseField, g: PiecewiseField, h: PiecewiseField) -> Fraction:
    return la_cocycle(bracket(f, g), h) + la_cocycle(bracket(g, h), f) + la_cocycle(bracket(h, f), g)


def jump_volume(f: PiecewiseField, g: PiecewiseField, h: PiecewiseField) -> Fraction:
    """½ Σ_θ tr([Δf, Δg]Δh)，连续场为零"""
    points = set(f.breakpoints) | set(g.breakpoints) | set(h.breakpoints)
    total = Fraction(0)
    for point in points:
        total += f.jump(point).bracket(g.jump(point)).trace_form(h.jump(point))
    return total / 2


def unit_tangent(key: EdgeKey) -> EdgeTangent:
    return {key: Fraction(1)}


def _clockwise_edges(triangle: Tuple[ExtendedRational, ...]) -> Tuple[EdgeKey, EdgeKey, EdgeKey]:
    x, y, z = triangle
    v0, v1, v2 = (x, z, y) if ccw(x, y, z) else (x, y, z)
    return frozenset((v0, v1)), frozenset((v1, v2)), frozenset((v2, v0))


def wp_form(first: EdgeTangent, second: EdgeTangent, max_gen: int) -> Fraction:
    """
    ω = -2 Σ_三角形 (da∧db + db∧dc + dc∧da)，a, b, c 为顺时针顺序的边
    """
    known = {edge.key for edge in farey_edges(max_gen)}
    for tangent in (first, second):
        for key in tangent:
            if key not in known:
                fail(f"tangent edge {sorted(map(str, key))} lies beyond generation {max_gen}")
    total = Fraction(0)
    for triangle in farey_triangles(max_gen):
        edges = _clockwise_edges(triangle)
        for index in range(3):
            left, right = edges[index], edges[(index + 1) % 3]
            total += (first.get(left, 0) * second.get(right, 0)
                      - first.get(right, 0) * second.get(left, 0))
    return -2 * total


def adjacent_pairs(max_gen: int) -> List[Tuple[GroupElement, GroupElement, EdgeKey, EdgeKey]]:
    """共享一个三角形的边对，标签取 𝒪 中的定向"""
    labels = {edge.key: edge.label for edge in farey_edges(max_gen)}
    pairs = []
    for triangle in farey_triangles(max_gen):
        edges = _clockwise_edges(triangle)
        for index in range(3):
            left, right = edges[index], edges[(index + 1) % 3]
            pairs.append((labels[left], labels[right], left, right))
    return pairs


def non_adjacent_pairs(max_gen: int, limit: int = 40) -> List[Tuple[GroupElement, GroupElement, EdgeKey, EdgeKey]]:
    edges = farey_edges(max_gen)
    sharing = set()
    for triangle in farey_triangles(max_gen):
        for left, right in combinations(_clockwise_edges(triangle), 2):
            sharing.add(frozenset((left, right)))
    pairs = []
    for first, second in combinations(edges, 2):
        if frozenset((first.key, second.key)) not in sharing:
            pairs.append((first.label, second.label, first.key, second.key))
            if len(pairs) >= limit:
                break
    return pairs


def _tail_constant(modes: np.ndarray, coefficients: np.ndarray) -> float:
    # max |m|³|c_m| over the upper half of the computed range
    upper = np.abs(modes) >= max(2, int(np.max(np.abs(modes))) // 2)
    return float(np.max(np.abs(coefficients[upper]) * np.abs(modes[upper]) ** 3)) if upper.any() else 0.0


def kk_form_from_coefficients(first: Callable[[np.ndarray], np.ndarray], second: Callable[[np.ndarray], np.ndarray],
                              a: complex, truncation: int) -> KKResult:
    """
    κ_a(f, g) = Σ_{2≤|m|≤M} a(m³-m)c_m(f)c_{-m}(g)，尾项按 |c_m| ≲ C/|m|³ 估计
    """
    if truncation < 2:
        fail("Kirillov–Kostant truncation must be at least 2")
    positive = np.arange(2, truncation + 1)
    modes = np.concatenate([-positive[::-1], positive])
    cf, cg = first(modes), second(-modes)
    weights = a * (modes.astype(np.float64) ** 3 - modes)
    # 固定求和顺序，保证输出逐位稳定
    value = complex(np.sum(weights * cf * cg))
    tail = abs(a) * _tail_constant(modes, cf) * _tail_constant(-modes, cg) / truncation ** 2
    return KKResult(value, tail, truncation)


def kk_form(first: PiecewiseField, second: PiecewiseField, a: complex = 2j * np.pi,
            truncation: int = 2000) -> KKResult:
    return kk_form_from_coefficients(lambda modes: fourier_coefficients(first, modes),
                                     lambda modes: fourier_coefficients(second, modes), a, truncation)


def witt_generator(n: int) -> Callable[[np.ndarray], np.ndarray]:
    """L_n = e^{inθ}∂θ 的系数函数"""
    return lambda modes: (np.asarray(modes) == n).astype(np.complex128)


def sum_tangents(tangents: Iterable[EdgeTangent]) -> EdgeTangent:
    total: EdgeTangent = {}
    for tangent in tangents:
        for key, value in tangent.items():
            total[key] = total.get(key, Fraction(0)) + value
    return {key: value for key, value in total.items() if value != 0}


def _pair_entry(left: GroupElement, right: GroupElement, left_key: EdgeKey, right_key: EdgeKey,
                max_gen: int) -> dict:
    gamma = la_cocycle(normalized_wavelet(left), normalized_wavelet(right))
    omega = wp_form(unit_tangent(left_key), unit_tangent(right_key), max_gen)
    return {
        'left': left,
        'right': right,
        'gamma': gamma,
        'omega': omega,
        'ratio': COCYCLE_SCALE * gamma / omega if omega else None,
    }


def ratio_report(max_gen: int, non_adjacent_limit: int = 40) -> dict:
    """
    相邻边对上的 2γ/ω 与不相邻边对上的 (γ, ω)；比值必须为同一常数
    """
    adjacent = [_pair_entry(*pair, max_gen) for pair in adjacent_pairs(max_gen)]
    separated = [_pair_entry(*pair, max_gen) for pair in non_adjacent_pairs(max_gen, non_adjacent_limit)]
    ratios = {entry['ratio'] for entry in adjacent}
    constant = len(ratios) == 1
    # TSU = S 把 (ϑ̄_A, ϑ̄_TA) 族化为 (ϑ̄_UA, ϑ̄_A) 族
    relation = GEN_T * GEN_S * GEN_U == GEN_S
    return {
        'adjacent': adjacent,
        'non_adjacent': separated,
        'ratio': next(iter(ratios)) if constant else None,
        'constant': constant,
        'vanishing': all(entry['gamma'] == 0 and entry['omega'] == 0 for entry in separated),
        'tsu_relation': relation,
    }

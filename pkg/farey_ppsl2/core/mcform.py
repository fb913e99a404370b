"""
Farey 剖分上 ppsl2 值 1-形式的截断，以及它在对角线翻转下的不变性验证
"""
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from farey_ppsl2.core.fields import normalize, sum_fields
from farey_ppsl2.core.modular import act_right, edge_label, farey_edges
from farey_ppsl2.core.wavelets import GEN_T_INV, GEN_U_INV, quad_wavelet, wavelet
from farey_ppsl2.entity.entity_field import OneFormTruncation, PiecewiseField, Sl2Element
from farey_ppsl2.entity.entity_geometry import Framing
from farey_ppsl2.entity.entity_group import ExtendedRational, GroupElement, GEN_S, GEN_T, GEN_U, \
    IDENTITY, INFINITY, MINUS_ONE, ONE, ZERO
from farey_ppsl2.util.logger import fail, logger

# 八段子弧 I±..IV± 的起点
SUB_ARCS: Tuple[Tuple[str, ExtendedRational], ...] = (
    ('I-', INFINITY),
    ('I+', ExtendedRational(-2, 1)),
    ('II-', MINUS_ONE),
    ('II+', ExtendedRational(-1, 2)),
    ('III-', ZERO),
    ('III+', ExtendedRational(1, 2)),
    ('IV-', ONE),
    ('IV+', ExtendedRational(2, 1)),
)

# 剖分 τ 中 doe 周围的四边形
TAU_EDGES: Dict[str, Tuple[ExtendedRational, ExtendedRational]] = {
    'a': (INFINITY, MINUS_ONE),
    'b': (MINUS_ONE, ZERO),
    'c': (ZERO, ONE),
    'd': (ONE, INFINITY),
    'e': (ZERO, INFINITY),
}

# 翻转后的剖分 τ′：每条边及其两个对顶点
FLIPPED_QUADS: Dict[str, Tuple[ExtendedRational, ...]] = {
    'f': (ONE, MINUS_ONE, INFINITY, ZERO),
    'a': (INFINITY, MINUS_ONE, ONE, ExtendedRational(-2, 1)),
    'b': (MINUS_ONE, ZERO, ONE, ExtendedRational(-1, 2)),
    'c': (ZERO, ONE, MINUS_ONE, ExtendedRational(1, 2)),
    'd': (ONE, INFINITY, MINUS_ONE, ExtendedRational(2, 1)),
}

# doe 落在各象限边上时的标架 F_A = (0.A, ∞.A, 1.A)
DOE_CASES: Dict[str, GroupElement] = {
    'doe': IDENTITY,
    'I': GEN_S * GEN_T,
    'II': GEN_S * GEN_U,
    'III': GEN_U_INV,
    'IV': GEN_T_INV,
}


def doe_framing(case: str) -> Framing:
    if case not in DOE_CASES:
        fail(f"unknown doe position '{case}', expected one of {', '.join(DOE_CASES)}")
    element = DOE_CASES[case]
    return Framing(*(act_right(point, element) for point in Framing.standard().points()))


def _table_field(field: PiecewiseField, framing: Framing) -> PiecewiseField:
    # 存储的是 -ϑ̄，与打印的表同号
    return -normalize(field, framing)[0]


def one_form(framing: Framing = None, max_gen: int = 1) -> OneFormTruncation:
    framing = framing or Framing.standard()
    if max_gen < 0:
        fail(f"generation bound must be non-negative, got {max_gen}")
    form = OneFormTruncation(framing, max_gen)
    for edge in farey_edges(max_gen):
        form.fields[edge.key] = _table_field(wavelet(edge.label), framing)
    logger.debug(f'One-form truncation at generation {max_gen} holds {len(form.fields)} edge(s)')
    return form


def apply(form: OneFormTruncation, tangent: Mapping[frozenset, Fraction]) -> PiecewiseField:
    """Σ_e t(e)·ϑ̄_e，每条无向边只计一次"""
    keys = [key for key, weight in tangent.items() if weight != 0]
    if not keys:
        return PiecewiseField.zero()
    return sum_fields([form.field_of(key) for key in keys], [tangent[key] for key in keys])


def tau_fields(framing: Framing = None) -> Dict[str, PiecewiseField]:
    form = one_form(framing, 1)
    return {name: form.field_of(frozenset(points)) for name, points in TAU_EDGES.items()}


def flipped_tessellation_fields(framing: Framing = None) -> Dict[str, PiecewiseField]:
    """τ′ 中 f, a, b, c, d 的（取负）规范化小波"""
    framing = framing or Framing.standard()
    return {name: _table_field(quad_wavelet(*corners), framing) for name, corners in FLIPPED_QUADS.items()}


def flipped_wavelets(framing: Framing = None) -> Dict[str, PiecewiseField]:
    fields = flipped_tessellation_fields(framing)
    return {name: fields[name] for name in ('a', 'b', 'c', 'd', 'f')}


# 打印表在标准标架下的规范化修正 X，ϑ̄ = ϑ - X
TAU_CORRECTIONS: Dict[str, Sl2Element] = {
    'a': Sl2Element(-1, 0, 0),
    'b': Sl2Element(1, 0, 0),
    'c': Sl2Element(),
    'd': Sl2Element(),
    'e': Sl2Element(),
}

FLIPPED_CORRECTIONS: Dict[str, Sl2Element] = {
    'a': Sl2Element(Fraction(-1, 2), 1, 0),
    'b': Sl2Element(Fraction(1, 2), 0, 1),
    'c': Sl2Element(Fraction(-1, 2), 0, -1),
    'd': Sl2Element(Fraction(1, 2), -1, 0),
    'f': Sl2Element(),
}


def normalization_corrections() -> Dict[str, Dict[str, Sl2Element]]:
    """τ 与 τ′ 中各边（打印符号）小波的规范化修正"""
    tau = {name: normalize(-wavelet(edge_label(*points)))[1] for name, points in TAU_EDGES.items()}
    flipped = {name: normalize(-quad_wavelet(*corners))[1] for name, corners in FLIPPED_QUADS.items()}
    return {'tau': tau, 'flipped': flipped}


def arc_sums(fields: Mapping[str, PiecewiseField]) -> Dict[str, Sl2Element]:
    """Σ_x ϑ̄_x 在每段子弧上的值"""
    return arc_table(sum_fields(fields.values()))


def arc_table(field: PiecewiseField) -> Dict[str, Sl2Element]:
    """场在八段子弧上的值；断点必须落在子弧端点上"""
    bounds = {point for _, point in SUB_ARCS}
    stray = [str(point) for point in field.breakpoints if point not in bounds]
    if stray:
        fail(f"field breaks inside a sub-arc at {', '.join(stray)}")
    return {name: field.value_after(start) for name, start in SUB_ARCS}


def ptolemy_weights(lambdas: Optional[Mapping[str, Fraction]] = None) -> Dict[str, Fraction]:
    """
    ef = ac + bd 给出 d log f = (ac(ã+c̃) + bd(b̃+d̃))/(ac+bd) - ẽ
    """
    lambdas = {name: Fraction(1) for name in 'abcde'} | {k: Fraction(v) for k, v in (lambdas or {}).items()}
    if any(value <= 0 for value in lambdas.values()):
        fail("lambda lengths must be positive")
    ac, bd = lambdas['a'] * lambdas['c'], lambdas['b'] * lambdas['d']
    return {'a': ac / (ac + bd), 'c': ac / (ac + bd), 'b': bd / (ac + bd), 'd': bd / (ac + bd), 'e': Fraction(-1)}


def _symbolic(fields: Mapping[str, PiecewiseField], arc: str) -> Dict[str, Sl2Element]:
    return {name: arc_table(field)[arc] for name, field in fields.items()}


def verify_flip_invariance(case: str = 'doe', lambdas: Optional[Mapping[str, Fraction]] = None) -> dict:
    """
    比较 Σ_τ ϑ̄_x x̃ 与代入 f̃ 后的 Σ_τ′ ϑ̄′_x x̃′，逐子弧逐符号精确相等
    """
    framing = doe_framing(case)
    weights = ptolemy_weights(lambdas)
    certified = all(Fraction(value) == 1 for value in (lambdas or {}).values())
    before, after = tau_fields(framing), flipped_tessellation_fields(framing)
    arcs, mismatches = [], []
    for arc, _ in SUB_ARCS:
        left = _symbolic(before, arc)
        primed = _symbolic(after, arc)
        right = {name: primed[name] + primed['f'] * weights[name] for name in 'abcd'}
        right['e'] = primed['f'] * weights['e']
        difference = {name: left[name] - right[name] for name in 'abcde'}
        arcs.append({'arc': arc, 'tau': left, 'flipped': right, 'difference': difference})
        if any(not value.is_zero() for value in difference.values()):
            mismatches.append(arc)
    if mismatches and certified:
        detail = '; '.join(f"{entry['arc']}: {', '.join(f'{k}={v}' for k, v in entry['difference'].items())}"
                           for entry in arcs if entry['arc'] in mismatches)
        fail(f"flip invariance fails for case {case} on {detail}", ArithmeticError)
    return {
        'case': case,
        'framing': framing,
        'certified': certified,
        'arcs': arcs,
        'vanishes': not mismatches,
    }


def farey_neighbours(u: ExtendedRational, v: ExtendedRational) -> Tuple[ExtendedRational, ExtendedRational]:
    """Farey 边 {u, v} 两侧三角形的第三个顶点"""
    p, q, r, s = u.p, u.q, v.p, v.q
    if abs(p * s - q * r) != 1:
        fail(f"{u} and {v} are not Farey neighbours")
    return ExtendedRational.of(p + r, q + s), ExtendedRational.of(p - r, q - s)


def far_edge_check(max_gen: int = 3, framing: Framing = None) -> Dict[str, bool]:
    """
    四边形之外的边在 τ 与 τ′ 中有同一个四边形，因而两侧的贡献逐项抵消
    """
    framing = framing or Framing.standard()
    # τ′ 只改动了四边形的五条边
    changed = {frozenset(points) for points in TAU_EDGES.values()}
    results = {}
    for edge in farey_edges(max_gen):
        if edge.key in changed:
            continue
        w, z = farey_neighbours(edge.initial, edge.terminal)
        rebuilt = _table_field(quad_wavelet(edge.initial, edge.terminal, w, z), framing)
        results[str(edge)] = rebuilt == _table_field(wavelet(edge.label), framing)
    return results

from fractions import Fraction

import pytest

from farey_ppsl2.core import fields, mcform, modular, wavelets
from farey_ppsl2.entity import ExtendedRational, Sl2Element
from farey_ppsl2.entity.entity_field import SL2_H, ZERO_SL2
from farey_ppsl2.entity.entity_group import IDENTITY, INFINITY, MINUS_ONE, ONE, ZERO

ARCS = [name for name, _ in mcform.SUB_ARCS]
HALF = Fraction(1, 2)


def table(*groups):
    """('I', v) 覆盖 I- 与 I+，('I-', v) 只覆盖 I-"""
    result = {}
    for names, value in groups:
        for name in names.split():
            arcs = [name] if name[-1] in '+-' else [f'{name}-', f'{name}+']
            result.update({arc: Sl2Element(*value) for arc in arcs})
    assert set(result) == set(ARCS)
    return result


PRINTED_TAU = {
    'a': table(('I-', (-1, -4, 0)), ('I+', (3, 4, -2)), ('II', (-1, 0, 2)), ('III IV', (-1, 0, 0))),
    'b': table(('I', (1, 2, 0)), ('II-', (-3, -2, 4)), ('II+', (1, 0, -4)), ('III IV', (1, 0, 0))),
    'c': table(('I II', (1, 0, 0)), ('III-', (1, 0, 4)), ('III+', (-3, 2, -4)), ('IV', (1, -2, 0))),
    'd': table(('I II', (-1, 0, 0)), ('III', (-1, 0, -2)), ('IV-', (3, -4, 2)), ('IV+', (-1, 4, 0))),
    'e': table(('I', (-1, -2, 0)), ('II', (1, 0, -2)), ('III', (1, 0, 2)), ('IV', (-1, 2, 0))),
}

PRINTED_FLIPPED = {
    'a': table(('I-', (-1, -4, 0)), ('I+', (3, 4, -2)), ('II III', (0, 1, 1)), ('IV', (-1, 2, 0))),
    'b': table(('I IV', (0, 1, 1)), ('II-', (-3, -2, 4)), ('II+', (1, 0, -4)), ('III', (1, 0, 2))),
    'c': table(('I IV', (0, -1, -1)), ('II', (1, 0, -2)), ('III-', (1, 0, 4)), ('III+', (-3, 2, -4))),
    'd': table(('I', (-1, -2, 0)), ('II III', (0, -1, -1)), ('IV-', (3, -4, 2)), ('IV+', (-1, 4, 0))),
}

# 打印表（取负的小波）的规范化修正
CORRECTIONS = {'a': -SL2_H, 'b': SL2_H, 'c': ZERO_SL2, 'd': ZERO_SL2, 'e': ZERO_SL2}

# 打印的修正：ϑ̄′_a = ϑ′_a + (½ −1; 0 −½) 等，X 取其相反数
PRINTED_FLIPPED_CORRECTIONS = {
    'a': Sl2Element(-HALF, 1, 0),
    'b': Sl2Element(HALF, 0, 1),
    'c': Sl2Element(-HALF, 0, -1),
    'd': Sl2Element(HALF, -1, 0),
}


def sums(rows):
    """{arc: {name: (α, β, γ)}}，缺项记为零"""
    assert set(rows) == set(ARCS)
    return {arc: {name: Sl2Element(*value) for name, value in terms.items()} for arc, terms in rows.items()}


# 规范化后 Σ ϑ̄_x x̃ 在各子弧上的系数
TAU_SUMS = sums({
    'I-': {'a': (0, -4, 0), 'b': (0, 2, 0), 'c': (1, 0, 0), 'd': (-1, 0, 0), 'e': (-1, -2, 0)},
    'I+': {'a': (4, 4, -2), 'b': (0, 2, 0), 'c': (1, 0, 0), 'd': (-1, 0, 0), 'e': (-1, -2, 0)},
    'II-': {'a': (0, 0, 2), 'b': (-4, -2, 4), 'c': (1, 0, 0), 'd': (-1, 0, 0), 'e': (1, 0, -2)},
    'II+': {'a': (0, 0, 2), 'b': (0, 0, -4), 'c': (1, 0, 0), 'd': (-1, 0, 0), 'e': (1, 0, -2)},
    'III-': {'c': (1, 0, 4), 'd': (-1, 0, -2), 'e': (1, 0, 2)},
    'III+': {'c': (-3, 2, -4), 'd': (-1, 0, -2), 'e': (1, 0, 2)},
    'IV-': {'c': (1, -2, 0), 'd': (3, -4, 2), 'e': (-1, 2, 0)},
    'IV+': {'c': (1, -2, 0), 'd': (-1, 4, 0), 'e': (-1, 2, 0)},
})

# 翻转后 Σ ϑ̄′_x x̃ 的系数
FLIPPED_SUMS = sums({
    'I-': {'a': (-HALF, -5, 0), 'b': (-HALF, 1, 0), 'c': (HALF, -1, 0), 'd': (-3 * HALF, -1, 0), 'f': (1, 2, 0)},
    'I+': {'a': (7 * HALF, 3, -2), 'b': (-HALF, 1, 0), 'c': (HALF, -1, 0), 'd': (-3 * HALF, -1, 0), 'f': (1, 2, 0)},
    'II-': {'a': (HALF, 0, 1), 'b': (-7 * HALF, -2, 3), 'c': (3 * HALF, 0, -1), 'd': (-HALF, 0, -1),
            'f': (-1, 0, 2)},
    'II+': {'a': (HALF, 0, 1), 'b': (HALF, 0, -5), 'c': (3 * HALF, 0, -1), 'd': (-HALF, 0, -1), 'f': (-1, 0, 2)},
    'III-': {'a': (HALF, 0, 1), 'b': (HALF, 0, 1), 'c': (3 * HALF, 0, 5), 'd': (-HALF, 0, -1), 'f': (-1, 0, -2)},
    'III+': {'a': (HALF, 0, 1), 'b': (HALF, 0, 1), 'c': (-5 * HALF, 2, -3), 'd': (-HALF, 0, -1),
             'f': (-1, 0, -2)},
    'IV-': {'a': (-HALF, 1, 0), 'b': (-HALF, 1, 0), 'c': (HALF, -1, 0), 'd': (5 * HALF, -3, 2), 'f': (1, -2, 0)},
    'IV+': {'a': (-HALF, 1, 0), 'b': (-HALF, 1, 0), 'c': (HALF, -1, 0), 'd': (-3 * HALF, 5, 0), 'f': (1, -2, 0)},
})


@pytest.mark.parametrize('name', sorted(PRINTED_TAU))
def test_printed_wavelet_tables(name):
    printed = -wavelets.wavelet(modular.edge_label(*mcform.TAU_EDGES[name]))
    assert mcform.arc_table(printed) == PRINTED_TAU[name]
    assert fields.normalize(printed)[1] == CORRECTIONS[name]


@pytest.mark.parametrize('name', sorted(PRINTED_FLIPPED))
def test_printed_flipped_tables(name):
    field = wavelets.quad_wavelet(*mcform.FLIPPED_QUADS[name])
    assert mcform.arc_table(-field) == PRINTED_FLIPPED[name]


@pytest.mark.parametrize('name', sorted(PRINTED_FLIPPED_CORRECTIONS))
def test_printed_flipped_corrections(name):
    field = wavelets.quad_wavelet(*mcform.FLIPPED_QUADS[name])
    assert fields.normalize(-field)[1] == PRINTED_FLIPPED_CORRECTIONS[name]


def test_normalization_corrections_match_tables():
    found = mcform.normalization_corrections()
    assert found['tau'] == CORRECTIONS == mcform.TAU_CORRECTIONS
    assert found['flipped'] == PRINTED_FLIPPED_CORRECTIONS | {'f': ZERO_SL2} == mcform.FLIPPED_CORRECTIONS


@pytest.mark.parametrize('fields_of, expected', [
    (mcform.tau_fields, TAU_SUMS),
    (mcform.flipped_tessellation_fields, FLIPPED_SUMS),
], ids=['tau', 'flipped'])
def test_normalized_arc_coefficients(fields_of, expected):
    for name, field in fields_of().items():
        found = mcform.arc_table(field)
        assert found == {arc: expected[arc].get(name, ZERO_SL2) for arc in ARCS}, name


def test_arc_sums_agree_at_unit_lengths():
    form = mcform.one_form(max_gen=1)
    ones = {frozenset(points): Fraction(1) for points in mcform.TAU_EDGES.values()}
    by_form = mcform.arc_table(mcform.apply(form, ones))
    expected = {arc: sum(terms.values(), ZERO_SL2) for arc, terms in TAU_SUMS.items()}
    assert by_form == mcform.arc_sums(mcform.tau_fields()) == expected
    flipped = {arc: sum(terms.values(), ZERO_SL2) for arc, terms in FLIPPED_SUMS.items()}
    assert mcform.arc_sums(mcform.flipped_tessellation_fields()) == flipped == expected


def test_new_edge_is_negated_doe():
    flipped = mcform.flipped_wavelets()
    tau = mcform.tau_fields()
    assert flipped['f'] == -tau['e']


@pytest.mark.parametrize('case', sorted(mcform.DOE_CASES))
def test_flip_invariance(case):
    proof = mcform.verify_flip_invariance(case)
    assert proof['vanishes']
    assert proof['certified']
    assert [entry['arc'] for entry in proof['arcs']] == ARCS


def test_flip_invariance_with_uncertified_lambdas():
    proof = mcform.verify_flip_invariance('doe', {'a': Fraction(2)})
    assert not proof['certified']


def test_unknown_doe_case():
    with pytest.raises(ValueError):
        mcform.doe_framing('V')


def test_doe_framings():
    assert mcform.doe_framing('doe').points() == (ZERO, INFINITY, ONE)
    for case in ('I', 'II', 'III', 'IV'):
        framing = mcform.doe_framing(case)
        assert len(set(framing.points())) == 3


def test_ptolemy_weights():
    assert mcform.ptolemy_weights() == {'a': Fraction(1, 2), 'b': Fraction(1, 2), 'c': Fraction(1, 2),
                                        'd': Fraction(1, 2), 'e': -1}
    weights = mcform.ptolemy_weights({'a': 2, 'c': 3})
    assert weights['a'] == weights['c'] == Fraction(6, 7)
    assert weights['b'] == weights['d'] == Fraction(1, 7)
    with pytest.raises(ValueError):
        mcform.ptolemy_weights({'a': 0})


def test_arc_table_rejects_inner_breakpoints():
    field = wavelets.wavelet(modular.edge_label(ZERO, ExtendedRational(1, 3)))
    with pytest.raises(ValueError):
        mcform.arc_table(field)


def test_one_form():
    form = mcform.one_form(max_gen=2)
    assert len(form.fields) == 1 + 2 * (2 ** 3 - 2)
    doe = frozenset((ZERO, INFINITY))
    assert form.field_of(doe) == -fields.normalize(wavelets.wavelet(IDENTITY))[0]
    tangent = {doe: Fraction(2), frozenset((ZERO, MINUS_ONE)): Fraction(-1)}
    expected = form.field_of(doe) * 2 - form.field_of(frozenset((ZERO, MINUS_ONE)))
    assert mcform.apply(form, tangent) == expected
    assert mcform.apply(form, {doe: Fraction(0)}).is_global
    with pytest.raises(ValueError):
        form.field_of(frozenset((ZERO, ExtendedRational(1, 5))))
    with pytest.raises(ValueError):
        mcform.one_form(max_gen=-1)


def test_far_edges_cancel():
    results = mcform.far_edge_check(3)
    assert results
    assert all(results.values())


def test_farey_neighbours():
    assert set(mcform.farey_neighbours(ZERO, INFINITY)) == {ONE, MINUS_ONE}
    with pytest.raises(ValueError):
        mcform.farey_neighbours(ZERO, ExtendedRational(2, 1))

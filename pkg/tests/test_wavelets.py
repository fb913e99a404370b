from fractions import Fraction

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from farey_ppsl2.core import fields, mcform, modular, wavelets
from farey_ppsl2.entity import ExtendedRational, GroupWord, PiecewiseField, Sl2Element
from farey_ppsl2.entity.entity_field import SL2_E, SL2_F, SL2_H, ZERO_SL2
from farey_ppsl2.entity.entity_group import GEN_S, GEN_T, GEN_U, IDENTITY, INFINITY, MINUS_ONE, ONE, ZERO

words = st.lists(st.sampled_from(modular.RANDOM_ALPHABET), max_size=8).map(lambda letters: GroupWord(tuple(letters)))
elements = words.map(modular.word_to_matrix)

SAMPLE_POINTS = [ExtendedRational(-2, 1), ExtendedRational(-1, 2), ExtendedRational(1, 2), ExtendedRational(2, 1)]


def upper(value):
    """value 在 I∪II 上，III∪IV 上为零"""
    return PiecewiseField.from_pieces(((INFINITY, value), (ZERO, ZERO_SL2)))


def check_matches_limit(partial, limit):
    for x in SAMPLE_POINTS:
        assert partial.value_after(x) == limit.value_after(x)


def test_mother_wavelet():
    mother = wavelets.mother_wavelet()
    assert wavelets.wavelet(IDENTITY) == mother
    assert mother.breakpoints == (INFINITY, MINUS_ONE, ZERO, ONE)
    assert mother.values == (SL2_H + SL2_E * 2, -SL2_H + SL2_F * 2, -SL2_H - SL2_F * 2, SL2_H - SL2_E * 2)
    assert wavelets.quad_wavelet(ZERO, INFINITY, MINUS_ONE, ONE) == mother


@pytest.mark.parametrize('max_gen', [1, 2])
def test_quad_wavelet_reproduces_wavelets(max_gen):
    for edge in modular.farey_edges(max_gen):
        w, z = mcform.farey_neighbours(edge.initial, edge.terminal)
        assert wavelets.quad_wavelet(edge.initial, edge.terminal, w, z) == wavelets.wavelet(edge.label)


def test_quad_wavelet_rejects_bad_corners():
    with pytest.raises(ValueError):
        wavelets.quad_wavelet(ZERO, INFINITY, ONE, ONE)
    with pytest.raises(ValueError):
        wavelets.quad_wavelet(ZERO, INFINITY, ONE, ExtendedRational(2, 1))


def test_earthquake_value_fixes_endpoints():
    for u, v in ((ZERO, INFINITY), (MINUS_ONE, ExtendedRational(-1, 2)), (ExtendedRational(2, 3), ONE)):
        value = wavelets.earthquake_value(u, v)
        assert value.scalar_at(u) == 0
        assert value.scalar_at(v) == 0
        assert value.trace_form(value) == 2


def test_hyperfans():
    assert wavelets.hyperfan(IDENTITY) == upper(SL2_E)
    assert wavelets.hyperfan(GEN_S) == PiecewiseField.from_pieces(((INFINITY, ZERO_SL2), (ZERO, -SL2_F)))
    assert wavelets.hyperfan(GEN_T) == PiecewiseField.from_pieces(((INFINITY, SL2_E), (MINUS_ONE, ZERO_SL2)))
    assert wavelets.hyperfan_value(GEN_U) == Sl2Element(1, 1, -1)


@pytest.mark.parametrize('max_gen', [0, 1, 2, 3])
def test_usa_closed_form(max_gen):
    for edge in modular.farey_edges(max_gen):
        assert wavelets.usa_deficiency(edge.label) == wavelets.usa_closed_form(edge.label)


def test_usa_specializations():
    assert wavelets.usa_deficiency(IDENTITY) == SL2_H + SL2_E + SL2_F
    assert wavelets.usa_deficiency(GEN_T) == SL2_E * 2 + SL2_F
    assert wavelets.usa_deficiency(GEN_U.inverse()) == SL2_E + SL2_F * 2


def test_sl2_from_hyperfans():
    basis = wavelets.sl2_from_hyperfans()
    for name, value in (('h', SL2_H), ('e', SL2_E), ('f', SL2_F)):
        assert wavelets.materialize(basis[name]) == PiecewiseField.constant(value)
    value = Sl2Element(2, Fraction(-1, 3), 5)
    assert wavelets.materialize(wavelets.sl2_combination(value)) == PiecewiseField.constant(value)


def test_upper_indicators():
    assert wavelets.materialize(wavelets.hyperfan_f_combination()) == upper(SL2_F)
    assert wavelets.materialize(wavelets.hyperfan_h_combination()) == upper(SL2_H)
    value = Sl2Element(1, -2, 3)
    assert wavelets.materialize(wavelets.upper_indicator(value)) == upper(value)
    for element in (GEN_T, GEN_U, GEN_S * GEN_U):
        start, end = wavelets.hyperfan_support(element)
        expected = PiecewiseField.from_pieces(((start, value), (end, ZERO_SL2)))
        assert wavelets.materialize(wavelets.upper_indicator(value, element)) == expected


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_bracket_structure(data):
    element = data.draw(elements)
    result = wavelets.bracket_structure(element)
    oracle = fields.bracket(wavelets.hyperfan(IDENTITY), wavelets.hyperfan(element))
    assert wavelets.materialize(result.combination) == oracle
    if result.case == 'case2':
        assert wavelets.materialize(wavelets.case2_closed_form(element)) == oracle


def test_bracket_cases():
    assert wavelets.bracket_structure(GEN_T ** 3).case == 'c=0'
    assert wavelets.bracket_structure(GEN_U.inverse()).case == 'case2'
    assert wavelets.materialize(wavelets.case2_closed_form(GEN_U.inverse())) == \
        fields.bracket(wavelets.hyperfan(IDENTITY), wavelets.hyperfan(GEN_U.inverse()))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_general_bracket(data):
    left, right = data.draw(elements), data.draw(elements)
    oracle = fields.bracket(wavelets.hyperfan(left), wavelets.hyperfan(right))
    assert wavelets.materialize(wavelets.general_bracket(left, right)) == oracle


@settings(max_examples=40)
@given(st.data())
def test_adjoint_matrix(data):
    first, second = data.draw(elements), data.draw(elements)
    assert np.array_equal(wavelets.adjoint_matrix(first * second),
                          wavelets.adjoint_matrix(second).dot(wavelets.adjoint_matrix(first)))
    conjugated = SL2_E.conjugate_by(first)
    assert list(wavelets.adjoint_matrix(first)[:, 0]) == [conjugated.beta, conjugated.gamma, conjugated.alpha]


def test_fan_partial_sum_telescopes():
    limit = PiecewiseField.from_pieces(((INFINITY, SL2_E * -2), (MINUS_ONE, SL2_H * 2 - SL2_F * 2),
                                        (ZERO, ZERO_SL2)))
    partial = wavelets.fan_partial_sum(GEN_U, 20)
    check_matches_limit(partial, limit)
    assert all(point == INFINITY or MINUS_ONE.key <= point.key <= ZERO.key for point in partial.breakpoints)


def test_hyperfan_partial_sums_telescope():
    check_matches_limit(wavelets.hyperfan_partial_sum(IDENTITY, 20), upper(SL2_E * -2))
    right = PiecewiseField.from_pieces(((INFINITY, SL2_H), (ZERO, SL2_H - SL2_E * 2)))
    check_matches_limit(wavelets.hyperfan_partial_sum(IDENTITY, 20, right=True), right)


def test_basis_labels():
    assert wavelets.is_basis_label(IDENTITY)
    assert not wavelets.is_basis_label(GEN_S)
    assert wavelets.is_basis_label(modular.edge_label(ZERO, ONE))
    assert not wavelets.is_basis_label(modular.edge_label(ONE, ZERO))


@pytest.mark.parametrize('text', ['I', 'U', 'T S', 'U U^-1 T', 'S T^-1 U'])
def test_expand_wavelet_in_basis(text):
    field = wavelets.wavelet(modular.word_to_matrix(text))
    expansion = wavelets.expand_in_basis(field)
    assert wavelets.materialize(expansion) == field
    assert all(wavelets.is_basis_label(label) for label in expansion.terms)


def test_expand_global_field():
    field = PiecewiseField.constant(SL2_H)
    expansion = wavelets.expand_in_basis(field)
    assert wavelets.materialize(expansion) == field

import math
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from farey_ppsl2.core import fields, modular, wavelets
from farey_ppsl2.entity import ExtendedRational, Framing, GroupWord, PiecewiseField, Sl2Element
from farey_ppsl2.entity.entity_field import SL2_E, SL2_F, SL2_H, ZERO_SL2
from farey_ppsl2.entity.entity_group import IDENTITY, INFINITY, MINUS_ONE, ONE, ZERO

words = st.lists(st.sampled_from(modular.RANDOM_ALPHABET), max_size=5).map(lambda letters: GroupWord(tuple(letters)))


def check_vanishes_on(field, framing):
    for point in framing.points():
        assert fields.evaluate(field, point) == 0


def test_sl2_algebra():
    assert SL2_H.bracket(SL2_E) == SL2_E * 2
    assert SL2_H.bracket(SL2_F) == SL2_F * -2
    assert SL2_E.bracket(SL2_F) == SL2_H
    assert SL2_H.trace_form(SL2_H) == 2
    assert SL2_E.trace_form(SL2_F) == 1
    with pytest.raises(ValueError):
        Sl2Element.from_matrix(1, 0, 0, 1)


def test_from_pieces_is_canonical():
    field = PiecewiseField.from_pieces(((ZERO, SL2_H), (INFINITY, SL2_E), (ONE, SL2_H)))
    assert field.breakpoints == (INFINITY, ZERO)
    assert field.value_after(ExtendedRational(1, 2)) == SL2_H
    assert field.value_before(ZERO) == SL2_E
    assert field.jump(ZERO) == SL2_H - SL2_E
    assert PiecewiseField.from_pieces(((ZERO, SL2_H), (ONE, SL2_H))) == PiecewiseField.constant(SL2_H)


def test_field_rejects_unordered_breakpoints():
    with pytest.raises(ValueError):
        PiecewiseField((ZERO, INFINITY), (SL2_H, SL2_E))


def test_conjugate_moves_arcs():
    psi = wavelets.hyperfan(IDENTITY)
    for element in (modular.word_to_matrix(text) for text in ('T', 'S', 'U^-1 T', 'S U U')):
        assert fields.conjugate(psi, element) == wavelets.hyperfan(element)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_bracket_is_antisymmetric(data):
    first = wavelets.hyperfan(modular.word_to_matrix(data.draw(words)))
    second = wavelets.wavelet(modular.word_to_matrix(data.draw(words)))
    assert fields.bracket(first, second) == -fields.bracket(second, first)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_normalize_vanishes_on_framing(data):
    field = wavelets.wavelet(modular.word_to_matrix(data.draw(words)))
    framing = data.draw(st.sampled_from([Framing.standard(), Framing(MINUS_ONE, ONE, INFINITY),
                                         Framing(ExtendedRational(1, 2), ZERO, ExtendedRational(-3, 1))]))
    normalized, correction = fields.normalize(field, framing)
    check_vanishes_on(normalized, framing)
    assert normalized + PiecewiseField.constant(correction) == field


def test_normalize_rejects_repeated_points():
    with pytest.raises(ValueError):
        Framing(ZERO, ZERO, ONE)


def test_sum_fields_matches_addition():
    labels = [modular.word_to_matrix(text) for text in ('I', 'U', 'T', 'S T U')]
    fans = [wavelets.hyperfan(label) for label in labels]
    coefficients = [Fraction(1), Fraction(-2), Fraction(1, 3), Fraction(5)]
    total = PiecewiseField.zero()
    for fan, coefficient in zip(fans, coefficients):
        total = total + fan * coefficient
    assert fields.sum_fields(fans, coefficients) == total


def test_evaluate_at_angle():
    assert math.isclose(fields.evaluate_at_angle(PiecewiseField.constant(SL2_H), math.pi / 2), 2)
    assert math.isclose(fields.evaluate_at_angle(PiecewiseField.constant(SL2_E), math.pi), -2)
    psi = wavelets.hyperfan(IDENTITY)
    assert fields.evaluate_at_angle(psi, 3 * math.pi / 2) == 0
    assert math.isclose(fields.evaluate_at_angle(psi, math.pi / 2), -1)
    for x in (ExtendedRational(-1, 2), ExtendedRational(3, 1)):
        theta = math.atan2(-2 * x.p * x.q, x.p * x.p - x.q * x.q)
        assert math.isclose(fields.evaluate_at_angle(psi, theta), float(fields.evaluate(psi, x)), abs_tol=1e-12)


def test_scalar_of_global_elements():
    assert SL2_E.scalar_at(ZERO) == -2
    assert SL2_E.scalar_at(INFINITY) == 0
    assert SL2_F.scalar_at(ZERO) == 0
    assert ZERO_SL2.scalar_at(ONE) == 0

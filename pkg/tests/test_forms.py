import math
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from farey_ppsl2.core import forms, modular, wavelets
from farey_ppsl2.entity import ExtendedRational, GroupWord
from farey_ppsl2.entity.entity_group import GEN_U, IDENTITY, INFINITY, MINUS_ONE, ZERO

words = st.lists(st.sampled_from(modular.RANDOM_ALPHABET), max_size=6).map(lambda letters: GroupWord(tuple(letters)))

DOE = frozenset((ZERO, INFINITY))
EDGE_U = frozenset((ZERO, MINUS_ONE))
A = 2j * math.pi


def test_doe_pair():
    gamma = forms.la_cocycle(wavelets.normalized_wavelet(IDENTITY), wavelets.normalized_wavelet(GEN_U))
    omega = forms.wp_form(forms.unit_tangent(DOE), forms.unit_tangent(EDGE_U), 1)
    assert gamma == 4
    assert omega == -2
    assert forms.COCYCLE_SCALE * gamma / omega == -4


@pytest.mark.parametrize('max_gen', [1, 2])
def test_ratio_report(max_gen):
    report = forms.ratio_report(max_gen)
    assert report['constant']
    assert report['ratio'] == -4
    assert report['vanishing']
    assert report['tsu_relation']
    assert len(report['adjacent']) == 3 * len(modular.farey_triangles(max_gen))


def test_la_cocycle_is_antisymmetric():
    for left, right, _, _ in forms.adjacent_pairs(2)[:9]:
        first, second = wavelets.normalized_wavelet(left), wavelets.normalized_wavelet(right)
        assert forms.la_cocycle(first, second) == -forms.la_cocycle(second, first)


@settings(max_examples=15, deadline=None)
@given(st.data())
def test_cocycle_defect_of_wavelets(data):
    f, g, h = (wavelets.normalized_wavelet(modular.word_to_matrix(data.draw(words))) for _ in range(3))
    assert forms.jump_volume(f, g, h) == 0
    assert forms.cocycle_defect(f, g, h) == forms.jump_volume(f, g, h)


def test_wp_form_is_antisymmetric():
    tangent = forms.sum_tangents([forms.unit_tangent(DOE), {EDGE_U: Fraction(3)}])
    other = {frozenset((ZERO, ExtendedRational(1, 1))): Fraction(-1, 2), EDGE_U: Fraction(2)}
    assert forms.wp_form(tangent, other, 1) == -forms.wp_form(other, tangent, 1)
    assert forms.wp_form(tangent, tangent, 1) == 0


def test_wp_form_rejects_edges_beyond_truncation():
    with pytest.raises(ValueError):
        forms.wp_form(forms.unit_tangent(frozenset((ZERO, ExtendedRational(1, 2)))), forms.unit_tangent(DOE), 0)


def test_sum_tangents_drops_zeros():
    assert forms.sum_tangents([{DOE: Fraction(1)}, {DOE: Fraction(-1), EDGE_U: Fraction(2)}]) == {EDGE_U: 2}


def test_witt_generators():
    result = forms.kk_form_from_coefficients(forms.witt_generator(2), forms.witt_generator(-2), A, 50)
    assert abs(result.value - 6 * A) <= 1e-9
    result = forms.kk_form_from_coefficients(forms.witt_generator(2), forms.witt_generator(3), A, 50)
    assert abs(result.value) <= 1e-9
    with pytest.raises(ValueError):
        forms.kk_form_from_coefficients(forms.witt_generator(2), forms.witt_generator(3), A, 1)


def test_kk_matches_wp_on_adjacent_pair():
    left, right, left_key, right_key = forms.adjacent_pairs(1)[0]
    first = wavelets.normalized_wavelet(left) * Fraction(-1, 2)
    second = wavelets.normalized_wavelet(right) * Fraction(-1, 2)
    result = forms.kk_form(first, second, A, 2000)
    omega = float(forms.wp_form(forms.unit_tangent(left_key), forms.unit_tangent(right_key), 1))
    assert abs(result.value - omega) <= 1e-3 * abs(omega)
    assert result.tail_bound >= 0

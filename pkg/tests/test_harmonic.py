import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from farey_ppsl2.core import harmonic, modular, wavelets
from farey_ppsl2.entity import GroupWord, PiecewiseField
from farey_ppsl2.entity.entity_field import SL2_H
from farey_ppsl2.entity.entity_group import IDENTITY

words = st.lists(st.sampled_from(modular.RANDOM_ALPHABET), max_size=6).map(lambda letters: GroupWord(tuple(letters)))

MODES = np.concatenate([-np.arange(2, 41)[::-1], np.arange(2, 41)])
THETAS = (np.arange(64) + 0.5) * (2 * math.pi / 64)


def mother_coefficient(n):
    return 8 / (1j * math.pi * (n ** 3 - n)) if n % 4 == 2 else 0


def test_mother_coefficients():
    values = harmonic.fourier_coefficients(wavelets.normalized_wavelet(IDENTITY), MODES)
    expected = np.array([mother_coefficient(int(n)) for n in MODES])
    assert np.max(np.abs(values - expected)) <= 1e-12
    assert abs(harmonic.wavelet_fourier(IDENTITY, 2) - 4 / (3j * math.pi)) <= 1e-14


def test_psi_identity_coefficients():
    even = np.array([n for n in range(-20, 21) if n % 2 == 0 and n != 0])
    values = harmonic.hyperfan_fourier(IDENTITY, even)
    expected = -1j * even / (math.pi * (even.astype(float) ** 2 - 1))
    assert np.max(np.abs(values - expected)) <= 1e-12
    oracle = harmonic.fourier_coefficients(wavelets.hyperfan(IDENTITY), even)
    assert np.max(np.abs(values - oracle)) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_wavelet_closed_form(data):
    element = modular.word_to_matrix(data.draw(words))
    closed = harmonic.wavelet_fourier(element, MODES)
    oracle = harmonic.fourier_coefficients(wavelets.normalized_wavelet(element), MODES)
    assert np.max(np.abs(closed - oracle)) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_hyperfan_closed_form(data):
    element = modular.word_to_matrix(data.draw(words))
    modes = np.arange(-30, 31)
    closed = harmonic.hyperfan_fourier(element, modes)
    oracle = harmonic.fourier_coefficients(wavelets.hyperfan(element), modes)
    assert np.max(np.abs(closed - oracle)) <= 1e-9


def test_closed_form_needs_large_modes():
    with pytest.raises(ValueError):
        harmonic.wavelet_fourier(IDENTITY, [1, 2])


@pytest.mark.parametrize('n', [0, 2, 3, 5, 8])
def test_scipy_agrees_with_exact_integration(n):
    field = wavelets.normalized_wavelet(modular.word_to_matrix('U T^-1 S'))
    assert abs(harmonic.numeric_quadrature(field, n) - harmonic.quadrature_oracle(field, n)) <= 1e-9


def test_global_field_has_three_modes():
    series = harmonic.field_series(PiecewiseField.constant(SL2_H), 4)
    assert abs(series.coefficient(1) + 1j) <= 1e-12
    assert abs(series.coefficient(-1) - 1j) <= 1e-12
    assert all(abs(series.coefficient(n)) <= 1e-12 for n in (-4, -3, -2, 0, 2, 3, 4))


def test_series_of_real_field():
    series = harmonic.field_series(wavelets.wavelet(modular.word_to_matrix('T U S')), 16)
    assert series.is_real()
    theta = 1.234
    assert abs(harmonic.field_series(wavelets.mother_wavelet(), 400).evaluate(theta)[0].imag) <= 1e-9


def test_decay_exponent():
    modes = np.arange(10, 403, 4)
    exponent = harmonic.fit_decay_exponent(modes, harmonic.wavelet_fourier(IDENTITY, modes))
    assert abs(exponent - 3) <= 0.05
    with pytest.raises(ValueError):
        harmonic.fit_decay_exponent([2, 3], [1.0, 0.0])


def test_witt_constants():
    assert harmonic.witt_b_constants(6) == (1, -1j, 1j)
    assert harmonic.witt_b_constants(4) == (1, 0, 0)
    assert harmonic.witt_b_constants(5) == (0, 1, 0)


def test_witt_expansion_improves_with_generation():
    errors = [harmonic.witt_error(2, level, THETAS) for level in (1, 4)]
    assert errors[1] < errors[0]

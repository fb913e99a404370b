"""
数据输出类子命令：fourier、enumerate、coset、tess、expand
"""
import math
import random
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from farey_ppsl2.core import halfplane, harmonic, modular, wavelets
from farey_ppsl2.entity import ConfigError, GroupElement, GroupWord, HyperfanCombination, RunConfig
from farey_ppsl2.entity.entity_field import SL2_E, SL2_F, SL2_H, PiecewiseField
from farey_ppsl2.entity.entity_group import IDENTITY
from farey_ppsl2.infra.report import ReportHandler
from farey_ppsl2.infra.suite import Case, Check, bound, inject, seeded
from farey_ppsl2.util.default_util import RationalUtil

# 交换子商 Z/6 中六个代表元的指数和
COSET_TABLE = (('I', 0), ('S', 3), ('U S', 4), ('T^-1', 1), ('T S', 2), ('U^-1', 5))

FOURIER_TOLERANCE = 1e-9


def _word_name(element: GroupElement) -> str:
    return str(modular.matrix_to_word(element))


def _parse_word(text: str) -> GroupWord:
    try:
        return GroupWord.parse(text)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def _seeded_words(config: RunConfig, count: int, length: int) -> List[GroupWord]:
    if config.word:
        return [_parse_word(config.word)]
    rng = seeded(config)
    return [modular.random_word(rng, length) for _ in range(count)]


def _fourier_rows(handler: ReportHandler, case_id: str, word: GroupWord, modes: np.ndarray,
                  closed: np.ndarray, oracle: np.ndarray) -> float:
    errors = np.abs(closed - oracle)
    for n, value, reference, error in zip(modes, closed, oracle, errors):
        handler.put_row({
            'word': str(word), 'n': int(n), 're': value.real, 'im': value.imag,
            'oracle_re': reference.real, 'oracle_im': reference.imag, 'abs_err': float(error),
        }, case_id)
    return float(np.max(errors))


def _fourier_check(handler: ReportHandler, case_id: str, word: GroupWord, modes: np.ndarray,
                   hyperfan: bool) -> Check:
    def check() -> Tuple[bool, dict]:
        element = modular.word_to_matrix(word)
        if hyperfan:
            closed = harmonic.hyperfan_fourier(element, modes)
            oracle = harmonic.fourier_coefficients(wavelets.hyperfan(element), modes)
        else:
            closed = harmonic.wavelet_fourier(element, modes)
            oracle = harmonic.fourier_coefficients(wavelets.normalized_wavelet(element), modes)
        error = _fourier_rows(handler, case_id, word, modes, closed, oracle)
        return error <= FOURIER_TOLERANCE, {'word': str(word), 'max_abs_err': error}

    return check


@inject
class FourierWavelet:
    command = 'fourier'
    target = 'wavelet'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        nmax = bound(config, 'nmax', 64)
        if nmax < 2:
            raise ConfigError('wavelet coefficients start at |n| = 2, --nmax must be at least 2')
        positive = np.arange(2, nmax + 1)
        modes = np.concatenate([-positive[::-1], positive])
        words = _seeded_words(config, bound(config, 'samples', 40), 6)
        cases: List[Case] = [(f'wavelet-{index}', _fourier_check(handler, f'wavelet-{index}', word, modes, False))
                             for index, word in enumerate(words)]

        def mother() -> Tuple[bool, dict]:
            values = harmonic.fourier_coefficients(wavelets.normalized_wavelet(IDENTITY), modes)
            expected = np.where(modes % 4 == 2, 8 / (1j * math.pi * (modes.astype(np.float64) ** 3 - modes)), 0)
            error = float(np.max(np.abs(values - expected)))
            return error <= 1e-12, {'max_abs_err': error}

        def scipy_oracle() -> Tuple[bool, dict]:
            # 第二个独立的数值求积
            field = wavelets.normalized_wavelet(modular.word_to_matrix(_seeded_words(config, 1, 6)[0]))
            errors = [abs(harmonic.numeric_quadrature(field, n) - harmonic.quadrature_oracle(field, n))
                      for n in (2, 3, 5, 8)]
            return max(errors) <= 1e-9, {'max_abs_err': max(errors)}

        return [('mother', mother), ('scipy-quadrature', scipy_oracle)] + cases


@inject
class FourierHyperfan:
    command = 'fourier'
    target = 'hyperfan'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        nmax = bound(config, 'nmax', 64)
        modes = np.arange(-nmax, nmax + 1)
        words = _seeded_words(config, bound(config, 'samples', 40), 6)
        cases: List[Case] = [(f'hyperfan-{index}', _fourier_check(handler, f'hyperfan-{index}', word, modes, True))
                             for index, word in enumerate(words)]

        def psi_i() -> Tuple[bool, dict]:
            even = np.arange(2, nmax + 1, 2)
            values = harmonic.hyperfan_fourier(IDENTITY, even)
            error = float(np.max(np.abs(values + 1j * even / (math.pi * (even ** 2 - 1)))))
            return error <= 1e-12, {'max_abs_err': error}

        return [('psi-identity', psi_i)] + cases


@inject
class FourierWitt:
    command = 'fourier'
    target = 'witt'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        max_gen = bound(config, 'max_gen', 5)
        top = min(bound(config, 'nmax', 64), 5)
        thetas = (np.arange(64) + 0.5) * (2 * math.pi / 64)

        def by_generation(n: int) -> Check:
            def check() -> Tuple[bool, dict]:
                errors = [harmonic.witt_error(n, level, thetas) for level in range(1, max_gen + 1)]
                for level, error in enumerate(errors, start=1):
                    handler.put_row({'n': n, 'G': level, 'max_err': error}, f'witt-{n}')
                # 截断代数增加时误差必须下降
                return errors[-1] < errors[0], {'n': n, 'errors': errors}

            return check

        return [(f'witt-{n}', by_generation(n)) for n in range(2, top + 1)]


@inject
class EnumerateFarey:
    command = 'enumerate'
    target = 'farey'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        max_gen = bound(config, 'max_gen', 4)
        points = modular.farey_points(max_gen)
        for n, x in enumerate(points):
            handler.put_row({'n': n, 'point': str(x), 'generation': modular.generation(x)})

        def consistent() -> Tuple[bool, dict]:
            wrong = [n for n, x in enumerate(points)
                     if modular.farey_index(x) != n or modular.generation(x) != max(n.bit_length() - 1, 0)]
            return not wrong, {'G': max_gen, 'points': len(points), 'wrong': wrong}

        return [('enumeration', consistent)]


@inject
class CosetClassify:
    command = 'coset'
    target = 'classify'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        if config.word:
            word = _parse_word(config.word)

            def classify() -> Tuple[bool, dict]:
                by_word = modular.word_coset(word)
                by_matrix = modular.commutant_coset(modular.word_to_matrix(word))
                handler.put_row({'word': str(word), 'coset': by_word})
                return by_word == by_matrix, {'word': str(word), 'coset': by_word, 'normal_form_coset': by_matrix}

            return [('classify', classify)]

        max_gen = bound(config, 'max_gen', 5)

        def printed() -> Tuple[bool, dict]:
            found = {name: modular.commutant_coset(modular.word_to_matrix(name)) for name, _ in COSET_TABLE}
            for name, value in COSET_TABLE:
                handler.put_row({'word': name, 'coset': found[name]})
            return all(found[name] == value for name, value in COSET_TABLE), {'cosets': found}

        def every_third_edge() -> Tuple[bool, dict]:
            wrong = {}
            for x in modular.farey_points(max_gen):
                steps = modular.fan_coset_steps(x, max_gen)
                if any(step != 1 for step in steps):
                    wrong[str(x)] = steps
            return not wrong, {'G': max_gen, 'wrong': wrong}

        return [('printed-cosets', printed), ('fan-steps', every_third_edge)]


@inject
class TessBuild:
    command = 'tess'
    target = 'build'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        max_gen = bound(config, 'max_gen', 4)

        def build() -> Tuple[bool, dict]:
            truncation = halfplane.canonical_decoration(max_gen)
            exact = all(point.delta == (1 if x.is_infinite else Fraction(1, x.q * x.q))
                        for x, point in truncation.vertices.items())
            return exact, {'tessellation': truncation}

        return [('canonical', build)]


def parse_terms(text: str) -> HyperfanCombination:
    """'coef:word, coef:word' 形式的超扇组合"""
    combination = HyperfanCombination()
    for item in filter(None, (part.strip() for part in text.split(','))):
        if ':' not in item:
            raise ConfigError(f"term '{item}' must look like coef:word")
        coefficient, word = item.split(':', 1)
        try:
            combination.add_term(modular.word_to_matrix(word), RationalUtil.parse(coefficient))
        except ValueError as e:
            raise ConfigError(str(e)) from e
    return combination


def _random_combination(rng: random.Random, max_gen: int) -> HyperfanCombination:
    edges = modular.farey_edges(max_gen)
    combination = HyperfanCombination()
    for edge in rng.sample(edges, rng.randint(1, min(6, len(edges)))):
        combination.add_term(edge.label, Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5)))
    return combination


@inject
class ExpandBasis:
    command = 'expand'
    target = 'basis'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        if config.terms or config.word:
            if config.terms:
                field = wavelets.materialize(parse_terms(config.terms))
            else:
                field = wavelets.wavelet(modular.word_to_matrix(_parse_word(config.word)))

            def expand() -> Tuple[bool, dict]:
                expansion = wavelets.expand_in_basis(field)
                return True, {'expansion': expansion.to_json(_word_name)}

            return [('expansion', expand)]

        rng = seeded(config)
        inputs = [_random_combination(rng, 3) for _ in range(bound(config, 'samples', 50))]

        def roundtrip(combination: HyperfanCombination) -> Check:
            def check() -> Tuple[bool, dict]:
                field = wavelets.materialize(combination)
                expansion = wavelets.expand_in_basis(field)
                return wavelets.materialize(expansion) == field, {
                    'input': combination.to_json(_word_name),
                    'same_terms': expansion.terms == combination.terms,
                }
            return check

        def sl2_basis() -> Tuple[bool, dict]:
            basis = wavelets.sl2_from_hyperfans()
            targets = {'h': SL2_H, 'e': SL2_E, 'f': SL2_F}
            results = {name: wavelets.materialize(basis[name]) == PiecewiseField.constant(targets[name])
                       for name in targets}
            return all(results.values()), {'reconstructs': results}

        cases = [('sl2-basis', sl2_basis)]
        return cases + [(f'roundtrip-{index}', roundtrip(combination)) for index, combination in enumerate(inputs)]

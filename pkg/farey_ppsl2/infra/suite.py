import asyncio
import math
import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from farey_ppsl2.core import eisenstein, forms, halfplane, mcform, modular, wavelets
from farey_ppsl2.core.fields import bracket, evaluate_at_angle
from farey_ppsl2.entity import ConfigError, GroupPoint, PiecewiseField, RunConfig, Status, TriangulatedPolygon
from farey_ppsl2.entity.entity_field import SL2_E, SL2_F, SL2_H, ZERO_SL2
from farey_ppsl2.entity.entity_group import GEN_S, GEN_T, GEN_U, IDENTITY, INFINITY, MINUS_ONE, ZERO
from farey_ppsl2.infra.init_config import THREADS
from farey_ppsl2.infra.report import ReportHandler
from farey_ppsl2.util.logger import debug, logger, warning

# 全局注册器
_suite_registry: Dict[Tuple[str, str], type] = {}

Check = Callable[[], Tuple[bool, dict]]
Case = Tuple[str, Check]


def inject(cls):
    _suite_registry[(cls.command, cls.target)] = cls
    return cls


def lookup(command: str, target: str) -> type:
    if (command, target) not in _suite_registry:
        known = ', '.join(sorted(f'{c} {t}' for c, t in _suite_registry if c == command))
        raise ConfigError(f"unknown {command} target '{target}', expected one of: {known}")
    return _suite_registry[(command, target)]


def registered(command: Optional[str] = None) -> List[Tuple[str, str]]:
    return sorted(key for key in _suite_registry if command is None or key[0] == command)


def bound(config: RunConfig, name: str, default: int) -> int:
    value = getattr(config, name)
    value = default if value is None else value
    if value <= 0:
        raise ConfigError(f'--{name.replace("_", "-")} must be positive, got {value}')
    return value


def seeded(config: RunConfig) -> random.Random:
    if config.seed is None:
        raise ConfigError(f'{config.command} {config.target} is randomized and needs --seed')
    return random.Random(config.seed)


async def run_cases(handler: ReportHandler, cases: List[Case]):
    """
    并发执行互不依赖的用例，受 FAREY_PPSL2_THREADS 限制；结果按提交顺序汇总
    """
    semaphore = asyncio.Semaphore(THREADS)
    for case_id, _ in cases:
        handler.put_case_trace(case_id, Status.PENDING)

    async def guarded(case_id: str, check: Check) -> Tuple[str, bool, dict]:
        async with semaphore:
            try:
                passed, payload = await asyncio.to_thread(check)
            except (ValueError, ArithmeticError) as e:
                warning(f"Check raised {type(e).__name__}: {e}", case_id)
                passed, payload = False, {'error': str(e)}
            debug(f"Check finished, passed={passed}", case_id)
            return case_id, passed, payload

    logger.info(f' -- {handler.report.suite} of {len(cases)} case(s)')
    results = await asyncio.gather(*(guarded(case_id, check) for case_id, check in cases))
    for case_id, passed, payload in results:
        handler.put_case_trace(case_id, Status.PASSED if passed else Status.FAILED, payload)


async def run_suite(config: RunConfig) -> ReportHandler:
    suite = lookup(config.command, config.target)
    handler = ReportHandler(f'{config.command} {config.target}', config)
    cases = suite.cases(config, handler)
    await run_cases(handler, cases)
    return handler


def _close(left: complex, right: complex, tol: float, relative: bool = False) -> Tuple[bool, float]:
    error = abs(left - right)
    if relative:
        error /= max(abs(right), 1e-300)
    return error <= tol, error


@inject
class Usa:
    command = 'verify'
    target = 'usa'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        max_gen = bound(config, 'max_gen', 6)
        expected = {'I': SL2_H + SL2_E + SL2_F, 'T': SL2_E * 2 + SL2_F, 'U^-1': SL2_E + SL2_F * 2}

        def specializations() -> Tuple[bool, dict]:
            values = {word: wavelets.usa_deficiency(modular.word_to_matrix(word)) for word in expected}
            return all(values[word] == expected[word] for word in expected), {'values': values}

        def by_generation(level: int) -> Check:
            def check() -> Tuple[bool, dict]:
                labels = []
                for edge in modular.farey_edges(level):
                    if level and max(modular.generation(edge.initial), modular.generation(edge.terminal)) != level:
                        continue
                    labels.extend((edge.label, GEN_S * edge.label))
                mismatches = [label for label in labels
                              if wavelets.usa_deficiency(label) != wavelets.usa_closed_form(label)]
                return not mismatches, {'checked': labels, 'mismatches': mismatches}
            return check

        handler.put_summary(max_gen=max_gen)
        return [('specializations', specializations)] + \
            [(f'generation-{level}', by_generation(level)) for level in range(max_gen + 1)]


@inject
class Bracket:
    command = 'verify'
    target = 'bracket'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        rng = seeded(config)
        samples = bound(config, 'samples', 200)
        elements = [GEN_T ** n for n in (-2, 1, 3)]
        elements += [modular.word_to_matrix(modular.random_word(rng, 8)) for _ in range(samples)]
        pairs = [(modular.word_to_matrix(modular.random_word(rng, 5)),
                  modular.word_to_matrix(modular.random_word(rng, 5))) for _ in range(max(samples // 10, 1))]
        psi_i = wavelets.hyperfan(IDENTITY)

        def structure(element) -> Check:
            def check() -> Tuple[bool, dict]:
                result = wavelets.bracket_structure(element)
                oracle = bracket(psi_i, wavelets.hyperfan(element))
                passed = wavelets.materialize(result.combination) == oracle
                if result.case == 'case2':
                    passed = passed and wavelets.materialize(wavelets.case2_closed_form(element)) == oracle
                return passed, {'A': element, 'structure_case': result.case, 'overlap': result.overlap}
            return check

        def general(left, right) -> Check:
            def check() -> Tuple[bool, dict]:
                oracle = bracket(wavelets.hyperfan(left), wavelets.hyperfan(right))
                return wavelets.materialize(wavelets.general_bracket(left, right)) == oracle, \
                    {'B': left, 'A': right}
            return check

        def coverage() -> Tuple[bool, dict]:
            seen = sorted({wavelets.bracket_structure(element).case for element in elements})
            return seen == ['c=0', 'case1', 'case2', 'case3', 'case4'], {'cases_seen': seen}

        cases = [(f'structure-{index}', structure(element)) for index, element in enumerate(elements)]
        cases += [(f'general-{index}', general(*pair)) for index, pair in enumerate(pairs)]
        return cases + [('coverage', coverage)]


@inject
class Flip:
    command = 'verify'
    target = 'flip'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        names = list(mcform.DOE_CASES) if config.case == 'all' else [config.case]
        for name in names:
            if name not in mcform.DOE_CASES:
                raise ConfigError(f"unknown --case '{name}', expected all or one of {', '.join(mcform.DOE_CASES)}")

        def invariance(name: str) -> Check:
            def check() -> Tuple[bool, dict]:
                proof = mcform.verify_flip_invariance(name)
                return proof['vanishes'], proof
            return check

        def far_edges() -> Tuple[bool, dict]:
            results = mcform.far_edge_check(bound(config, 'max_gen', 3))
            return all(results.values()), {'edges': results}

        def new_edge() -> Tuple[bool, dict]:
            # 新对角线 f 的小波与 doe 的小波只差一个符号
            flipped, tau = mcform.flipped_wavelets(), mcform.tau_fields()
            return flipped['f'] == -tau['e'], {'f': flipped['f'], 'e': tau['e']}

        def corrections() -> Tuple[bool, dict]:
            found = mcform.normalization_corrections()
            return found == {'tau': mcform.TAU_CORRECTIONS, 'flipped': mcform.FLIPPED_CORRECTIONS}, found

        def arc_sums() -> Tuple[bool, dict]:
            # 单位 λ 处 f̃ = (ã+b̃+c̃+d̃)/2 - ẽ，两侧的逐弧总和必须一致
            form = mcform.one_form(max_gen=1)
            ones = {frozenset(points): Fraction(1) for points in mcform.TAU_EDGES.values()}
            by_form = mcform.arc_table(mcform.apply(form, ones))
            tau = mcform.arc_sums(mcform.tau_fields())
            flipped = mcform.arc_sums(mcform.flipped_tessellation_fields())
            return by_form == tau == flipped, {'tau': tau, 'flipped': flipped}

        cases = [(f'case-{name}', invariance(name)) for name in names]
        return cases + [('far-edges', far_edges), ('new-edge', new_edge), ('corrections', corrections),
                        ('arc-sums', arc_sums)]


@inject
class FormsRatio:
    command = 'verify'
    target = 'forms-ratio'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        max_gen = bound(config, 'max_gen', 4)
        keys = ('left', 'right', 'gamma', 'omega')

        def ratio() -> Tuple[bool, dict]:
            report = forms.ratio_report(max_gen)
            entries = report['adjacent']
            antisymmetric = all(forms.la_cocycle(wavelets.normalized_wavelet(entry['right']),
                                                 wavelets.normalized_wavelet(entry['left'])) == -entry['gamma']
                                for entry in entries[:12])
            handler.put_summary(ratio=report['ratio'], pairs=len(entries))
            passed = report['constant'] and report['ratio'] == -4 and report['vanishing'] \
                and antisymmetric and report['tsu_relation']
            return passed, {
                'adjacent': [{key: entry[key] for key in keys} for entry in entries],
                'non_adjacent': [{key: entry[key] for key in keys} for entry in report['non_adjacent']],
                'ratio': report['ratio'],
                'antisymmetric': antisymmetric,
            }

        return [('ratio', ratio)]


@inject
class KirillovKostant:
    command = 'verify'
    target = 'kk'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        truncation = bound(config, 'kk_truncation', 2000)
        count = bound(config, 'samples', 10)
        a = 2j * math.pi
        pairs = forms.adjacent_pairs(2)[:count]

        def witt(n: int, m: int, expected: complex) -> Check:
            def check() -> Tuple[bool, dict]:
                result = forms.kk_form_from_coefficients(forms.witt_generator(n), forms.witt_generator(m),
                                                         a, truncation)
                passed, error = _close(result.value, expected, 1e-9)
                return passed, {'kk': result, 'expected': expected, 'error': error}
            return check

        def pair(left, right, left_key, right_key) -> Check:
            def check() -> Tuple[bool, dict]:
                # 形变场 -½ϑ̄ 对应 d log λ
                first = wavelets.normalized_wavelet(left) * Fraction(-1, 2)
                second = wavelets.normalized_wavelet(right) * Fraction(-1, 2)
                result = forms.kk_form(first, second, a, truncation)
                omega = forms.wp_form(forms.unit_tangent(left_key), forms.unit_tangent(right_key), 2)
                passed, error = _close(result.value, float(omega), 1e-3, relative=True)
                return passed, {'A': left, 'B': right, 'kk': result, 'omega': omega, 'relative_error': error}
            return check

        cases = [('witt-2-minus-2', witt(2, -2, 6 * a)), ('witt-2-3', witt(2, 3, 0j))]
        return cases + [(f'pair-{index}', pair(*entry)) for index, entry in enumerate(pairs)]


def _sample_angles(count: int, gap: float = 0.05) -> np.ndarray:
    """避开 θ=π（0 的像，部分和的聚点）与各象限端点"""
    angles = (np.arange(count) + 0.5) * (2 * math.pi / count)
    keep = [theta for theta in angles
            if all(abs(theta - edge) > gap for edge in (0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi))]
    return np.array(keep)


def _limit(pieces) -> PiecewiseField:
    return PiecewiseField.from_pieces(pieces)


# 部分和的极限：扇 φ̄_U、左超扇与右超扇
TELESCOPING_LIMITS = {
    'fan': _limit(((INFINITY, SL2_E * -2), (MINUS_ONE, SL2_H * 2 - SL2_F * 2), (ZERO, ZERO_SL2))),
    'hyperfan': _limit(((INFINITY, SL2_E * -2), (ZERO, ZERO_SL2))),
    'right-hyperfan': _limit(((INFINITY, SL2_H), (ZERO, SL2_H - SL2_E * 2))),
}


@inject
class Telescoping:
    command = 'verify'
    target = 'telescoping'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        count = bound(config, 'truncation', 200)
        thetas = _sample_angles(bound(config, 'samples', 24))
        builders = {
            'fan': lambda: wavelets.fan_partial_sum(GEN_U, count - 1),
            'hyperfan': lambda: wavelets.hyperfan_partial_sum(IDENTITY, count),
            'right-hyperfan': lambda: wavelets.hyperfan_partial_sum(IDENTITY, count, right=True),
        }

        def compare(name: str) -> Check:
            def check() -> Tuple[bool, dict]:
                partial, limit = builders[name](), TELESCOPING_LIMITS[name]
                errors = [abs(evaluate_at_angle(partial, theta) - evaluate_at_angle(limit, theta))
                          for theta in thetas]
                return max(errors) <= 1e-6, {'N': count, 'samples': len(errors), 'max_error': max(errors)}
            return check

        return [(name, compare(name)) for name in builders]


def _random_point(rng: random.Random) -> GroupPoint:
    return GroupPoint(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 3.0), rng.uniform(0, 2 * math.pi))


@inject
class Eisenstein:
    command = 'verify'
    target = 'eisenstein'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        rng = seeded(config)
        order = bound(config, 'truncation', 200)
        step = config.step
        if step <= 0:
            raise ConfigError(f'--step must be positive, got {step}')
        points = [_random_point(rng) for _ in range(bound(config, 'samples', 20))]
        moduli = [complex(rng.uniform(-0.7, 0.7), rng.uniform(0.6, 1.2)) for _ in range(10)]
        words = [modular.word_to_matrix(modular.random_word(rng, 4)) for _ in range(20)]
        target = 3 / math.pi

        def corrected(z: complex) -> complex:
            return eisenstein.e2_corrected(z, order)

        def e4(z: complex) -> complex:
            return eisenstein.e4_eval(z, order)

        phi, phi_bar, phi4 = eisenstein.lift(corrected, 1), eisenstein.conjugate_lift(corrected, 1), \
            eisenstein.lift(e4, 2)

        def series() -> Tuple[bool, dict]:
            coeffs = eisenstein.e2_series(order).coeffs
            return int(coeffs[1]) == -24 and int(coeffs[6]) == -288, {'q1': int(coeffs[1]), 'q6': int(coeffs[6])}

        def at_i() -> Tuple[bool, dict]:
            value, tail = eisenstein.e2_eval_bounded(1j, order, reduce=False)
            passed, error = _close(value, target, 1e-12)
            zero, _ = _close(eisenstein.e2_corrected(1j, order, reduce=False), 0, 1e-12)
            return passed and zero, {'E2(i)': value, 'error': error, 'tail_bound': tail}

        def weight_two() -> Tuple[bool, dict]:
            z = 1 + 2j
            left = eisenstein.e2_corrected(-1 / z, order, reduce=False)
            right = z * z * eisenstein.e2_corrected(z, order, reduce=False)
            passed, error = _close(left, right, 1e-10, relative=True)
            return passed, {'z': z, 'relative_error': error}

        def antiholomorphic() -> Tuple[bool, dict]:
            value = eisenstein.dz_bar(corrected, 2j, step)
            passed, error = _close(value, 3j / (2 * math.pi) / 4, 1e-6)
            return passed, {'dzbar': value, 'error': error}

        def quasi_modularity() -> Tuple[bool, dict]:
            errors = []
            for z in moduli:
                _, error = _close(eisenstein.quasi_modularity_defect(z, order), 12 * z / (2j * math.pi),
                                  1e-9, relative=True)
                errors.append(error)
            return max(errors) <= 1e-9, {'max_relative_error': max(errors)}

        def invariance() -> Tuple[bool, dict]:
            errors = []
            for point, word in zip(points, words):
                g = point.matrix()
                gamma = np.array([[word.a, word.b], [word.c, word.d]], dtype=np.float64)
                for element in (gamma, np.array([[0., -1.], [1., 0.]]), np.array([[1., 1.], [0., 1.]]),
                                np.array([[1., 0.], [1., 1.]])):
                    errors.append(_close(phi(element @ g), phi(g), 1e-9, relative=True)[1])
            return max(errors) <= 1e-9, {'max_relative_error': max(errors)}

        def operators(index: int, point: GroupPoint) -> Check:
            def check() -> Tuple[bool, dict]:
                value = phi(point)
                h_ok, h_err = _close(eisenstein.cayley_action('H', phi, point, step), 2 * value, 1e-5)
                f_ok, f_err = _close(eisenstein.cayley_action('F', phi, point, step), target, 1e-4)
                e_ok, e_err = _close(eisenstein.cayley_action('E', phi_bar, point, step), target, 1e-4)
                c_ok, c_err = _close(eisenstein.casimir(phi, point, step), 0, 1e-4)
                f4_ok, f4_err = _close(eisenstein.cayley_action('F', phi4, point, step), 0, 1e-4 * max(1, abs(phi4(point))))
                c4_ok, c4_err = _close(eisenstein.casimir(phi4, point, step), 2 * phi4(point),
                                       1e-4 * max(1, abs(phi4(point))))
                return all((h_ok, f_ok, e_ok, c_ok, f4_ok, c4_ok)), {
                    'point': point.as_tuple(), 'H': h_err, 'F': f_err, 'E': e_err, 'casimir': c_err,
                    'F_E4': f4_err, 'casimir_E4': c4_err,
                }
            return check

        def convergence() -> Tuple[bool, dict]:
            point = points[0]

            def residual(h: float) -> complex:
                return eisenstein.cayley_action('H', phi, point, h) - 2 * phi(point)

            ratio = eisenstein.residual_convergence_ratio(residual, 1e-2)
            return 3 <= ratio <= 5, {'ratio': ratio}

        cases = [('e2-series', series), ('e2-at-i', at_i), ('weight-two', weight_two),
                 ('dzbar', antiholomorphic), ('quasi-modularity', quasi_modularity), ('invariance', invariance)]
        cases += [(f'operators-{index}', operators(index, point)) for index, point in enumerate(points)]
        return cases + [('convergence', convergence)]


@inject
class PolygonRelations:
    command = 'verify'
    target = 'polygon-relations'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        largest = bound(config, 'max_polygon', 8)
        if largest < 4:
            raise ConfigError('polygon relations need polygons with at least four vertices')

        def relations(n: int) -> Check:
            def check() -> Tuple[bool, dict]:
                counts = {'face': 0, 'face_doe': 0, 'commute': 0, 'pentagon': 0, 'pentagon_doe': 0}
                failures = []
                for polygon in halfplane.all_triangulations(n):
                    diagonals = sorted(polygon.diagonals, key=sorted)
                    for diagonal in diagonals:
                        oriented = TriangulatedPolygon(n, polygon.diagonals, tuple(sorted(diagonal)))
                        for name, subject, expected in (('face', polygon, 2), ('face_doe', oriented, 4)):
                            counts[name] += 1
                            if halfplane.face_order(subject, diagonal) != expected:
                                failures.append((name, sorted(diagonal)))
                    for index, first in enumerate(diagonals):
                        for second in diagonals[index + 1:]:
                            if not halfplane._shares_triangle(polygon, first, second):
                                counts['commute'] += 1
                                if not halfplane.flips_commute(polygon, first, second):
                                    failures.append(('commute', sorted(first), sorted(second)))
                                continue
                            with_doe = TriangulatedPolygon(n, polygon.diagonals, tuple(sorted(first)))
                            for name, subject, expected in (('pentagon', polygon, 5), ('pentagon_doe', with_doe, 10)):
                                counts[name] += 1
                                if halfplane.pentagon_order(subject, first, second) != expected:
                                    failures.append((name, sorted(first), sorted(second)))
                return not failures, {'n': n, 'counts': counts, 'failures': failures[:10]}
            return check

        return [(f'polygon-{n}', relations(n)) for n in range(4, largest + 1)]


@inject
class TessRoundtrip:
    command = 'verify'
    target = 'tess-roundtrip'

    @staticmethod
    def cases(config: RunConfig, handler: ReportHandler) -> List[Case]:
        rng = seeded(config)
        max_gen = bound(config, 'max_gen', 8)
        samples = bound(config, 'samples', 50)
        depth = min(max_gen, 4)
        inputs = [{edge.key: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for edge in modular.farey_edges(depth)}
                  for _ in range(samples)]

        def farey_vertices() -> Tuple[bool, dict]:
            truncation = halfplane.canonical_decoration(max_gen)
            wrong = [str(x) for x, point in truncation.vertices.items()
                     if point.s != x or point.delta != (1 if x.is_infinite else Fraction(1, x.q * x.q))]
            return not wrong, {'G': max_gen, 'vertices': len(truncation.vertices), 'wrong': wrong}

        def roundtrip(index: int, lambdas) -> Check:
            def check() -> Tuple[bool, dict]:
                squared = {key: value * value for key, value in lambdas.items()}
                built = halfplane.build_tessellation(squared, depth, squared=True)
                return halfplane.read_lambdas(built) == lambdas, {'G': depth, 'edges': len(lambdas)}
            return check

        def earthquake_family() -> Tuple[bool, dict]:
            s = Fraction(2)
            truncation = halfplane.lambda_family_action(s, 2)
            doe = frozenset((ZERO, INFINITY))
            scaled = all(value == (s * s if key == doe else 1) for key, value in truncation.lambdas.items())
            tangent = halfplane.lambda_family_tangent() == wavelets.mother_wavelet()
            return scaled and tangent and halfplane.lambda_family_is_c1(s), \
                {'s': s, 'doe_lambda': truncation.lambdas[doe], 'tangent_is_mother_wavelet': tangent}

        def peeled() -> Tuple[bool, dict]:
            # 顶点 h-长度直接计算与逐个剥耳累加一致
            vertices = halfplane.canonical_decoration(depth).vertices
            polygon = [vertices[x] for x in sorted(vertices, key=lambda x: x.key)]
            direct, peeled_sum = halfplane.polygon_h_lengths(polygon), halfplane.peeled_h_lengths(polygon)
            return direct == peeled_sum, {'G': depth, 'h_lengths': direct}

        def dyadic() -> Tuple[bool, dict]:
            level = min(max_gen, 6)
            points = [modular.dyadic_enumeration(n) for n in range(1 << (level + 1))]
            mapping = modular.tessellation_from_enumeration(points, level)
            wrong = [n for n, point in enumerate(points) if mapping.images[modular.farey_enumeration(n)] != point]
            return not wrong, {'G': level, 'images': len(mapping.images), 'wrong': wrong}

        cases = [('farey-vertices', farey_vertices), ('earthquake-family', earthquake_family), ('dyadic', dyadic),
                 ('peeled-h-lengths', peeled)]
        return cases + [(f'roundtrip-{index}', roundtrip(index, lambdas)) for index, lambdas in enumerate(inputs)]

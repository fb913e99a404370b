from fractions import Fraction
from itertools import combinations

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from farey_ppsl2.core import halfplane, modular, wavelets
from farey_ppsl2.entity import DecoratedPoint, ExtendedRational, Framing, RationalMatrix, TriangulatedPolygon
from farey_ppsl2.entity.entity_group import GEN_S, GEN_T, INFINITY, MINUS_ONE, ZERO

CATALAN = {4: 2, 5: 5, 6: 14, 7: 42, 8: 132}


def check_farey_vertex(x, point):
    assert point.s == x
    assert point.delta == (1 if x.is_infinite else Fraction(1, x.q * x.q))


def test_canonical_decoration():
    truncation = halfplane.canonical_decoration(6)
    assert len(truncation.vertices) == 2 ** 7
    for x, point in truncation.vertices.items():
        check_farey_vertex(x, point)
    assert all(value == 1 for value in halfplane.read_lambdas(truncation).values())


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_build_then_read(data):
    edges = modular.farey_edges(3)
    lambdas = {edge.key: Fraction(data.draw(st.integers(1, 7)), data.draw(st.integers(1, 7))) for edge in edges}
    squared = {key: value * value for key, value in lambdas.items()}
    built = halfplane.build_tessellation(squared, 3, squared=True)
    assert halfplane.read_lambdas(built) == lambdas


def test_build_rejects_missing_edge():
    lambdas = {edge.key: Fraction(1) for edge in modular.farey_edges(2)[:-1]}
    with pytest.raises(ValueError):
        halfplane.build_tessellation(lambdas, 2)


def test_build_rejects_non_square():
    lambdas = {edge.key: Fraction(2) for edge in modular.farey_edges(1)}
    with pytest.raises(ValueError):
        halfplane.build_tessellation(lambdas, 1, squared=True)


def test_lambda_length():
    first = DecoratedPoint(ExtendedRational(1, 1), Fraction(1))
    second = DecoratedPoint(ExtendedRational(2, 1), Fraction(1, 4))
    assert halfplane.lambda_length_sq(first, second) == 4
    assert halfplane.lambda_length(first, second) == 2
    with pytest.raises(ValueError):
        halfplane.lambda_length_sq(first, DecoratedPoint(ExtendedRational(1, 1), Fraction(2)))


@pytest.mark.parametrize('element', [GEN_S, GEN_T, GEN_S * GEN_T * GEN_T])
def test_lambda_length_is_invariant(element):
    first = DecoratedPoint(ExtendedRational(3, 1), Fraction(1, 9))
    second = DecoratedPoint(ExtendedRational(5, 2), Fraction(1, 4))
    matrix = RationalMatrix.from_group(element)
    moved = [halfplane.mobius_on_coordinates(point, matrix) for point in (first, second)]
    assert halfplane.lambda_length_sq(*moved) == halfplane.lambda_length_sq(first, second)


def test_ptolemy_and_h_lengths():
    assert halfplane.ptolemy_flip(1, 1, 1, 1, 1) == 2
    assert halfplane.ptolemy_flip(Fraction(2), 3, 5, 7, 1) == 31
    assert halfplane.h_length(Fraction(2), Fraction(1), Fraction(2)) == 1
    assert halfplane.cross_ratio_shear(1, 1, 1, 1) == 1
    assert halfplane.shear(2, 1, 1, 2) == 0


def test_earthquake_family():
    for s in (Fraction(2), Fraction(3, 2)):
        truncation = halfplane.lambda_family_action(s, 2)
        doe = frozenset((ZERO, INFINITY))
        for key, value in truncation.lambdas.items():
            assert value == (s * s if key == doe else 1)
        assert halfplane.lambda_family_is_c1(s)



def test_earthquake_family_pieces():
    assert all(matrix == RationalMatrix(1, 0, 0, 1) for _, matrix in halfplane.lambda_family(1))
    assert [start for start, _ in halfplane.lambda_family(2)] == [INFINITY, MINUS_ONE, ZERO, ExtendedRational.of(1, 1)]
    # h+2e, -h+2f, -h-2f, h-2e
    assert [piece.derivative_at_one() for _, piece in halfplane.LAMBDA_FAMILY] == \
        [(1, 2, 0, -1), (-1, 0, 2, 1), (-1, 0, -2, 1), (1, -2, 0, -1)]
    for s in (0, -1):
        with pytest.raises(ValueError):
            halfplane.lambda_family(s)


def test_earthquake_tangent_is_mother_wavelet():
    tangent = halfplane.lambda_family_tangent()
    # 相邻象限的导数互不相同，四段不会合并
    assert set(tangent.breakpoints) == {INFINITY, MINUS_ONE, ZERO, ExtendedRational.of(1, 1)}
    assert all(left != right for left, right in zip(tangent.values, tangent.values[1:] + tangent.values[:1]))
    assert tangent == wavelets.mother_wavelet()


@pytest.mark.parametrize('n', sorted(CATALAN))
def test_all_triangulations(n):
    assert len(set(halfplane.all_triangulations(n))) == CATALAN[n]


def test_square_flip():
    square = TriangulatedPolygon.fan(4)
    diagonal = frozenset((0, 2))
    assert halfplane.flipped_diagonal(square, diagonal) == frozenset((1, 3))
    assert halfplane.face_order(square, diagonal) == 2
    assert halfplane.face_order(TriangulatedPolygon.fan(4, doe=(0, 2)), diagonal) == 4


def test_pentagon():
    first, second = frozenset((0, 2)), frozenset((0, 3))
    assert halfplane.pentagon_order(TriangulatedPolygon.fan(5), first, second) == 5
    assert halfplane.pentagon_order(TriangulatedPolygon.fan(5, doe=(0, 2)), first, second) == 10


def test_commuting_flips():
    hexagon = TriangulatedPolygon(6, frozenset({frozenset((0, 2)), frozenset((3, 5)), frozenset((0, 3))}))
    assert halfplane.flips_commute(hexagon, frozenset((0, 2)), frozenset((3, 5)))
    with pytest.raises(ValueError):
        halfplane.flips_commute(hexagon, frozenset((0, 2)), frozenset((0, 3)))


def test_boundary_edge_cannot_flip():
    with pytest.raises(ValueError):
        halfplane.polygon_flip(TriangulatedPolygon.fan(5), frozenset((0, 1)))


def test_crossing_diagonals_rejected():
    with pytest.raises(ValueError):
        TriangulatedPolygon(4, frozenset({frozenset((0, 2)), frozenset((1, 3))}))


def test_insertion_updates_match_triangle_h_lengths():
    x = DecoratedPoint(ZERO, Fraction(1))
    new = DecoratedPoint(ExtendedRational.of(1, 2), Fraction(1, 4))
    y = DecoratedPoint(ExtendedRational.of(2, 1), Fraction(1))
    a, b, c = halfplane.lambda_length(x, new), halfplane.lambda_length(y, new), halfplane.lambda_length(x, y)
    assert (a, b, c) == (1, 3, 2)
    grow_x, grow_y, h_new = halfplane.insertion_update(a, b, c)
    assert halfplane.polygon_h_lengths([x, new, y]) == [grow_x, h_new, grow_y]
    assert (grow_x, grow_y, h_new) == (Fraction(3, 2), Fraction(1, 6), Fraction(2, 3))


@pytest.mark.parametrize('max_gen', [1, 2, 3])
def test_peeled_h_lengths_match_direct(max_gen):
    vertices = halfplane.canonical_decoration(max_gen).vertices
    polygon = [vertices[x] for x in sorted(vertices, key=lambda x: x.key)]
    direct = halfplane.polygon_h_lengths(polygon)
    assert halfplane.peeled_h_lengths(polygon) == direct
    assert all(isinstance(value, Fraction) for value in direct)


def test_stabilize_with_constant_framing_only_inserts():
    framing = Framing.standard()
    coords = [DecoratedPoint(ZERO, Fraction(1)), DecoratedPoint(ExtendedRational.of(1, 1), Fraction(1))]
    new = DecoratedPoint(ExtendedRational.of(1, 2), Fraction(1, 4))
    assert halfplane.stabilize(coords, new, framing, framing) == [coords[0], new, coords[1]]
    with pytest.raises(ValueError):
        halfplane.stabilize(coords, coords[1], framing, framing)


def test_truncation_json_schema():
    truncation = halfplane.canonical_decoration(2)
    document = truncation.to_json()
    assert document['G'] == 2
    assert all(set(vertex) == {'p', 'q', 's', 'delta'} for vertex in document['vertices'])
    assert {'p': '1', 'q': '0', 's': '1/0', 'delta': '1/1'} in document['vertices']
    assert document['edges'][0] == {'label': 'I', 'lambda_sq': '1/1'}
    assert len(document['edges']) == len(modular.farey_edges(2))
    assert all(edge['lambda_sq'] == '1/1' for edge in document['edges'])
    for key, label in truncation.labels.items():
        assert frozenset(modular.edge_endpoints(modular.word_to_matrix(label))) == key
    deformed = halfplane.lambda_family_action(Fraction(2), 1).to_json()
    assert deformed['edges'][0] == {'label': 'I', 'lambda_sq': '16/1'}


def test_stabilize_with_clockwise_framing_is_equivariant():
    clockwise = Framing(ZERO, ExtendedRational.of(1, 1), INFINITY)
    middle = Framing(MINUS_ONE, ZERO, ExtendedRational.of(3, 1))
    coords = [DecoratedPoint(ZERO, Fraction(1)), DecoratedPoint(ExtendedRational.of(2, 1), Fraction(1, 4)),
              DecoratedPoint(INFINITY, Fraction(1))]
    new = DecoratedPoint(ExtendedRational.of(1, 1), Fraction(1, 2))
    direct = halfplane.stabilize(coords, new, Framing.standard(), clockwise)
    assert len(direct) == 4

    matrix = halfplane.transition(Framing.standard(), clockwise)
    moved = [halfplane.mobius_on_coordinates(point, matrix) for point in (*coords, new)]
    assert sorted(moved, key=lambda point: point.s.key) == direct
    for (first, second), (image_first, image_second) in zip(combinations((*coords, new), 2), combinations(moved, 2)):
        assert halfplane.lambda_length_sq(image_first, image_second) == halfplane.lambda_length_sq(first, second)

    in_steps = halfplane.stabilize(coords, new, Framing.standard(), middle)
    onward = halfplane.transition(middle, clockwise)
    in_steps = [halfplane.mobius_on_coordinates(point, onward) for point in in_steps]
    assert sorted(in_steps, key=lambda point: point.s.key) == direct

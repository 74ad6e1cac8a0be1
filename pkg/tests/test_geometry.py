"""Polygon validation, normalization, rotation and local queries."""
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import L_SHAPE, SQUARE, random_polygon
from stripnest.geometry import (
    CONVEX,
    REFLEX,
    DegenerateArea,
    Polygon,
    SelfIntersecting,
    TooFewVertices,
    aabb,
    area,
    direction_in_interior,
    rotate,
    signed_area,
    trig,
    validate_and_normalize,
    vertex_kind,
)


class TestValidation:
    def test_too_few_vertices(self):
        with pytest.raises(TooFewVertices):
            validate_and_normalize([(0, 0), (1, 1)])

    def test_self_intersecting_bowtie(self):
        # The symmetric bowtie has zero signed area, so either failure
        # mode is a correct rejection.
        with pytest.raises((SelfIntersecting, DegenerateArea)):
            validate_and_normalize([(0, 0), (2, 2), (2, 0), (0, 2)])

    def test_self_intersecting_nonzero_area(self):
        with pytest.raises(SelfIntersecting):
            validate_and_normalize([(0, 0), (4, 0), (4, 3), (2, -1), (0, 3)])

    def test_degenerate_collinear(self):
        with pytest.raises((DegenerateArea, TooFewVertices, SelfIntersecting)):
            validate_and_normalize([(0, 0), (1, 1), (2, 2)])

    def test_spike_rejected(self):
        with pytest.raises(SelfIntersecting):
            validate_and_normalize([(0, 0), (4, 0), (2, 0), (4, 2), (0, 2)])

    def test_repeated_vertices_dropped(self):
        p = validate_and_normalize([(0, 0), (0, 0), (2, 0), (2, 2), (2, 2), (0, 2), (0, 0)])
        assert len(p) == 4

    def test_collinear_vertices_dropped(self):
        p = validate_and_normalize([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])
        assert len(p) == 4

    def test_clockwise_input_reversed(self):
        p = validate_and_normalize(list(reversed(SQUARE)))
        assert signed_area(p.vertices) > 0

    def test_anchored_at_origin(self):
        p = validate_and_normalize([(5, 7), (8, 7), (8, 9), (5, 9)])
        assert aabb(p)[:2] == (0.0, 0.0)
        assert p.width == 3.0 and p.height == 2.0

    def test_random_polygons_are_ccw_and_anchored(self):
        rng = random.Random(7)
        for _ in range(50):
            p = random_polygon(rng)
            assert signed_area(p.vertices) > 0
            assert min(x for x, _ in p.vertices) == pytest.approx(0.0, abs=1e-12)
            assert min(y for _, y in p.vertices) == pytest.approx(0.0, abs=1e-12)


class TestTrig:
    def test_exact_at_axis_multiples(self):
        assert trig(0) == (1.0, 0.0)
        assert trig(90) == (0.0, 1.0)
        assert trig(180) == (-1.0, 0.0)
        assert trig(270) == (0.0, -1.0)
        assert trig(360) == (1.0, 0.0)
        assert trig(-90) == (0.0, -1.0)

    def test_general_angle(self):
        c, s = trig(30)
        assert c == pytest.approx(math.sqrt(3) / 2)
        assert s == pytest.approx(0.5)


class TestRotate:
    def test_rotate_90_integer_exact(self):
        p = validate_and_normalize([(0, 0), (3, 0), (3, 1), (0, 1)])
        r = rotate(p, 90)
        assert r.width == 1.0 and r.height == 3.0
        assert all(x == int(x) and y == int(y) for x, y in r.vertices)

    def test_rotate_identity(self):
        p = validate_and_normalize(L_SHAPE)
        assert rotate(p, 0).vertices == p.vertices
        assert rotate(p, 360).vertices == p.vertices

    def test_rotate_preserves_area(self):
        p = validate_and_normalize(L_SHAPE)
        for theta in (37.0, 90.0, 123.4, 180.0, 271.0):
            assert area(rotate(p, theta)) == pytest.approx(area(p))

    @given(st.floats(min_value=0.0, max_value=359.9), st.integers(0, 10 ** 6))
    @settings(max_examples=60, deadline=None)
    def test_rotate_preserves_area_random(self, theta, seed):
        p = random_polygon(random.Random(seed))
        assert area(rotate(p, theta)) == pytest.approx(area(p), rel=1e-9)


class TestVertexKind:
    def test_square_all_convex(self):
        p = validate_and_normalize(SQUARE)
        assert all(vertex_kind(p, i) == CONVEX for i in range(4))

    def test_l_shape_reflex(self):
        p = validate_and_normalize(L_SHAPE)
        kinds = [vertex_kind(p, i) for i in range(len(p))]
        assert kinds.count(REFLEX) == 1
        reflex_i = kinds.index(REFLEX)
        assert p.vertices[reflex_i] == (2.0, 2.0)


class TestDirectionInInterior:
    def test_convex_corner(self):
        p = validate_and_normalize(SQUARE)
        i = p.vertices.index((0.0, 0.0))
        assert direction_in_interior(p, i, (1, 1))
        assert not direction_in_interior(p, i, (-1, -1))
        # Tangent to an edge counts as outside.
        assert not direction_in_interior(p, i, (1, 0))
        assert not direction_in_interior(p, i, (0, 1))

    def test_reflex_corner_union_of_half_planes(self):
        p = validate_and_normalize(L_SHAPE)
        i = p.vertices.index((2.0, 2.0))
        assert direction_in_interior(p, i, (-1, 1))
        assert direction_in_interior(p, i, (1, -1))
        assert direction_in_interior(p, i, (-1, -1))
        assert not direction_in_interior(p, i, (1, 1))


class TestPolygonBasics:
    def test_edges_wrap(self):
        p = validate_and_normalize(SQUARE)
        assert p.edge(3) == (p.vertices[3], p.vertices[0])

    def test_signed_area_square(self):
        assert signed_area([(0, 0), (2, 0), (2, 2), (0, 2)]) == 4.0
        assert signed_area([(0, 2), (2, 2), (2, 0), (0, 0)]) == -4.0

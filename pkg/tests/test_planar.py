import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plspan.exact import signed_area2
from plspan.families import gen_planar_ngon
from plspan.mesh import check_embedded, topology
from plspan.planar import NotPlanar, NotSimple, ear_clip, triangulate_planar

NONCONVEX = {
    "L": [(0, 0), (4, 0), (4, 1), (1, 1), (1, 4), (0, 4)],
    "comb": [(0, 0), (6, 0), (6, 3), (5, 3), (5, 1), (4, 1), (4, 3), (3, 3), (3, 1), (2, 1),
             (2, 3), (0, 3)],
    "star": [(0, 3), (1, 1), (3, 0), (1, -1), (0, -3), (-1, -1), (-3, 0), (-1, 1)],
    "arrow": [(0, 0), (3, 2), (6, 0), (3, 5)],
    "spiral": [(0, 0), (5, 0), (5, 5), (1, 5), (1, 2), (3, 2), (3, 3), (2, 3), (2, 4), (4, 4),
               (4, 1), (0, 1)],
}


def area_of(pts, tris):
    return sum(abs(signed_area2([pts[i] for i in t])) for t in tris)


@pytest.mark.parametrize("name", sorted(NONCONVEX))
def test_nonconvex_ear_clipping(name):
    pts = NONCONVEX[name]
    tris = ear_clip(pts)
    assert len(tris) == len(pts) - 2
    # shoelace oracle: the triangles tile the polygon
    assert area_of(pts, tris) == abs(signed_area2(pts))
    assert all(signed_area2([pts[i] for i in t]) > 0 for t in tris)


def test_clockwise_input_and_straight_vertex():
    pts = [(0, 0), (0, 2), (2, 2), (2, 0), (1, 0)]
    tris = ear_clip(pts)
    assert len(tris) == 3 and area_of(pts, tris) == 8


@pytest.mark.parametrize("n", range(3, 21))
def test_convex_ngons(n):
    M = triangulate_planar(gen_planar_ngon(n))
    assert M.t == n - 2 and topology(M).chi == 1


def test_planar_polygon_in_r3_embedded():
    M = triangulate_planar([(0, 0, 0), (4, 0, 0), (4, 1, 1), (1, 1, 1), (1, 4, 4), (0, 4, 4)])
    assert M.t == 4 and check_embedded(M) == []


def test_rejections():
    with pytest.raises(NotPlanar):
        triangulate_planar([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    with pytest.raises(NotSimple):
        triangulate_planar([(0, 0), (2, 2), (2, 0), (0, 2)])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=3, max_size=14))
def test_star_shaped_polygons(radii):
    # radial polygon around the origin; exact directions from a rational circle parametrization
    n = len(radii)
    pts = []
    for k, r in enumerate(radii):
        t = F(math.tan(math.pi * (k + F(1, 2)) / n - math.pi / 2)).limit_denominator(50)
        pts.append((r * (1 - t * t) / (1 + t * t), r * 2 * t / (1 + t * t)))
    if len(set(pts)) < n or signed_area2(pts) == 0:
        return
    try:
        tris = ear_clip(pts)
    except NotSimple:
        return
    assert len(tris) == n - 2
    assert area_of(pts, tris) == abs(signed_area2(pts))

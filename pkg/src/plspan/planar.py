"""Ear-clipping triangulation of simple planar polygons (no added vertices)."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .exact import Point, _bbox_disjoint, orient2d, rank, seg_seg_intersect_2d, signed_area2, sub
from .mesh import Mesh
from .polygon import Polygon, edges_adjacent


class NotPlanar(ValueError):
    pass


class NotSimple(ValueError):
    pass


def _in_closed_triangle(p, a, b, c) -> bool:
    return orient2d(a, b, p) >= 0 and orient2d(b, c, p) >= 0 and orient2d(c, a, p) >= 0


def ear_clip(pts: Sequence[Point]) -> list[tuple[int, int, int]]:
    """Triangulate a simple 2D polygon into ``len(pts) - 2`` triangles.

    Triangles come out counter-clockwise. Straight (180 degree) vertices
    are allowed; they are never used as ear tips.
    """
    n = len(pts)
    if n < 3:
        raise NotSimple("fewer than three vertices")
    area = signed_area2(pts)
    if area == 0:
        raise NotSimple("zero area")
    idx = list(range(n)) if area > 0 else list(reversed(range(n)))
    prev = {idx[k]: idx[k - 1] for k in range(n)}
    nxt = {idx[k]: idx[(k + 1) % n] for k in range(n)}
    alive = set(idx)

    def is_ear(i: int) -> bool:
        a, b, c = prev[i], i, nxt[i]
        if orient2d(pts[a], pts[b], pts[c]) <= 0:
            return False
        pa, pb, pc = pts[a], pts[b], pts[c]
        for j in alive:
            if j in (a, b, c):
                continue
            q = pts[j]
            if _in_closed_triangle(q, pa, pb, pc):
                return False
        return True

    ear = {i: is_ear(i) for i in idx}
    out = []
    cur = idx[0]
    while len(alive) > 3:
        for _ in range(len(alive)):
            if ear[cur]:
                break
            cur = nxt[cur]
        else:
            raise NotSimple("no ear found; polygon is not simple")
        a, c = prev[cur], nxt[cur]
        out.append((a, cur, c))
        alive.discard(cur)
        nxt[a], prev[c] = c, a
        ear[a], ear[c] = is_ear(a), is_ear(c)
        cur = c
    a = next(iter(alive))
    b = nxt[a]
    c = nxt[b]
    if orient2d(pts[a], pts[b], pts[c]) <= 0:
        raise NotSimple("degenerate final triangle")
    out.append((a, b, c))
    return out


def is_simple_2d(pts: Sequence[Point]) -> bool:
    n = len(pts)
    segs = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    if len(set(pts)) != n:
        return False
    for i, j in combinations(range(n), 2):
        if _bbox_disjoint(segs[i], segs[j]):
            continue
        hit = seg_seg_intersect_2d(segs[i], segs[j])
        if hit is None:
            continue
        if edges_adjacent(i, j, n):
            shared = pts[j] if j == i + 1 else pts[i]
            if getattr(hit, "point", None) == shared:
                continue
        return False
    return True


def planar_chart(points: Sequence[Point]) -> tuple[int, int]:
    """Two coordinate axes onto which the (coplanar) points project injectively."""
    base = points[0]
    vecs = [sub(p, base) for p in points[1:]]
    if rank(vecs) != 2:
        raise NotPlanar("vertices do not span exactly a plane")
    d = len(base)
    for i, j in combinations(range(d), 2):
        if rank([(v[i], v[j]) for v in vecs]) == 2:
            return i, j
    raise NotPlanar("no coordinate chart")  # unreachable for rank 2


def triangulate_planar(P: Polygon | Sequence[Point]) -> Mesh:
    verts = tuple(P.vertices) if isinstance(P, Polygon) else tuple(map(tuple, P))
    i, j = planar_chart(verts)
    pts2 = [(v[i], v[j]) for v in verts]
    if not is_simple_2d(pts2):
        raise NotSimple("polygon is not simple")
    return Mesh(verts, tuple(ear_clip(pts2)))

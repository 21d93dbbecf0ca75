"""Spanning disks and surfaces for polygons in R^d, d >= 4."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .diagram import ExhaustedAttempts
from .exact import (DimensionMismatch, Point, add, det, fmt, inverse, matvec, rank, scale,
                    solve_affine, sub)
from .families import gen_planar_ngon
from .mesh import (Mesh, MeshError, NonManifold, check_boundary_subdivision, check_complementary,
                   check_embedded, is_disk, polygon_position, topology)
from .polygon import Polygon, bounding_box, check_polygon, validate
from .seifert import ValidationFailed, seifert_surface

log = logging.getLogger(__name__)


# -- bad set ----------------------------------------------------------------------

@dataclass(frozen=True)
class BadFlat:
    """Affine span of the lines through edges ``i`` and ``j``."""
    i: int
    j: int
    base: Point
    directions: tuple

    @property
    def dim(self) -> int:
        return len(self.directions)

    def contains(self, p: Point) -> bool:
        if not self.directions:
            return tuple(p) == tuple(self.base)
        rows = [[d[k] for d in self.directions] for k in range(len(p))]
        return solve_affine(rows, sub(p, self.base)) is not None


def bad_set(P: Polygon) -> list[BadFlat]:
    """One flat per edge pair: every line meeting both edge lines lies in it."""
    out = []
    for i in range(P.n):
        a, b = P.edge(i)
        for j in range(i + 1, P.n):
            c, e = P.edge(j)
            vecs = [sub(b, a), sub(c, a), sub(e, a)]
            basis = _independent(vecs)
            out.append(BadFlat(i, j, a, tuple(basis)))
    return out


def _independent(vecs) -> list:
    basis = []
    for v in vecs:
        if rank(basis + [v]) > len(basis):
            basis.append(v)
    return basis


def _avoids_bad_set(flats: Sequence[BadFlat], points: Sequence[Point]) -> bool:
    return not any(f.contains(p) for f in flats if f.dim < len(points[0]) for p in points)


# -- reports ----------------------------------------------------------------------

@dataclass
class HigherResult:
    kind: str
    mesh: Mesh
    attempts: int
    checks: dict
    topology: object
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is True or v == [] for v in self.checks.values())

    def to_json(self) -> dict:
        return {"kind": self.kind, "triangle_count": self.mesh.t, "attempts": self.attempts,
                "checks": self.checks, "topology": self.topology.to_json(), **self.extra}


def _disk_checks(M: Mesh) -> tuple[bool, object]:
    try:
        rep = topology(M)
    except NonManifold:
        return False, None
    return is_disk(rep), rep


# -- coning (d >= 5) --------------------------------------------------------------

def cone_mesh(P: Polygon, apex: Sequence) -> Mesh:
    verts = tuple(P.vertices) + (tuple(Fraction(x) for x in apex),)
    z = P.n
    return Mesh(verts, tuple((j, (j + 1) % P.n, z) for j in range(P.n)))


def cone(P: Polygon, seed: int = 0, max_attempts: int = 100,
         workers: Optional[int] = None) -> HigherResult:
    """Cone ``P`` to an integer apex; accept only once embeddedness is verified."""
    if P.dim < 5:
        raise DimensionMismatch("coning needs d >= 5")
    rng = random.Random(seed)
    lo, hi = bounding_box(P.vertices)
    r = int(max(max(abs(x) for x in lo), max(abs(x) for x in hi))) + 2
    for attempt in range(1, max_attempts + 1):
        z = tuple(rng.randint(-r, r) for _ in range(P.dim))
        try:
            M = cone_mesh(P, z)
        except MeshError:
            continue
        bad = check_embedded(M, workers)
        disk, rep = _disk_checks(M)
        if bad or not disk:
            continue
        checks = {"embedded": bad, "complementary": check_complementary(M, P), "disk_topology": disk}
        return HigherResult("cone", M, attempt, checks, rep,
                            {"apex": [fmt(x) for x in M.vertices[-1]]})
    raise ExhaustedAttempts(max_attempts, "apex")


# -- annulus plus convex polygon (R^4) ---------------------------------------------

def annulus_mesh(P: Polygon, Q: Sequence[Point]) -> Mesh:
    """Annulus from P to Q (same vertex count) plus a fan of Q to its centroid."""
    n = P.n
    if len(Q) != n:
        raise ValueError("Q must have as many vertices as P")
    Q = [tuple(Fraction(x) for x in q) for q in Q]
    center = tuple(sum(c) / n for c in zip(*Q))
    verts = tuple(P.vertices) + tuple(Q) + (center,)
    w = lambda j: n + j % n
    v0 = 2 * n
    tris = []
    for j in range(n):
        tris.append((j, (j + 1) % n, w(j + 1)))
        tris.append((j, w(j), w(j + 1)))
    for j in range(n):
        tris.append((w(j), w(j + 1), v0))
    return Mesh(verts, tuple(tris))


def _sample_plane_polygon(rng: random.Random, P: Polygon, flats, k: int):
    """A convex k-gon in a random 2-plane beyond P along the first axis."""
    d = P.dim
    lo, hi = bounding_box(P.vertices)
    span = int(max(h - l for l, h in zip(lo, hi))) + 1
    x1 = hi[0] + 1 + rng.randint(1, span)
    while True:
        f1 = (0,) + tuple(rng.randint(-3, 3) for _ in range(d - 1))
        f2 = (0,) + tuple(rng.randint(-3, 3) for _ in range(d - 1))
        if rank([f1, f2]) == 2:
            break
    centre = (Fraction(x1),) + tuple(Fraction(rng.randint(int(l) - 1, int(h) + 1))
                                     for l, h in zip(lo[1:], hi[1:]))
    shape = gen_planar_ngon(k).vertices
    size = Fraction(span, 2)
    for _ in range(6):
        Q = [add(centre, add(scale(f1, size * x), scale(f2, size * y))) for x, y in shape]
        pts = Q + [tuple(sum(c) / k for c in zip(*Q))]
        if _avoids_bad_set(flats, pts):
            return Q
        size /= 2
    return None


def annulus4(P: Polygon, seed: int = 0, max_attempts: int = 100) -> HigherResult:
    """Immersed disk with 3n triangles whose interior misses ``P``."""
    if P.dim != 4:
        raise DimensionMismatch("annulus4 needs a polygon in R^4")
    rng = random.Random(seed)
    flats = bad_set(P)
    for attempt in range(1, max_attempts + 1):
        Q = _sample_plane_polygon(rng, P, flats, P.n)
        if Q is None:
            continue
        try:
            M = annulus_mesh(P, Q)
        except MeshError:
            continue
        bad = check_complementary(M, P)
        disk, rep = _disk_checks(M)
        if bad or not disk:
            continue
        checks = {"complementary": bad, "disk_topology": disk}
        return HigherResult("annulus4", M, attempt, checks, rep,
                            {"Q": [[fmt(x) for x in q] for q in Q]})
    raise ExhaustedAttempts(max_attempts, "polygon Q")


# -- embedded surface via a hyperplane projection (R^4) ------------------------------

def _random_basis(rng: random.Random, d: int = 4):
    while True:
        cols = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(d)]
        if det(cols) != 0:
            return cols


def embed4_via_projection(P: Polygon, seed: int = 0, max_attempts: int = 50,
                          workers: Optional[int] = None) -> HigherResult:
    """Seifert surface of a hyperplane shadow of P, joined to P by a vertical wall.

    Coordinates are taken in a random integer basis ``b1, b2, b3, h``; the
    shadow lives in the hyperplane one unit below P along ``h``.
    """
    if P.dim != 4:
        raise DimensionMismatch("embed4 needs a polygon in R^4")
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        cols = _random_basis(rng)
        to_world = [[cols[j][i] for j in range(4)] for i in range(4)]
        to_local = inverse(to_world)
        local = [matvec(to_local, v) for v in P.vertices]
        floor = min(p[3] for p in local) - 1
        shadow = [p[:3] for p in local]
        if check_polygon(shadow):
            continue
        Pstar = validate(shadow)
        try:
            S = seifert_surface(Pstar, seed=seed, workers=workers)
        except (ValidationFailed, ExhaustedAttempts) as exc:
            log.info("shadow surface failed: %s", exc)
            continue
        M, wall_tris = _attach_wall(P, Pstar, S.mesh, to_world, floor)
        checks = {
            "embedded": check_embedded(M, workers),
            "boundary_subdivision": check_boundary_subdivision(M, P),
        }
        disk_ok, rep = _disk_checks(M)
        if checks["embedded"] or checks["boundary_subdivision"] or rep is None:
            continue
        checks["orientable"] = rep.orientable
        checks["within_24n2"] = M.t <= 24 * P.n * P.n
        extra = {"seifert_triangles": S.mesh.t, "wall_triangles": wall_tris,
                 "bound_24n2": 24 * P.n * P.n, "genus": fmt(Fraction(rep.genus)),
                 "shadow": S.to_json()}
        return HigherResult("embed4", M, attempt, checks, rep, extra)
    raise ExhaustedAttempts(max_attempts, "projection")


def _attach_wall(P: Polygon, Pstar: Polygon, S: Mesh, to_world, floor) -> tuple[Mesh, int]:
    """Lift the shadow surface into R^4 and add two wall triangles per boundary edge."""
    lift = lambda p: matvec(to_world, tuple(p) + (floor,))
    verts = [lift(p) for p in S.vertices]
    tris = list(S.triangles)
    cycle = topology(S).boundary_cycles[0]
    top = []
    for v in cycle:
        pos = polygon_position(Pstar, S.vertices[v])
        i = int(pos)
        top.append(len(verts))
        verts.append(P.point_at(i, pos - i))
    k = len(cycle)
    for a in range(k):
        b = (a + 1) % k
        tris.append((cycle[a], cycle[b], top[b]))
        tris.append((cycle[a], top[b], top[a]))
    return Mesh(tuple(verts), tuple(tris)), 2 * k

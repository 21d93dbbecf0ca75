"""Knot diagrams: general-position projection frames, crossings, writhe."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact import (STANDARD_FRAME, Overlap, Point, ProjectionFrame,
                    cross3, det2, fmt, seg_seg_intersect_2d, sign, sub)
from .polygon import Polygon, edges_adjacent


class GeneralPositionViolated(ValueError):
    def __init__(self, condition: str, detail: str):
        self.condition = condition
        super().__init__(f"({condition}) {detail}")


class ExhaustedAttempts(RuntimeError):
    def __init__(self, attempts: int, what: str = "frame"):
        self.attempts = attempts
        super().__init__(f"no acceptable {what} after {attempts} attempts")


@dataclass(frozen=True)
class Crossing:
    over_edge: int
    under_edge: int
    point2d: Point
    t_over: Fraction
    t_under: Fraction
    sign: int

    @property
    def params(self) -> tuple[Fraction, Fraction]:
        return self.t_over, self.t_under

    def param_on(self, edge: int) -> Fraction:
        if edge == self.over_edge:
            return self.t_over
        if edge == self.under_edge:
            return self.t_under
        raise KeyError(edge)

    def to_json(self) -> dict:
        return {"over": self.over_edge, "under": self.under_edge, "sign": self.sign,
                "point2d": [fmt(c) for c in self.point2d],
                "params": [fmt(self.t_over), fmt(self.t_under)]}


@dataclass(frozen=True)
class KnotDiagram:
    polygon: Polygon
    frame: ProjectionFrame
    crossings: tuple
    per_edge_crossings: tuple   # per edge: crossing indices sorted by parameter

    @property
    def n(self) -> int:
        return self.polygon.n

    @property
    def c(self) -> int:
        return len(self.crossings)

    def projected_vertices(self) -> list[Point]:
        return [self.frame.project(v) for v in self.polygon.vertices]

    def to_json(self) -> dict:
        return {"n": self.n, "c": self.c, "writhe": writhe(self),
                "frame": self.frame.to_json(),
                "crossings": [x.to_json() for x in self.crossings]}


def project(P: Polygon, frame: ProjectionFrame) -> KnotDiagram:
    """Crossings of ``P`` under ``frame``; raises if general position fails."""
    if P.dim != 3:
        raise ValueError("knot diagrams need a polygon in R^3")
    n = P.n
    pv = [frame.project(v) for v in P.vertices]
    segs = [(pv[i], pv[(i + 1) % n]) for i in range(n)]
    for i, (a, b) in enumerate(segs):
        if a == b:
            raise GeneralPositionViolated("a", f"edge {i} projects to a point")
    if len(set(pv)) != n:
        raise GeneralPositionViolated("f", "two vertices project to the same point")
    orient = 1 if frame.det > 0 else -1
    found = []
    for i in range(n):
        for j in range(i + 1, n):
            hit = seg_seg_intersect_2d(segs[i], segs[j])
            if hit is None:
                continue
            if isinstance(hit, Overlap):
                raise GeneralPositionViolated("b", f"edges {i} and {j} overlap")
            if edges_adjacent(i, j, n):
                shared = pv[j] if j == i + 1 else pv[i]
                if hit.point != shared:
                    raise GeneralPositionViolated("d", f"adjacent edges {i}, {j} meet twice")
                continue
            if not (0 < hit.t1 < 1 and 0 < hit.t2 < 1):
                raise GeneralPositionViolated("f", f"vertex image on edge pair {i}, {j}")
            hi = frame.height(P.point_at(i, hit.t1))
            hj = frame.height(P.point_at(j, hit.t2))
            if hi == hj:
                raise GeneralPositionViolated("g", f"edges {i}, {j} meet in space")
            if hi > hj:
                over, under, to, tu = i, j, hit.t1, hit.t2
            else:
                over, under, to, tu = j, i, hit.t2, hit.t1
            s = sign(det2(sub(segs[over][1], segs[over][0]), sub(segs[under][1], segs[under][0])))
            found.append(Crossing(over, under, hit.point, to, tu, s * orient))
    pts = set()
    for x in found:
        if x.point2d in pts:
            raise GeneralPositionViolated("e", f"three edges through {x.point2d}")
        pts.add(x.point2d)
    per_edge = []
    for e in range(n):
        idx = [k for k, x in enumerate(found) if e in (x.over_edge, x.under_edge)]
        idx.sort(key=lambda k: found[k].param_on(e))
        per_edge.append(tuple(idx))
    D = KnotDiagram(P, frame, tuple(found), tuple(per_edge))
    assert D.c <= n * (n - 3) // 2
    return D


def frame_from_direction(w) -> ProjectionFrame:
    """Orthogonal integer frame with height direction ``w`` and det > 0."""
    a, b, c = (Fraction(x) for x in w)
    u = (-b, a, Fraction(0)) if (a, b) != (0, 0) else (Fraction(1), Fraction(0), Fraction(0))
    v = cross3(w, u)
    return ProjectionFrame(u, v, (a, b, c))


def candidate_frames(seed: int, standard_first: bool = True):
    """Deterministic stream of frames; the sampling grid grows with the count."""
    rng = random.Random(seed)
    if standard_first:
        yield STANDARD_FRAME
    k = 0
    while True:
        r = 1 + k // 8
        w = (0, 0, 0)
        while w == (0, 0, 0):
            w = tuple(rng.randint(-r, r) for _ in range(3))
        yield frame_from_direction(w)
        k += 1


def find_frame(P: Polygon, seed: int = 0, max_attempts: int = 200,
               standard_first: bool = True) -> ProjectionFrame:
    return find_diagram(P, seed, max_attempts, standard_first).frame


def find_diagram(P: Polygon, seed: int = 0, max_attempts: int = 200,
                 standard_first: bool = True) -> KnotDiagram:
    frames = candidate_frames(seed, standard_first)
    for _ in range(max_attempts):
        try:
            return project(P, next(frames))
        except GeneralPositionViolated:
            continue
    raise ExhaustedAttempts(max_attempts)


def writhe(D: KnotDiagram) -> int:
    return sum(x.sign for x in D.crossings)


def crossing_count(D: KnotDiagram) -> int:
    c = len(D.crossings)
    assert c <= D.n * (D.n - 3) // 2
    return c


def gauss_code(D: KnotDiagram) -> list[tuple[int, str]]:
    """(crossing index, 'O' or 'U') in traversal order."""
    code = []
    for e in range(D.n):
        for k in D.per_edge_crossings[e]:
            code.append((k, "O" if D.crossings[k].over_edge == e else "U"))
    return code


def sampled_diagrams(P: Polygon, count: int, seed: int = 0,
                     max_attempts: Optional[int] = None) -> list[KnotDiagram]:
    """``count`` diagrams from distinct random general-position frames."""
    frames = candidate_frames(seed, standard_first=False)
    out, seen = [], set()
    limit = max_attempts or 50 * count
    for _ in range(limit):
        f = next(frames)
        if f.w in seen:
            continue
        seen.add(f.w)
        try:
            out.append(project(P, f))
        except GeneralPositionViolated:
            continue
        if len(out) == count:
            return out
    raise ExhaustedAttempts(limit)

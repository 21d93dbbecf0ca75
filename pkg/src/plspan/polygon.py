"""Closed embedded polygons: validation, text I/O and translation."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import (DimensionMismatch, Point, ProjectionFrame, _bbox_disjoint,
                    add, dot, fmt, rank, rational, scale, simplex_intersection, sub)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Issue:
    kind: str            # NotClosedTooShort | SelfIntersection | CollinearAdjacent | DuplicateVertex
    indices: tuple = ()

    def __str__(self):
        return f"{self.kind}({', '.join(map(str, self.indices))})"

    def to_json(self):
        return {"kind": self.kind, "indices": list(self.indices)}


class InvalidPolygon(ValueError):
    def __init__(self, issues: Sequence[Issue]):
        self.issues = list(issues)
        super().__init__("; ".join(map(str, self.issues)))


class PolygonParseError(ValueError):
    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__(f"line {line}: {msg}")


@dataclass(frozen=True)
class Polygon:
    """Validated closed polygon. Edge ``i`` runs from vertex ``i`` to ``i+1 mod n``.

    Construct through :func:`validate`; the constructor does not check.
    """
    vertices: tuple

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i % self.n], self.vertices[(i + 1) % self.n]

    def edges(self) -> list[tuple[Point, Point]]:
        return [self.edge(i) for i in range(self.n)]

    def point_at(self, i: int, t) -> Point:
        a, b = self.edge(i)
        return tuple(x + t * (y - x) for x, y in zip(a, b))

    def reversed(self) -> "Polygon":
        return Polygon(tuple(reversed(self.vertices)))

    def translated(self, offset: Point) -> "Polygon":
        return Polygon(tuple(add(v, offset) for v in self.vertices))


def edges_adjacent(i: int, j: int, n: int) -> bool:
    return (i - j) % n in (1, n - 1)


def _collinear(a: Point, b: Point, c: Point) -> bool:
    return rank([sub(b, a), sub(c, b)]) < 2


def check_polygon(raw: Sequence[Sequence]) -> list[Issue]:
    """Every violated invariant, with witnessing indices. Empty means valid."""
    try:
        verts = [tuple(rational(c) for c in v) for v in raw]
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad coordinate: {exc}") from None
    n = len(verts)
    if n < 3:
        return [Issue("NotClosedTooShort", (n,))]
    d = len(verts[0])
    if d < 2 or any(len(v) != d for v in verts):
        raise DimensionMismatch("all vertices need the same dimension >= 2")
    issues: list[Issue] = []
    for i in range(n):
        if verts[i] == verts[(i + 1) % n]:
            issues.append(Issue("DuplicateVertex", (i,)))
    if issues:
        return issues
    for i in range(n):
        a, b, c = verts[i - 1], verts[i], verts[(i + 1) % n]
        if _collinear(a, b, c) and dot(sub(b, a), sub(c, b)) > 0:
            issues.append(Issue("CollinearAdjacent", (i,)))
    segs = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            A, B = segs[i], segs[j]
            if _bbox_disjoint(A, B):
                continue
            ext = simplex_intersection(A, B)
            if not ext:
                continue
            if edges_adjacent(i, j, n):
                # shared vertex: end of one edge is the start of the other
                shared = verts[j] if j == i + 1 else verts[i]
                pts = [tuple(la[0] * A[0][k] + la[1] * A[1][k] for k in range(d)) for la, _ in ext]
                if all(p == shared for p in pts):
                    continue
            issues.append(Issue("SelfIntersection", (i, j)))
    return issues


def merge_collinear(raw: Sequence[Sequence]) -> list[Point]:
    """Drop vertices where the polygon goes straight through."""
    verts = [tuple(rational(c) for c in v) for v in raw]
    changed = True
    while changed and len(verts) > 3:
        changed = False
        for i in range(len(verts)):
            a, b, c = verts[i - 1], verts[i], verts[(i + 1) % len(verts)]
            if a != b and b != c and _collinear(a, b, c) and dot(sub(b, a), sub(c, b)) > 0:
                log.warning("merging collinear edges at vertex %s", i)
                del verts[i]
                changed = True
                break
    return verts


def validate(raw: Sequence[Sequence], merge: bool = False) -> Polygon:
    if merge:
        raw = merge_collinear(raw)
    issues = check_polygon(raw)
    if issues:
        raise InvalidPolygon(issues)
    return Polygon(tuple(tuple(rational(c) for c in v) for v in raw))


# -- text format ---------------------------------------------------------------

def parse_polygon_text(text: str) -> list[tuple]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if body:
            rows.append((lineno, body.split()))
    if not rows:
        raise PolygonParseError(1, "empty input")
    lineno, head = rows[0]
    try:
        d, n = (int(x) for x in head)
    except ValueError:
        raise PolygonParseError(lineno, "header must be '<d> <n>'") from None
    if len(rows) - 1 != n:
        raise PolygonParseError(rows[-1][0], f"expected {n} vertex lines, found {len(rows) - 1}")
    verts = []
    for lineno, toks in rows[1:]:
        if len(toks) != d:
            raise PolygonParseError(lineno, f"expected {d} coordinates, found {len(toks)}")
        try:
            verts.append(tuple(Fraction(t) for t in toks))
        except (ValueError, ZeroDivisionError):
            raise PolygonParseError(lineno, f"bad coordinate in {' '.join(toks)!r}") from None
    return verts


def read_polygon(text: str, merge: bool = False) -> Polygon:
    return validate(parse_polygon_text(text), merge=merge)


def write_polygon(P: Polygon) -> str:
    lines = [f"{P.dim} {P.n}"]
    lines += [" ".join(fmt(c) for c in v) for v in P.vertices]
    return "\n".join(lines) + "\n"


def translate_to_height(P: Polygon, frame: ProjectionFrame) -> Polygon:
    """Translate along ``w`` so that every height ``x . w`` is at least 1."""
    if P.dim != 3:
        raise DimensionMismatch("translate_to_height needs a polygon in R^3")
    low = min(frame.height(v) for v in P.vertices)
    if low >= 1:
        return P
    shift = (1 - low) / dot(frame.w, frame.w)
    return P.translated(scale(frame.w, shift))


def bounding_box(points: Iterable[Point]) -> tuple[Point, Point]:
    pts = list(points)
    d = len(pts[0])
    return (tuple(min(p[i] for p in pts) for i in range(d)),
            tuple(max(p[i] for p in pts) for i in range(d)))

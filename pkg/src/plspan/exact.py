"""Exact rational geometry kernel.

Points are plain tuples of :class:`fractions.Fraction`. Every predicate in
this module is decided exactly; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union

Point = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionMismatch(ValueError):
    pass


class DegenerateSimplex(ValueError):
    pass


def rational(x) -> Fraction:
    """Convert ints, decimal strings, ``p/q`` strings or Fractions exactly.

    Floats are rejected on purpose: ``0.1`` as a float is not 1/10.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a decimal string instead")
    return Fraction(x)


def point(*coords) -> Point:
    if len(coords) == 1 and not isinstance(coords[0], (int, str, Fraction)):
        coords = tuple(coords[0])
    if len(coords) < 2:
        raise DimensionMismatch("points need dimension >= 2")
    return tuple(rational(c) for c in coords)


def fmt(q: Fraction) -> str:
    return str(q)


# -- vector helpers ---------------------------------------------------------

def sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def scale(a: Point, s) -> Point:
    return tuple(x * s for x in a)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def lerp(a: Point, b: Point, t) -> Point:
    return tuple(x + t * (y - x) for x, y in zip(a, b))


def cross3(a: Sequence, b: Sequence) -> Point:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def det2(a: Sequence, b: Sequence) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def sign(x) -> int:
    return (x > 0) - (x < 0)


def lex_less(a: Point, b: Point) -> bool:
    return tuple(a) < tuple(b)


def _check_dims(*pts: Point) -> int:
    d = len(pts[0])
    for p in pts[1:]:
        if len(p) != d:
            raise DimensionMismatch(f"dimension {len(p)} != {d}")
    return d


# -- linear algebra over Q ----------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return len(rref(vectors)[1])


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    d = ONE
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            d = -d
        pv = m[col][col]
        d *= pv
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return d


def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(map(Fraction, r)) + [ONE if i == j else ZERO for j in range(n)]
           for i, r in enumerate(rows)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in red]


def matvec(rows: Sequence[Sequence], v: Sequence) -> Point:
    return tuple(dot(r, v) for r in rows)


def solve_affine(rows: Sequence[Sequence], rhs: Sequence):
    """General solution of ``rows @ x = rhs``.

    Returns ``None`` when inconsistent, else ``(x0, basis)`` where every
    solution is ``x0 + sum(y_i * basis[i])``.
    """
    nvars = len(rows[0])
    red, pivots = rref([list(r) + [b] for r, b in zip(rows, rhs)])
    if nvars in pivots:
        return None
    free = [j for j in range(nvars) if j not in pivots]
    x0 = [ZERO] * nvars
    for r, pc in enumerate(pivots):
        x0[pc] = red[r][nvars]
    basis = []
    for f in free:
        vec = [ZERO] * nvars
        vec[f] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][f]
        basis.append(vec)
    return x0, basis


# -- orientation and 2D segments ---------------------------------------------

def orient2d(a: Point, b: Point, c: Point) -> int:
    """Sign of det[b - a, c - a]."""
    for p in (a, b, c):
        if len(p) != 2:
            raise DimensionMismatch("orient2d needs 2D points")
    return sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


@dataclass(frozen=True)
class SegmentHit:
    """Single intersection point with its parameters along both inputs."""
    point: Point
    t1: Fraction
    t2: Fraction


@dataclass(frozen=True)
class Overlap:
    """Collinear overlap; ``start``/``end`` bound the shared sub-segment."""
    start: Point
    end: Point


def seg_seg_intersect_2d(s1: Sequence[Point], s2: Sequence[Point]) -> Union[None, SegmentHit, Overlap]:
    (a, b), (c, d) = s1, s2
    _check_dims(a, b, c, d)
    if len(a) != 2:
        raise DimensionMismatch("seg_seg_intersect_2d needs 2D segments")
    if a == b or c == d:
        raise DegenerateSimplex("zero-length segment")
    a, b, c, d = (tuple(Fraction(x) for x in p) for p in (a, b, c, d))
    r = sub(b, a)
    s = sub(d, c)
    denom = det2(r, s)
    qp = sub(c, a)
    if denom != 0:
        t = det2(qp, s) / denom
        u = det2(qp, r) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return SegmentHit(lerp(a, b, t), t, u)
        return None
    if det2(qp, r) != 0:
        return None  # parallel, distinct lines
    rr = dot(r, r)
    t0 = dot(qp, r) / rr
    t1 = dot(sub(d, a), r) / rr
    lo, hi = max(min(t0, t1), ZERO), min(max(t0, t1), ONE)
    if lo > hi:
        return None
    if lo == hi:
        p = lerp(a, b, lo)
        return SegmentHit(p, lo, dot(sub(p, c), s) / dot(s, s))
    return Overlap(lerp(a, b, lo), lerp(a, b, hi))


def point_on_segment(p: Point, a: Point, b: Point) -> Optional[Fraction]:
    """Parameter of ``p`` along ``[a, b]`` if it lies on the closed segment."""
    r = sub(b, a)
    w = sub(p, a)
    rr = dot(r, r)
    t = dot(w, r) / rr
    if not 0 <= t <= 1:
        return None
    if lerp(a, b, t) != tuple(p):
        return None
    return t


def winding_number(p: Point, poly: Sequence[Point]) -> int:
    """Winding number of a closed 2D polyline around ``p`` (p not on it)."""
    wn = 0
    n = len(poly)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if a[1] <= p[1]:
            if b[1] > p[1] and orient2d(a, b, p) > 0:
                wn += 1
        elif b[1] <= p[1] and orient2d(a, b, p) < 0:
            wn -= 1
    return wn


def signed_area2(poly: Sequence[Point]) -> Fraction:
    """Twice the signed area of a 2D polygon."""
    n = len(poly)
    return sum((det2(poly[i], poly[(i + 1) % n]) for i in range(n)), ZERO)


# -- simplex intersection in R^d -------------------------------------------------

def affine_rank(pts: Sequence[Point]) -> int:
    return rank([sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0


def is_degenerate(simplex: Sequence[Point]) -> bool:
    return affine_rank(simplex) < len(simplex) - 1


def simplex_intersection(A: Sequence[Point], B: Sequence[Point]) -> list[tuple[tuple, tuple]]:
    """Extreme points of ``conv(A) & conv(B)`` for simplices of 1..3 points.

    Each extreme point is returned as a pair of barycentric coordinate
    tuples (one for ``A``, one for ``B``). An empty list means the simplices
    are disjoint. The intersection is the convex hull of what is returned.
    """
    d = _check_dims(*A, *B)
    ka, kb = len(A) - 1, len(B) - 1
    a0, b0 = A[0], B[0]
    cols = [sub(p, a0) for p in A[1:]] + [scale(sub(p, b0), -1) for p in B[1:]]
    rhs = sub(b0, a0)
    nvars = ka + kb
    if nvars == 0:
        return [((ONE,), (ONE,))] if tuple(a0) == tuple(b0) else []
    rows = [[c[i] for c in cols] for i in range(d)]
    sol = solve_affine(rows, rhs)
    if sol is None:
        return []
    x0, basis = sol
    # constraints g . x <= h
    cons = []
    for i in range(nvars):
        g = [ZERO] * nvars
        g[i] = -ONE
        cons.append((g, ZERO))
    if ka:
        cons.append(([ONE] * ka + [ZERO] * kb, ONE))
    if kb:
        cons.append(([ZERO] * ka + [ONE] * kb, ONE))
    k = len(basis)
    red = []
    for g, h in cons:
        gy = [dot(g, bv) for bv in basis]
        red.append((gy, h - dot(g, x0)))
    found: list[tuple] = []
    if k == 0:
        if all(rh >= 0 for _, rh in red):
            found.append(tuple(x0))
    else:
        for combo in combinations(range(len(red)), k):
            mat = [red[i][0] for i in combo]
            if det(mat) == 0:
                continue
            y = solve_affine(mat, [red[i][1] for i in combo])[0]
            if all(dot(gy, y) <= rh for gy, rh in red):
                x = tuple(x0[j] + sum((y[i] * basis[i][j] for i in range(k)), ZERO)
                          for j in range(nvars))
                if x not in found:
                    found.append(x)
    out = []
    for x in found:
        s, t = x[:ka], x[ka:]
        out.append(((ONE - sum(s, ZERO),) + tuple(s), (ONE - sum(t, ZERO),) + tuple(t)))
    return out


def from_barycentric(simplex: Sequence[Point], lam: Sequence) -> Point:
    d = len(simplex[0])
    return tuple(sum((l * p[i] for l, p in zip(lam, simplex)), ZERO) for i in range(d))


def _in_face(lam: Sequence, face: Iterable[int]) -> bool:
    face = set(face)
    return all(l == 0 for i, l in enumerate(lam) if i not in face)


# -- segment / triangle ------------------------------------------------------------

@dataclass(frozen=True)
class SegmentTriangleHit:
    point: Point
    t: Fraction          # parameter along the segment
    bary: tuple          # barycentric coordinates in the triangle


@dataclass(frozen=True)
class SubSegment:
    start: SegmentTriangleHit
    end: SegmentTriangleHit


def segment_triangle_intersect(seg: Sequence[Point], tri: Sequence[Point]):
    """None, a :class:`SegmentTriangleHit`, or a :class:`SubSegment`."""
    if len(seg[0]) < 3:
        raise DimensionMismatch("segment_triangle_intersect needs d >= 3")
    if is_degenerate(tri):
        raise DegenerateSimplex("degenerate triangle")
    ext = simplex_intersection(seg, tri)
    if not ext:
        return None
    hits = sorted(
        (SegmentTriangleHit(from_barycentric(seg, ls), ls[1], lt) for ls, lt in ext),
        key=lambda h: h.t)
    if len(hits) == 1:
        return hits[0]
    return SubSegment(hits[0], hits[-1])


# -- triangle / triangle -----------------------------------------------------------

def _plane_side_separates(T1, T2, shared2: set) -> bool:
    """3D only: the non-shared vertices of T2 lie strictly on one side of T1's plane."""
    n = cross3(sub(T1[1], T1[0]), sub(T1[2], T1[0]))
    signs = set()
    for j, p in enumerate(T2):
        if j in shared2:
            continue
        s = sign(sum(x * y for x, y in zip(n, sub(p, T1[0]))))
        if s == 0:
            return False
        signs.add(s)
    return len(signs) == 1


def _bbox_disjoint(A, B) -> bool:
    for i in range(len(A[0])):
        if max(p[i] for p in A) < min(p[i] for p in B) or max(p[i] for p in B) < min(p[i] for p in A):
            return True
    return False


def orient3d(a: Point, b: Point, c: Point, p: Point) -> int:
    """Sign of the volume of the tetrahedron (a, b, c, p)."""
    u, v, w = sub(b, a), sub(c, a), sub(p, a)
    return sign(u[0] * (v[1] * w[2] - v[2] * w[1])
                - u[1] * (v[0] * w[2] - v[2] * w[0])
                + u[2] * (v[0] * w[1] - v[1] * w[0]))


def _segment_meets_triangle_3d(p, q, a, b, c) -> Optional[bool]:
    """Closed segment vs closed triangle in R^3; None when they are coplanar."""
    sp, sq = orient3d(a, b, c, p), orient3d(a, b, c, q)
    if sp == sq == 0:
        return None
    if sp * sq > 0:
        return False
    s = {orient3d(p, q, a, b), orient3d(p, q, b, c), orient3d(p, q, c, a)}
    return not (1 in s and -1 in s)


def _o2(a, b, c) -> int:
    return sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def _in_cone(v, a1, a2, r) -> bool:
    """Closed cone at v spanned by a1 -> a2 (counter-clockwise, angle < pi) contains r."""
    return _o2(v, a1, r) >= 0 and _o2(v, r, a2) >= 0


def _coplanar_improper(A, B, sa: set, sb: set) -> bool:
    """Exact 2D decision for two triangles lying in one plane of R^3."""
    n = cross3(sub(A[1], A[0]), sub(A[2], A[0]))
    drop = next(i for i in range(3) if n[i] != 0)
    keep = [i for i in range(3) if i != drop]
    a = [(p[keep[0]], p[keep[1]]) for p in A]
    b = [(p[keep[0]], p[keep[1]]) for p in B]
    if _o2(*a) < 0:
        a = a[::-1]
        sa = {2 - i for i in sa}
    if _o2(*b) < 0:
        b = b[::-1]
        sb = {2 - j for j in sb}
    if len(sa) == 2:
        # free vertices on the same side of the shared edge means overlap
        p, q = (a[i] for i in sorted(sa))
        fa = a[next(i for i in range(3) if i not in sa)]
        fb = b[next(j for j in range(3) if j not in sb)]
        return _o2(p, q, fa) * _o2(p, q, fb) > 0
    if len(sa) == 1:
        i, j = next(iter(sa)), next(iter(sb))
        v = a[i]
        a1, a2 = a[(i + 1) % 3], a[(i + 2) % 3]
        b1, b2 = b[(j + 1) % 3], b[(j + 2) % 3]
        return (_in_cone(v, a1, a2, b1) or _in_cone(v, a1, a2, b2)
                or _in_cone(v, b1, b2, a1) or _in_cone(v, b1, b2, a2))
    # separating axis: some edge has the whole other triangle strictly outside
    for X, Y in ((a, b), (b, a)):
        for k in range(3):
            p, q = X[k], X[(k + 1) % 3]
            if all(_o2(p, q, y) < 0 for y in Y):
                return False
    return True


def _triangles_improper_3d(A, B, sa: set, sb: set) -> Optional[bool]:
    """Orientation-based decision for two triangles in R^3; None defers to the general solver."""
    if len(sb) < 3 and _plane_side_separates(A, B, sb):
        return False
    if len(sa) < 3 and _plane_side_separates(B, A, sa):
        return False
    if all(orient3d(*A, p) == 0 for p in B):
        return _coplanar_improper(A, B, sa, sb)
    if len(sa) == 2:
        # planes meet only in the line of the shared edge
        return False
    if len(sa) == 1:
        # contact beyond the shared vertex reaches an opposite edge
        fa = [A[i] for i in range(3) if i not in sa]
        fb = [B[j] for j in range(3) if j not in sb]
        tests = [(fa, B), (fb, A)]
    else:
        tests = [((X[i], X[(i + 1) % 3]), Y) for X, Y in ((A, B), (B, A)) for i in range(3)]
    for seg, tri in tests:
        hit = _segment_meets_triangle_3d(*seg, *tri)
        if hit is None:
            return None
        if hit:
            return True
    return False


def simplices_improper(A: Sequence[Point], B: Sequence[Point],
                       shared: Sequence[tuple[int, int]] = ()) -> bool:
    """True iff conv(A) & conv(B) has a point outside the declared shared face.

    ``shared`` lists index pairs ``(i, j)`` with ``A[i] == B[j]``.
    """
    sa = {i for i, _ in shared}
    sb = {j for _, j in shared}
    if _bbox_disjoint(A, B):
        return False
    if len(A[0]) == 3 and len(A) == 3 and len(B) == 3:
        fast = _triangles_improper_3d(A, B, sa, sb)
        if fast is not None:
            return fast
    ext = simplex_intersection(A, B)
    return any(not _in_face(la, sa) for la, _ in ext)


def triangle_triangle_improper_intersect(T1: Sequence[Point], T2: Sequence[Point],
                                         shared: Sequence[tuple[int, int]] = ()) -> bool:
    """Improper contact test for two triangles in R^d.

    ``shared`` declares vertex correspondences ``(i, j)`` meaning
    ``T1[i] == T2[j]``; one pair is a shared vertex, two a shared edge.
    """
    _check_dims(*T1, *T2)
    if is_degenerate(T1) or is_degenerate(T2):
        raise DegenerateSimplex("zero-area triangle")
    for i, j in shared:
        if tuple(T1[i]) != tuple(T2[j]):
            raise ValueError(f"declared shared vertices differ: T1[{i}] != T2[{j}]")
    return simplices_improper(T1, T2, shared)


# -- projection frames ----------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionFrame:
    """Linear functionals u, v (image plane) and w (height) on R^3."""
    u: Point
    v: Point
    w: Point

    def __post_init__(self):
        for name in "uvw":
            object.__setattr__(self, name, tuple(rational(c) for c in getattr(self, name)))
            if len(getattr(self, name)) != 3:
                raise DimensionMismatch("projection frames live in R^3")
        if self.det == 0:
            raise ValueError("frame vectors are linearly dependent")

    @property
    def det(self) -> Fraction:
        return det([self.u, self.v, self.w])

    def project(self, x: Point) -> Point:
        return (dot(x, self.u), dot(x, self.v))

    def height(self, x: Point) -> Fraction:
        return dot(x, self.w)

    def to_frame(self, x: Point) -> Point:
        return (dot(x, self.u), dot(x, self.v), dot(x, self.w))

    def to_world(self, X: Point) -> Point:
        return matvec(inverse([self.u, self.v, self.w]), X)

    def to_json(self) -> dict:
        return {k: [fmt(c) for c in getattr(self, k)] for k in "uvw"}


STANDARD_FRAME = ProjectionFrame((1, 0, 0), (0, 1, 0), (0, 0, 1))

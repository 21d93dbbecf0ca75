"""Polygon generators: torus-knot sticks, the positive-writhe braid family,
planar n-gons, random polygons and a few fixed trefoils."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .diagram import ExhaustedAttempts, GeneralPositionViolated, project, writhe
from .exact import STANDARD_FRAME
from .polygon import InvalidPolygon, Polygon, check_polygon, validate


class ConstructionFailedValidation(RuntimeError):
    pass


# Right-handed stick trefoils; their standard-frame diagrams have three
# positive crossings with an alternating Gauss code.
TREFOIL_6 = ((0, -1, 3), (-1, -2, -2), (2, -1, -3), (3, 1, 0), (-2, -3, -2), (1, -1, -3))
TREFOIL_7 = ((3, -3, -3), (-2, -2, 0), (-3, -1, 3), (0, 3, 2), (3, -1, 2), (-3, 1, 0), (-1, 3, 3))

# A planar figure-eight quadrilateral; its first and third edges cross.
BOWTIE = ((0, 0), (2, 2), (2, 0), (0, 2))


def trefoil(sticks: int = 7) -> Polygon:
    table = {6: TREFOIL_6, 7: TREFOIL_7}
    if sticks not in table:
        raise ValueError("stored trefoils have 6 or 7 sticks")
    return validate(table[sticks])


def _q(x: float, den: int = 10_000) -> Fraction:
    return Fraction(x).limit_denominator(den)


def _checked(pts, what: str) -> Polygon:
    try:
        return validate(pts)
    except InvalidPolygon as exc:
        raise ConstructionFailedValidation(f"{what}: {exc}") from None


def gen_torus_stick(m: int, r_even: Fraction = Fraction(3), r_odd: Fraction = Fraction(2),
                    twist: float = 0.1) -> Polygon:
    """2m-stick polygon wound around two coaxial circles.

    Vertex k sits at angle ``k * pi * (m - 1) / m`` (odd vertices nudged by
    ``twist`` radians), alternating between height -1 on the circle of radius
    ``r_even`` and height +1 on the circle of radius ``r_odd``. For m = 3 this
    is a right-handed trefoil.
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    pts = []
    for k in range(2 * m):
        odd = k % 2
        th = k * math.pi * (m - 1) / m + (twist if odd else 0.0)
        r = r_odd if odd else r_even
        pts.append((r * _q(math.cos(th)), r * _q(math.sin(th)), Fraction(1 if odd else -1)))
    P = _checked(pts, f"torus stick m={m}")
    if P.n != 2 * m:
        raise ConstructionFailedValidation(f"expected {2 * m} edges, got {P.n}")
    return P


_RAY_0, _RAY_1, _RAY_2 = (1, 0), (-1, 1), (-1, -1)


def _writhe_family_points(m: int, radii) -> list[tuple]:
    """Closed (2m+1)-strand braid, three sticks per strand.

    Every strand runs out along rays 0 -> 1 -> 2 at a fixed radius; in the
    last sector the first m+1 positions pass over the remaining m while the
    two blocks swap. Only that sector has crossings: m(m+1) of them.
    """
    N = 2 * m + 1
    pts = []
    p = 0
    for _ in range(N):
        nxt = (p + m) % N
        z_start = 1 if p >= m else 0      # this position was fed by the upper block
        z_end = 1 if p <= m else 0        # this position leaves in the upper block
        r = radii[p]
        pts.append((r * _RAY_0[0], r * _RAY_0[1], Fraction(z_start)))
        pts.append((r * _RAY_1[0], r * _RAY_1[1], Fraction(z_start + z_end, 2)))
        pts.append((r * _RAY_2[0], r * _RAY_2[1], Fraction(z_end)))
        p = nxt
    return pts


def gen_writhe_family(m: int, max_attempts: int = 50) -> Polygon:
    """Polygon with 6m + 3 edges whose standard diagram has writhe m(m+1)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    N = 2 * m + 1
    rng = random.Random(m)
    radii = [Fraction(p + 2) for p in range(N)]
    for _ in range(max_attempts):
        P = _checked(_writhe_family_points(m, radii), f"writhe family m={m}")
        try:
            D = project(P, STANDARD_FRAME)
        except GeneralPositionViolated:
            # triple point in the swap sector: jiggle the radii
            radii = [r + Fraction(rng.randint(1, 9), 37) for r in radii]
            continue
        w = writhe(D)
        if P.n != 6 * m + 3 or D.c != m * (m + 1) or w != m * (m + 1):
            raise ConstructionFailedValidation(
                f"m={m}: n={P.n}, c={D.c}, writhe={w}; expected writhe {m * (m + 1)}")
        return P
    raise ExhaustedAttempts(max_attempts, "radius perturbation")


def gen_planar_ngon(n: int, dim: int = 2, radius: int = 1) -> Polygon:
    """Convex n-gon with rational vertices on a circle (rational parametrization)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if dim < 2:
        raise ValueError("dim must be at least 2")
    pts = []
    for k in range(n):
        if 2 * k == n:
            x, y = Fraction(-1), Fraction(0)
        else:
            t = _q(math.tan(math.pi * k / n), 100)
            x, y = (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)
        pts.append((radius * x, radius * y) + (Fraction(0),) * (dim - 2))
    return _checked(pts, f"{n}-gon")


def gen_random_polygon(n: int, d: int = 3, seed: int = 0, box: int = 10,
                       max_attempts: int = 1000) -> Polygon:
    """Rejection-sample integer polygons in ``[-box, box]^d`` until one is valid."""
    if n < 3 or d < 2:
        raise ValueError("need n >= 3 and d >= 2")
    rng = random.Random(seed)
    for _ in range(max_attempts):
        pts = [tuple(rng.randint(-box, box) for _ in range(d)) for _ in range(n)]
        if not check_polygon(pts):
            return validate(pts)
    raise ExhaustedAttempts(max_attempts, "polygon")

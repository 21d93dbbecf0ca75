"""Closed-form triangle-count bounds and the t/n^2 ratio table."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .exact import fmt

GAMMA_UPPER = Fraction(7)
GAMMA_LOWER = Fraction(1, 2)


class NotCoprime(ValueError):
    pass


def lb_genus(g, oriented: bool = True) -> int:
    """Fewest triangles in a spanning surface of a knot with genus ``g``.

    For non-orientable (4-ball style) genus, half-integers are allowed.
    """
    g = Fraction(g)
    if g < 0:
        raise ValueError("genus must be non-negative")
    if oriented and g.denominator != 1:
        raise ValueError("orientable genus must be an integer")
    if (2 * g).denominator != 1:
        raise ValueError("genus must be a half-integer")
    return math.ceil(4 * g + 1)


def lb_writhe(w: int) -> int:
    return abs(w) + 1


def lb_crossings(w: int, n: int) -> int:
    """Crossings forced in any diagram of an n-stick polygon with writhe w."""
    if n < 3:
        raise ValueError("n must be at least 3")
    return max(0, math.ceil(Fraction(abs(w) - 3 * n, 16)))


def torus_genus(p: int, q: int) -> Fraction:
    if p < 2 or q < 2:
        raise ValueError("torus knot parameters must be at least 2")
    if math.gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) = {math.gcd(p, q)}")
    return Fraction((p - 1) * (q - 1), 2)


def torus_family_lower(n) -> Fraction:
    """n^2/2 - 3n + 5: triangles needed for the 2m-stick (m, m-1) torus knots."""
    n = Fraction(n)
    return n * n / 2 - 3 * n + 5


def writhe_family_lower(n, sharp: bool = False) -> Fraction:
    """n^2/36 for the positive-writhe family; ``sharp`` adds the 3/4 slack term."""
    n = Fraction(n)
    return n * n / 36 + (Fraction(3, 4) if sharp else 0)


def ub_ledger(n: int, c: int) -> int:
    return 3 * n + 14 * c


def ub_global(n: int) -> int:
    return 7 * n * n - 18 * n


@dataclass
class BoundsReport:
    n: int
    c: Optional[int] = None
    writhe: Optional[int] = None
    genus: Optional[Fraction] = None
    tags: list = field(default_factory=list)

    def values(self) -> dict:
        out = {"ub_global": ub_global(self.n)}
        if self.genus is not None:
            out["lb_genus"] = lb_genus(self.genus, oriented=Fraction(self.genus).denominator == 1)
        if self.writhe is not None:
            out["lb_writhe"] = lb_writhe(self.writhe)
            out["lb_crossings"] = lb_crossings(self.writhe, self.n)
        if self.c is not None:
            out["ub_ledger"] = ub_ledger(self.n, self.c)
        return out

    def to_json(self) -> dict:
        exact = {
            "torus_family_lower": fmt(torus_family_lower(self.n)),
            "writhe_family_lower": fmt(writhe_family_lower(self.n)),
            "writhe_family_lower_sharp": fmt(writhe_family_lower(self.n, sharp=True)),
        }
        if self.writhe is not None:
            exact["crossings_lower"] = fmt(Fraction(abs(self.writhe) - 3 * self.n, 16))
        return {"n": self.n, "c": self.c, "writhe": self.writhe,
                "genus": None if self.genus is None else fmt(Fraction(self.genus)),
                "values": self.values(), "exact": exact,
                "ceil": {k: math.ceil(Fraction(v)) for k, v in exact.items()},
                "tags": list(self.tags)}


@dataclass(frozen=True)
class GammaRow:
    label: str
    n: int
    t: int
    ratio: Fraction
    running_max: Fraction

    def to_json(self) -> dict:
        return {"label": self.label, "n": self.n, "t": self.t, "ratio": fmt(self.ratio),
                "ratio_float": round(float(self.ratio), 6),
                "running_max": fmt(self.running_max)}


def gamma_report(runs: Iterable) -> dict:
    """Ratios t/n^2 per run, in input order, with a running maximum.

    ``runs`` holds ``(n, t)`` or ``(label, n, t)`` tuples.
    """
    rows = []
    best = None
    for k, run in enumerate(runs):
        label, n, t = run if len(run) == 3 else (str(k), *run)
        r = Fraction(t, n * n)
        best = r if best is None or r > best else best
        rows.append(GammaRow(label, n, t, r, best))
    return {
        "rows": [r.to_json() for r in rows],
        "max_ratio": None if best is None else fmt(best),
        "upper_band": fmt(GAMMA_UPPER),
        "lower_band": fmt(GAMMA_LOWER),
        "all_within_upper": all(r.ratio <= GAMMA_UPPER for r in rows),
    }

"""Triangulated PL surfaces with exact vertices, and their validators."""

from __future__ import annotations

import json
import os
from math import lcm
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .exact import (Point, fmt, is_degenerate, point_on_segment, simplex_intersection,
                    simplices_improper)


class MeshError(ValueError):
    pass


class NonManifold(MeshError):
    def __init__(self, what: str, witness):
        self.witness = witness
        super().__init__(f"non-manifold {what}: {witness}")


class UnsupportedDimensionForOFF(MeshError):
    pass


@dataclass(frozen=True)
class Mesh:
    vertices: tuple
    triangles: tuple
    declared_boundary: Optional[object] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(v) for v in self.vertices))
        object.__setattr__(self, "triangles", tuple(tuple(int(i) for i in t) for t in self.triangles))
        nv = len(self.vertices)
        seen = set()
        for k, t in enumerate(self.triangles):
            if len(t) != 3 or len(set(t)) != 3:
                raise MeshError(f"triangle {k} does not have three distinct vertices")
            if any(not 0 <= i < nv for i in t):
                raise MeshError(f"triangle {k} index out of range")
            key = frozenset(t)
            if key in seen:
                raise MeshError(f"triangle {k} repeats a vertex set")
            seen.add(key)
            if is_degenerate([self.vertices[i] for i in t]):
                raise MeshError(f"triangle {k} has zero area")

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @property
    def t(self) -> int:
        return len(self.triangles)

    def corners(self, k: int) -> list[Point]:
        return [self.vertices[i] for i in self.triangles[k]]


def merge_meshes(parts: Sequence[Mesh]) -> Mesh:
    """Union of meshes, identifying vertices with equal coordinates."""
    index: dict = {}
    verts: list = []
    tris = []
    for m in parts:
        remap = []
        for v in m.vertices:
            if v not in index:
                index[v] = len(verts)
                verts.append(v)
            remap.append(index[v])
        tris.extend(tuple(remap[i] for i in t) for t in m.triangles)
    return Mesh(tuple(verts), tuple(tris))


# -- topology ---------------------------------------------------------------------

@dataclass
class TopologyReport:
    V: int
    E: int
    F: int
    chi: int
    b: int
    boundary_cycles: list
    orientable: bool
    genus: Optional[Fraction]
    manifold: bool
    components: int
    m: int   # boundary edge count

    def to_json(self) -> dict:
        return {"V": self.V, "E": self.E, "F": self.F, "chi": self.chi, "b": self.b,
                "orientable": self.orientable, "manifold": self.manifold,
                "components": self.components, "boundary_edges": self.m,
                "genus": None if self.genus is None else fmt(Fraction(self.genus))}


def edge_map(M: Mesh) -> dict:
    edges = defaultdict(list)
    for k, (a, b, c) in enumerate(M.triangles):
        for u, v in ((a, b), (b, c), (c, a)):
            edges[frozenset((u, v))].append(k)
    return edges


def _link_ok(links: list[tuple[int, int]]) -> bool:
    """Link of a vertex must be one path or one cycle."""
    adj = defaultdict(list)
    for u, v in links:
        adj[u].append(v)
        adj[v].append(u)
    if any(len(x) > 2 for x in adj.values()):
        return False
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def topology(M: Mesh) -> TopologyReport:
    edges = edge_map(M)
    for e, ts in edges.items():
        if len(ts) > 2:
            raise NonManifold("edge", tuple(sorted(e)))
    links = defaultdict(list)
    for a, b, c in M.triangles:
        links[a].append((b, c))
        links[b].append((c, a))
        links[c].append((a, b))
    for v, lk in links.items():
        if not _link_ok(lk):
            raise NonManifold("vertex", v)
    used = set(links)
    V, E, F = len(used), len(edges), len(M.triangles)
    chi = V - E + F
    bedges = [tuple(sorted(e)) for e, ts in edges.items() if len(ts) == 1]
    m = len(bedges)
    assert 3 * F == 2 * E - m

    # orientation propagation
    orient = {}
    orientable = True
    comp_of = {}
    ncomp = 0
    tri_edges = [((a, b), (b, c), (c, a)) for a, b, c in M.triangles]
    for start in range(F):
        if start in orient:
            continue
        orient[start] = 1
        comp_of[start] = ncomp
        stack = [start]
        while stack:
            k = stack.pop()
            for u, v in tri_edges[k]:
                if orient[k] < 0:
                    u, v = v, u
                for j in edges[frozenset((u, v))]:
                    if j == k:
                        continue
                    # neighbour must traverse (v, u) under its orientation
                    want = 1 if (v, u) in tri_edges[j] else -1
                    if j in orient:
                        if orient[j] != want:
                            orientable = False
                    else:
                        orient[j] = want
                        comp_of[j] = ncomp
                        stack.append(j)
        ncomp += 1

    # boundary cycles
    badj = defaultdict(list)
    for u, v in bedges:
        badj[u].append(v)
        badj[v].append(u)
    cycles = []
    seen = set()
    for s in sorted(badj):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        prev, cur = None, s
        while True:
            nb = [x for x in badj[cur] if x != prev]
            nxt = nb[0] if nb else badj[cur][0]
            if nxt == s:
                break
            if nxt in seen:
                break
            cyc.append(nxt)
            seen.add(nxt)
            prev, cur = cur, nxt
        cycles.append(cyc)

    genus = None
    if orientable:
        # sum over components of (2 - chi_i - b_i) / 2
        chi_c = defaultdict(int)
        verts_c = defaultdict(set)
        edges_c = defaultdict(set)
        for k, t in enumerate(M.triangles):
            c = comp_of[k]
            chi_c[c] += 1
            verts_c[c].update(t)
            edges_c[c].update(frozenset(e) for e in tri_edges[k])
        b_c = defaultdict(int)
        for cyc in cycles:
            k = edges[frozenset((cyc[0], cyc[1 % len(cyc)]))][0]
            b_c[comp_of[k]] += 1
        total = Fraction(0)
        for c in range(ncomp):
            x = len(verts_c[c]) - len(edges_c[c]) + chi_c[c]
            total += Fraction(2 - x - b_c[c], 2)
        genus = total
    return TopologyReport(V, E, F, chi, len(cycles), cycles, orientable,
                          genus, True, ncomp, m)


def is_disk(rep: TopologyReport) -> bool:
    return rep.manifold and rep.orientable and rep.chi == 1 and rep.b == 1 and rep.components == 1


def oriented(M: Mesh) -> Mesh:
    """Same mesh with triangles flipped to a coherent orientation (if one exists)."""
    edges = edge_map(M)
    tris = list(M.triangles)
    done = set()
    for start in range(len(tris)):
        if start in done:
            continue
        done.add(start)
        stack = [start]
        while stack:
            k = stack.pop()
            a, b, c = tris[k]
            for u, v in ((a, b), (b, c), (c, a)):
                for j in edges[frozenset((u, v))]:
                    if j == k or j in done:
                        continue
                    x, y, z = tris[j]
                    if (u, v) in ((x, y), (y, z), (z, x)):
                        tris[j] = (x, z, y)
                    done.add(j)
                    stack.append(j)
    return Mesh(M.vertices, tuple(tris))


# -- embeddedness --------------------------------------------------------------------

def _bbox(pts):
    d = len(pts[0])
    return (tuple(min(p[i] for p in pts) for i in range(d)),
            tuple(max(p[i] for p in pts) for i in range(d)))


def _boxes_meet(b1, b2) -> bool:
    lo1, hi1 = b1
    lo2, hi2 = b2
    return all(l1 <= h2 and l2 <= h1 for l1, h1, l2, h2 in zip(lo1, hi1, lo2, hi2))


def candidate_pairs(boxes: Sequence) -> list[tuple[int, int]]:
    """Index pairs whose bounding boxes meet (sweep along the first axis)."""
    order = sorted(range(len(boxes)), key=lambda k: boxes[k][0][0])
    active: list[int] = []
    out = []
    for k in order:
        lo = boxes[k][0][0]
        active = [j for j in active if boxes[j][1][0] >= lo]
        for j in active:
            if _boxes_meet(boxes[j], boxes[k]):
                out.append((min(j, k), max(j, k)))
        active.append(k)
    out.sort()
    return out


def _pair_improper(args) -> bool:
    A, B, shared = args
    return simplices_improper(A, B, shared)


PARALLEL_MIN_JOBS = 2000   # below this, process start-up costs more than it saves


def _workers(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, workers)
    try:
        return max(1, int(os.environ.get("PLSPAN_THREADS", "1")))
    except ValueError:
        return 1


def _integer_coordinates(vertices) -> list[tuple[int, ...]]:
    """Scale all coordinates by one common denominator; incidence is unchanged."""
    den = 1
    for v in vertices:
        for x in v:
            den = lcm(den, Fraction(x).denominator)
    return [tuple(int(x * den) for x in v) for v in vertices]


def check_embedded(M: Mesh, workers: Optional[int] = None) -> list[tuple[int, int]]:
    """Improper triangle pairs; an empty list means the mesh is embedded.

    Triangles sharing mesh vertices may meet only along the shared simplex.
    """
    tris = M.triangles
    verts = _integer_coordinates(M.vertices)
    corners = [[verts[i] for i in t] for t in tris]
    boxes = [_bbox(c) for c in corners]
    jobs = []
    pairs = candidate_pairs(boxes)
    for i, j in pairs:
        ti, tj = tris[i], tris[j]
        shared = [(a, tj.index(v)) for a, v in enumerate(ti) if v in tj]
        jobs.append((corners[i], corners[j], shared))
    w = _workers(workers)
    if w > 1 and len(jobs) > PARALLEL_MIN_JOBS:
        with ProcessPoolExecutor(max_workers=w) as ex:
            flags = list(ex.map(_pair_improper, jobs, chunksize=256))
    else:
        flags = [_pair_improper(j) for j in jobs]
    return [p for p, f in zip(pairs, flags) if f]


def _boundary_faces(M: Mesh) -> list[list[tuple[int, ...]]]:
    """Per triangle: its local faces (edges/vertices) lying on the mesh boundary."""
    edges = edge_map(M)
    bverts = set()
    bedge = set()
    for e, ts in edges.items():
        if len(ts) == 1:
            bedge.add(e)
            bverts.update(e)
    out = []
    for t in M.triangles:
        faces = []
        for a in range(3):
            b = (a + 1) % 3
            if frozenset((t[a], t[b])) in bedge:
                faces.append((a, b))
        for a in range(3):
            if t[a] in bverts:
                faces.append((a,))
        out.append(faces)
    return out


def check_complementary(M: Mesh, P) -> list[tuple[int, int]]:
    """(triangle, polygon edge) pairs where the polygon meets the surface interior.

    A triangle may touch ``P`` only inside a single face of itself that lies on
    the mesh boundary. Interior self-intersections of the mesh are allowed.
    """
    bfaces = _boundary_faces(M)
    segs = P.edges()
    seg_boxes = [_bbox(s) for s in segs]
    bad = []
    for k in range(len(M.triangles)):
        T = M.corners(k)
        box = _bbox(T)
        for e, s in enumerate(segs):
            if not _boxes_meet(box, seg_boxes[e]):
                continue
            ext = simplex_intersection(T, s)
            if not ext:
                continue
            if not any(all(all(l == 0 for i, l in enumerate(lt) if i not in f) for lt, _ in ext)
                       for f in bfaces[k]):
                bad.append((k, e))
    return bad


def polygon_position(P, p: Point) -> Optional[Fraction]:
    """Position ``i + t`` of a point on ``P`` (edge i, parameter t in [0,1))."""
    for i, (a, b) in enumerate(P.edges()):
        t = point_on_segment(p, a, b)
        if t is not None:
            if t == 1:
                return Fraction((i + 1) % P.n)
            return i + t
    return None


def check_boundary_subdivision(M: Mesh, P) -> list[str]:
    """Problems with ``boundary(M)`` being a PL subdivision of ``P``; empty means ok."""
    try:
        rep = topology(M)
    except NonManifold as exc:
        return [str(exc)]
    if rep.b != 1:
        return [f"expected one boundary cycle, found {rep.b}"]
    cyc = rep.boundary_cycles[0]
    pos = []
    for v in cyc:
        x = polygon_position(P, M.vertices[v])
        if x is None:
            return [f"boundary vertex {v} is not on the polygon"]
        pos.append(x)
    if len(set(pos)) != len(pos):
        return ["boundary covers some point of the polygon more than once"]
    missing = [i for i in range(P.n) if Fraction(i) not in pos]
    if missing:
        return [f"polygon vertices missing from boundary: {missing}"]
    k = len(pos)
    start = pos.index(min(pos))
    seq = [pos[(start + i) % k] for i in range(k)]
    rev = [seq[0]] + seq[1:][::-1]
    if seq != sorted(seq) and rev != sorted(rev):
        return ["boundary vertices are not in the polygon's traversal order"]
    return []


# -- export ----------------------------------------------------------------------

def decimal_str(q: Fraction, digits: int) -> str:
    scaled = round(q * 10 ** digits)
    s = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{s}{whole}.{frac:0{digits}d}" if digits > 0 else f"{s}{whole}"


def export_off(M: Mesh, precision: int = 6) -> str:
    if M.dim != 3:
        raise UnsupportedDimensionForOFF(f"OFF export needs d = 3, got {M.dim}")
    lines = ["OFF", f"{len(M.vertices)} {len(M.triangles)} 0"]
    lines += [" ".join(decimal_str(c, precision) for c in v) for v in M.vertices]
    lines += [f"3 {a} {b} {c}" for a, b, c in M.triangles]
    return "\n".join(lines) + "\n"


def mesh_to_json(M: Mesh) -> dict:
    return {"dim": M.dim,
            "vertices": [[fmt(c) for c in v] for v in M.vertices],
            "triangles": [list(t) for t in M.triangles]}


def export_exact_json(M: Mesh) -> str:
    return json.dumps(mesh_to_json(M))


def import_exact_json(text: str) -> Mesh:
    data = json.loads(text)
    verts = tuple(tuple(Fraction(c) for c in v) for v in data["vertices"])
    if any(len(v) != data["dim"] for v in verts):
        raise MeshError("vertex dimension does not match 'dim'")
    return Mesh(verts, tuple(tuple(t) for t in data["triangles"]))

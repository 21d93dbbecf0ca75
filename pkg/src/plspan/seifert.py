"""Seifert-style spanning surfaces for polygons in R^3.

Pipeline: diagram graph with a rotation system, checkerboard face colouring,
a small quadrilateral of interior vertices around every crossing, smoothing
into disjoint circuits with nesting levels, and finally stacked disks,
vertical walls and twisted bands assembled into one exact mesh.
"""

from __future__ import annotations

import functools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .diagram import KnotDiagram, find_diagram
from .exact import (Point, det2, inverse, lerp, matvec, orient2d, seg_seg_intersect_2d,
                    signed_area2, sub, winding_number)
from .mesh import (Mesh, NonManifold, TopologyReport, check_boundary_subdivision,
                   check_embedded, oriented, topology)
from .planar import ear_clip
from .polygon import Polygon

log = logging.getLogger(__name__)

WHITE, BLACK = "white", "black"
STRATEGIES = ("white", "orientation")


class ColoringImpossible(RuntimeError):
    pass


class CircuitsNotSimple(RuntimeError):
    pass


class ValidationFailed(RuntimeError):
    def __init__(self, report: dict):
        self.report = report
        super().__init__(f"surface validation failed: {report}")


# -- diagram graph ------------------------------------------------------------------

def _angle_key(d: Point):
    """Sort key giving counter-clockwise order of directions, starting at +x."""
    x, y = d
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half, d


def _ccw_sort(origin: Point, nbrs: list[tuple[int, Point]]) -> list[int]:
    def cmp(a, b):
        da, db = sub(a[1], origin), sub(b[1], origin)
        ha, hb = _angle_key(da)[0], _angle_key(db)[0]
        if ha != hb:
            return ha - hb
        c = det2(da, db)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return [k for k, _ in sorted(nbrs, key=functools.cmp_to_key(cmp))]


@dataclass
class DiagramGraph:
    """Projected polygon as a plane graph.

    Vertices ``0..n-1`` are vertex images, ``n..n+c-1`` crossing vertices.
    ``edges[k] = (tail, head, polygon_edge, t_tail, t_head)`` follows the
    polygon orientation. ``rotation[v]`` lists incident darts counter-clockwise;
    a dart is ``(edge, +1)`` leaving along the edge or ``(edge, -1)`` against it.
    """
    diagram: KnotDiagram
    points: list
    edges: list
    rotation: dict

    @property
    def n(self):
        return self.diagram.n

    def dart_tail(self, d):
        e = self.edges[d[0]]
        return e[0] if d[1] > 0 else e[1]

    def dart_head(self, d):
        e = self.edges[d[0]]
        return e[1] if d[1] > 0 else e[0]

    def degree(self, v) -> int:
        return len(self.rotation[v])


def build_graph(D: KnotDiagram) -> DiagramGraph:
    n = D.n
    pts = D.projected_vertices() + [x.point2d for x in D.crossings]
    edges = []
    for e in range(n):
        seq = [(e, Fraction(0))] + [(n + k, D.crossings[k].param_on(e)) for k in D.per_edge_crossings[e]]
        seq.append(((e + 1) % n, Fraction(1)))
        for (a, ta), (b, tb) in zip(seq, seq[1:]):
            edges.append((a, b, e, ta, tb))
    inc = defaultdict(list)
    for k, (a, b, *_rest) in enumerate(edges):
        inc[a].append(((k, 1), pts[b]))
        inc[b].append(((k, -1), pts[a]))
    rotation = {v: _ccw_sort(pts[v], inc[v]) for v in range(len(pts))}
    G = DiagramGraph(D, pts, edges, rotation)
    for v in range(len(pts)):
        if G.degree(v) not in (2, 4):
            raise ColoringImpossible(f"vertex {v} has degree {G.degree(v)}")
    return G


# -- faces and colouring ---------------------------------------------------------------

@dataclass
class FaceColoring:
    faces: list            # each a list of darts; the face lies to the left
    colors: list
    outer: int
    dart_face: dict

    def color_left_of(self, dart) -> str:
        return self.colors[self.dart_face[dart]]


def faces_of(G: DiagramGraph) -> tuple[list, dict]:
    def nxt(d):
        v = G.dart_head(d)
        rot = G.rotation[v]
        back = (d[0], -d[1])
        i = rot.index(back)
        return rot[i - 1]          # clockwise neighbour of the reverse dart

    faces, dart_face = [], {}
    for k in range(len(G.edges)):
        for s in (1, -1):
            d = (k, s)
            if d in dart_face:
                continue
            face = []
            while d not in dart_face:
                dart_face[d] = len(faces)
                face.append(d)
                d = nxt(d)
            faces.append(face)
    return faces, dart_face


def color_faces(G: DiagramGraph) -> FaceColoring:
    if any(G.degree(v) % 2 for v in G.rotation):
        raise ColoringImpossible("odd vertex degree")
    faces, dart_face = faces_of(G)
    areas = [signed_area2([G.points[G.dart_tail(d)] for d in f]) for f in faces]
    outer = [i for i, a in enumerate(areas) if a < 0]
    if len(outer) != 1:
        raise ColoringImpossible(f"expected one unbounded face, found {len(outer)}")
    outer = outer[0]
    colors: list = [None] * len(faces)
    colors[outer] = WHITE
    stack = [outer]
    while stack:
        f = stack.pop()
        for d in faces[f]:
            g = dart_face[(d[0], -d[1])]
            want = BLACK if colors[f] == WHITE else WHITE
            if colors[g] is None:
                colors[g] = want
                stack.append(g)
            elif colors[g] != want:
                raise ColoringImpossible(f"faces {f} and {g} share an edge and a colour")
    return FaceColoring(faces, colors, outer, dart_face)


# -- augmentation ---------------------------------------------------------------------

@dataclass
class CrossingQuad:
    """Interior vertices around one crossing, in counter-clockwise order.

    ``half[i]`` is ``(polygon_edge, param, forward)``: the stub leaving the
    crossing along ``polygon_edge``; ``forward`` is True when it follows the
    polygon orientation. ``corner_colors[i]`` is the colour of the corner
    between stubs ``i`` and ``i+1``.
    """
    crossing: int
    eps: Fraction
    half: list
    points: list
    corner_colors: list


@dataclass
class AugmentedGraph:
    graph: DiagramGraph
    coloring: FaceColoring
    quads: list

    @property
    def interior_vertex_count(self) -> int:
        return 4 * len(self.quads)

    def white_edges(self) -> list[tuple[Point, Point]]:
        out = []
        for q in self.quads:
            for i in range(4):
                if q.corner_colors[i] == WHITE:
                    out.append((q.points[i], q.points[(i + 1) % 4]))
        return out


def _seg_meets_convex_quad(seg, quad) -> bool:
    for i in range(4):
        if seg_seg_intersect_2d(seg, (quad[i], quad[(i + 1) % 4])) is not None:
            return True
    p = seg[0]
    return all(orient2d(quad[i], quad[(i + 1) % 4], p) > 0 for i in range(4))


def _quads_meet(q1, q2) -> bool:
    for i in range(4):
        if _seg_meets_convex_quad((q1[i], q1[(i + 1) % 4]), q2):
            return True
    return _seg_meets_convex_quad((q2[0], q2[1]), q1)


def _edge_gap(D: KnotDiagram, e: int) -> Fraction:
    ts = [Fraction(0)] + [D.crossings[k].param_on(e) for k in D.per_edge_crossings[e]] + [Fraction(1)]
    return min(b - a for a, b in zip(ts, ts[1:]))


def augment(G: DiagramGraph, coloring: FaceColoring, D: Optional[KnotDiagram] = None) -> AugmentedGraph:
    D = D or G.diagram
    n = D.n
    pv = D.projected_vertices()
    segs = [(pv[i], pv[(i + 1) % n]) for i in range(n)]
    gaps = [_edge_gap(D, e) for e in range(n)]
    layout = []
    for k, x in enumerate(D.crossings):
        v = n + k
        stubs = []
        for dart in G.rotation[v]:
            e_idx, s = dart
            _, _, pe, _, _ = G.edges[e_idx]
            stubs.append((pe, x.param_on(pe), s > 0, dart))
        colors = []
        for i in range(4):
            nxt_dart = stubs[(i + 1) % 4][3]
            colors.append(coloring.color_left_of((nxt_dart[0], -nxt_dart[1])))
        layout.append((k, stubs, colors, min(gaps[x.over_edge], gaps[x.under_edge]) / 4))

    def quad_points(stubs, eps):
        return [lerp(*segs[pe], t + eps if fwd else t - eps) for pe, t, fwd, _ in stubs]

    eps = {k: e for k, _, _, e in layout}
    while True:
        pts = {k: quad_points(st, eps[k]) for k, st, _, _ in layout}
        bad = set()
        for k, x in enumerate(D.crossings):
            for e in range(n):
                if e in (x.over_edge, x.under_edge):
                    continue
                if _seg_meets_convex_quad(segs[e], pts[k]):
                    bad.add(k)
                    break
        ks = sorted(pts)
        for i, a in enumerate(ks):
            for b in ks[i + 1:]:
                if _quads_meet(pts[a], pts[b]):
                    bad.update((a, b))
        if not bad:
            break
        for k in bad:
            eps[k] /= 2
    for k, _, colors, _ in layout:
        if sorted(colors) != [BLACK, BLACK, WHITE, WHITE] or colors[0] == colors[1]:
            raise ColoringImpossible(f"corner colours at crossing {k} do not alternate: {colors}")
    quads = [CrossingQuad(k, eps[k], [s[:3] for s in st], pts[k], colors) for k, st, colors, _ in layout]
    return AugmentedGraph(G, coloring, quads)


# -- circuits ---------------------------------------------------------------------------

@dataclass
class Circuit:
    nodes: list          # node keys, cyclic
    points: list         # 2D points
    kinds: list          # per edge i (nodes[i] -> nodes[i+1]): "P" or "W"
    level: int = 0

    @property
    def m(self) -> int:
        return len(self.nodes)


@dataclass
class CircuitSet:
    circuits: list
    strategy: str
    node_lift: dict        # node key -> (polygon edge, param)
    node_point: dict       # node key -> 2D point
    bands: list            # per crossing: (x1, x2, y1, y2) node keys
    node_circuit: dict

    @property
    def s(self) -> int:
        return len(self.circuits)

    @property
    def levels(self) -> list[int]:
        return [c.level for c in self.circuits]

    @property
    def total_edges(self) -> int:
        return sum(c.m for c in self.circuits)


def _smoothing_corner(q: CrossingQuad, strategy: str) -> int:
    """Index i such that corners i and i+2 carry the retained smoothing edges."""
    for i in range(4):
        if strategy == "white":
            if q.corner_colors[i] == WHITE:
                return i
        else:
            # coherent corner: one stub runs forward, the other backward
            if q.half[i][2] != q.half[(i + 1) % 4][2]:
                return i
    raise AssertionError("no smoothing corner")


def extract_circuits(A: AugmentedGraph, strategy: str = "white") -> CircuitSet:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    D = A.graph.diagram
    n = D.n
    pv = D.projected_vertices()
    node_lift: dict = {}
    node_point: dict = {}
    adj = defaultdict(list)       # node -> [(neighbour, kind, link id)]
    forward: dict = {}            # node -> (next node, link id) along the polygon
    nlinks = 0

    def link(a, b, kind):
        nonlocal nlinks
        adj[a].append((b, kind, nlinks))
        adj[b].append((a, kind, nlinks))
        if kind == "P":
            forward[a] = (b, nlinks)
        nlinks += 1

    for v in range(n):
        node_lift[("v", v)] = (v, Fraction(0))
        node_point[("v", v)] = pv[v]
    quad_by_crossing = {q.crossing: q for q in A.quads}
    for q in A.quads:
        for i, (pe, t, fwd) in enumerate(q.half):
            key = ("q", q.crossing, i)
            node_lift[key] = (pe, t + q.eps if fwd else t - q.eps)
            node_point[key] = q.points[i]
    # sub-edges of the polygon outside the crossing quads
    for e in range(n):
        cur = ("v", e)
        for k in D.per_edge_crossings[e]:
            q = quad_by_crossing[k]
            i_in = next(i for i, h in enumerate(q.half) if h[0] == e and not h[2])
            i_out = next(i for i, h in enumerate(q.half) if h[0] == e and h[2])
            link(cur, ("q", k, i_in), "P")
            cur = ("q", k, i_out)
        link(cur, ("v", (e + 1) % n), "P")
    bands = []
    for q in A.quads:
        i = _smoothing_corner(q, strategy)
        k = q.crossing
        x1, x2, y1, y2 = (("q", k, (i + j) % 4) for j in range(4))
        link(x1, x2, "W")
        link(y1, y2, "W")
        bands.append((x1, x2, y1, y2))
    for key, nb in adj.items():
        if len(nb) != 2:
            raise CircuitsNotSimple(f"node {key} has degree {len(nb)}")

    circuits = []
    node_circuit: dict = {}
    for start in sorted(forward, key=lambda k: (k[0] != "v", k)):
        if start in node_circuit:
            continue
        nodes, kinds = [start], ["P"]
        node_circuit[start] = len(circuits)
        cur, via = forward[start]
        while cur != start:
            if cur in node_circuit:
                raise CircuitsNotSimple(f"node {cur} visited twice")
            nodes.append(cur)
            node_circuit[cur] = len(circuits)
            nxt, kind, lid = next(o for o in adj[cur] if o[2] != via)
            kinds.append(kind)
            cur, via = nxt, lid
        circuits.append(Circuit(nodes, [node_point[x] for x in nodes], kinds))
    _assign_levels(circuits)
    return CircuitSet(circuits, strategy, node_lift, node_point, bands, node_circuit)


def _assign_levels(circuits: list) -> None:
    inside = defaultdict(list)   # container -> contained
    for i, ci in enumerate(circuits):
        for j, cj in enumerate(circuits):
            if i != j and winding_number(cj.points[0], ci.points) != 0:
                inside[i].append(j)
    memo: dict = {}

    def level(i):
        if i not in memo:
            memo[i] = 0 if not inside[i] else 1 + max(level(j) for j in inside[i])
        return memo[i]

    for i, c in enumerate(circuits):
        c.level = level(i)


# -- surface ------------------------------------------------------------------------

@dataclass
class TriangleLedger:
    disk: int
    wall: int
    band: int
    n: int
    c: int
    s: int
    n_prime: int

    @property
    def total(self) -> int:
        return self.disk + self.wall + self.band

    def check(self) -> None:
        assert self.disk == self.n_prime - 2 * self.s
        assert self.wall == 2 * self.n_prime
        assert self.band == 2 * self.c
        assert self.total == 3 * self.n + 14 * self.c - 2 * self.s
        assert self.total <= 3 * self.n + 14 * self.c

    def to_json(self) -> dict:
        return {"disk": self.disk, "wall": self.wall, "band": self.band, "total": self.total}


def build_surface(P: Polygon, D: KnotDiagram, cs: CircuitSet) -> tuple[Mesh, TriangleLedger]:
    """Assemble disks, walls and bands into an (unvalidated) mesh in world coordinates."""
    frame = D.frame
    low = min(frame.height(v) for v in P.vertices)
    shift = max(Fraction(0), 1 - low)       # heights >= 1 in frame coordinates
    to_world = inverse([frame.u, frame.v, frame.w])

    verts: list = []
    index: dict = {}

    def vid(key, world):
        if key not in index:
            index[key] = len(verts)
            verts.append(world)
        return index[key]

    def top(node):
        e, t = cs.node_lift[node]
        return vid(("top", node), P.point_at(e, t))

    def bottom(node, level):
        X, Y = cs.node_point[node]
        return vid(("bot", node), matvec(to_world, (X, Y, Fraction(-level) - shift)))

    tris = []
    disk = wall = band = 0
    for c in cs.circuits:
        ids = [bottom(x, c.level) for x in c.nodes]
        for a, b, cc in ear_clip(c.points):
            tris.append((ids[a], ids[b], ids[cc]))
            disk += 1
        m = c.m
        for i in range(m):
            a, b = c.nodes[i], c.nodes[(i + 1) % m]
            A, B = ids[i], ids[(i + 1) % m]
            ta, tb = top(a), top(b)
            if c.points[i] < c.points[(i + 1) % m]:
                tris += [(A, B, tb), (A, tb, ta)]
            else:
                tris += [(A, B, ta), (B, tb, ta)]
            wall += 2
    for x1, x2, y1, y2 in cs.bands:
        tris += [(top(x1), top(x2), top(y1)), (top(x2), top(y1), top(y2))]
        band += 2
    ledger = TriangleLedger(disk, wall, band, D.n, D.c, cs.s, cs.total_edges)
    return Mesh(tuple(verts), tuple(tris), declared_boundary=P), ledger


def level_diagnostics(cs: CircuitSet) -> list[dict]:
    """Bands whose circuits' levels do not differ by exactly one."""
    out = []
    for k, (x1, x2, y1, y2) in enumerate(cs.bands):
        a, b = cs.node_circuit[x1], cs.node_circuit[y1]
        la, lb = cs.circuits[a].level, cs.circuits[b].level
        if abs(la - lb) != 1:
            out.append({"crossing": k, "circuits": [a, b], "levels": [la, lb]})
    return out


def validate_surface(M: Mesh, P: Polygon, workers: Optional[int] = None) -> tuple[dict, Optional[TopologyReport]]:
    report: dict = {}
    try:
        topo = topology(M)
    except NonManifold as exc:
        return {"manifold": False, "error": str(exc)}, None
    report["manifold"] = True
    report["orientable"] = topo.orientable
    report["boundary_subdivision"] = check_boundary_subdivision(M, P)
    report["improper_pairs"] = [list(p) for p in check_embedded(M, workers)]
    report["ok"] = (topo.orientable and not report["boundary_subdivision"]
                    and not report["improper_pairs"])
    return report, topo


@dataclass
class SeifertResult:
    mesh: Mesh
    ledger: TriangleLedger
    diagram: KnotDiagram
    circuits: CircuitSet
    topology: TopologyReport
    strategy: str
    validation: dict
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        D, L = self.diagram, self.ledger
        n = D.n
        return {
            "n": n, "c": D.c, "s": self.circuits.s, "n_prime": L.n_prime,
            "strategy": self.strategy,
            "levels": self.circuits.levels,
            "ledger": L.to_json(),
            "chi": self.topology.chi,
            "genus": int(self.topology.genus) if self.topology.genus is not None else None,
            "writhe": sum(x.sign for x in D.crossings),
            "frame": D.frame.to_json(),
            "bounds": {"ub_ledger": 3 * n + 14 * D.c, "ub_global": 7 * n * n - 18 * n},
            "validation": self.validation,
            "diagnostics": self.diagnostics,
        }


def seifert_from_diagram(D: KnotDiagram, strategy: str = "white", fallback: bool = True,
                         workers: Optional[int] = None) -> SeifertResult:
    P = D.polygon
    G = build_graph(D)
    col = color_faces(G)
    A = augment(G, col, D)
    order = [strategy] + ([s for s in STRATEGIES if s != strategy] if fallback else [])
    diagnostics: dict = {}
    last = None
    for strat in order:
        cs = extract_circuits(A, strat)
        mesh, ledger = build_surface(P, D, cs)
        ledger.check()
        report, topo = validate_surface(mesh, P, workers)
        diagnostics[strat] = {"levels": level_diagnostics(cs), "validation_ok": report.get("ok", False)}
        if report.get("ok"):
            assert topo.chi == cs.s - D.c
            return SeifertResult(oriented(mesh), ledger, D, cs, topo, strat, report, diagnostics)
        log.info("strategy %s failed validation: %s", strat, report)
        last = report
    raise ValidationFailed({"attempts": diagnostics, "last": last})


def seifert_surface(P: Polygon, strategy: str = "white", seed: int = 0,
                    max_attempts: int = 200, fallback: bool = True,
                    workers: Optional[int] = None) -> SeifertResult:
    D = find_diagram(P, seed=seed, max_attempts=max_attempts)
    return seifert_from_diagram(D, strategy, fallback, workers)

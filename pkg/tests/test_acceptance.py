"""Acceptance criteria AC1-AC12. Each test records one PASS/FAIL line that is
printed in the 'acceptance criteria' section of the pytest summary."""

import json
import time
from fractions import Fraction as F

import pytest

from plspan.bounds import (gamma_report, lb_crossings, lb_genus, lb_writhe, torus_family_lower,
                           torus_genus, writhe_family_lower)
from plspan.cli import main
from plspan.diagram import project, sampled_diagrams, writhe
from plspan.exact import STANDARD_FRAME, add, lerp, sub
from plspan.families import (TREFOIL_6, TREFOIL_7, gen_planar_ngon, gen_random_polygon,
                             gen_torus_stick, gen_writhe_family)
from plspan.higher import annulus4, annulus_mesh, cone, embed4_via_projection
from plspan.mesh import (Mesh, check_boundary_subdivision, check_complementary, check_embedded,
                         topology)
from plspan.planar import triangulate_planar
from plspan.polygon import validate
from plspan.seifert import seifert_surface

NONCONVEX = [
    [(0, 0), (4, 0), (4, 1), (1, 1), (1, 4), (0, 4)],
    [(0, 0), (6, 0), (6, 3), (5, 3), (5, 1), (4, 1), (4, 3), (3, 3), (3, 1), (2, 1), (2, 3), (0, 3)],
    [(0, 3), (1, 1), (3, 0), (1, -1), (0, -3), (-1, -1), (-3, 0), (-1, 1)],
    [(0, 0), (3, 2), (6, 0), (3, 5)],
    [(0, 0), (5, 0), (5, 5), (1, 5), (1, 2), (3, 2), (3, 3), (2, 3), (2, 4), (4, 4), (4, 1), (0, 1)],
]

SQUARE = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]


def random_seifert_inputs():
    return [(s, gen_random_polygon(3 + s % 12, 3, s)) for s in range(25)]


@pytest.fixture(scope="module")
def surfaces():
    """Every Seifert surface the criteria need, built once."""
    runs = {"square": seifert_surface(validate(SQUARE)),
            "trefoil6": seifert_surface(validate(TREFOIL_6)),
            "trefoil7": seifert_surface(validate(TREFOIL_7))}
    for m in range(1, 5):
        runs[f"writhe{m}"] = seifert_surface(gen_writhe_family(m))
    for s, P in random_seifert_inputs():
        runs[f"random{s}"] = seifert_surface(P, seed=s)
    return runs


def test_ac1_planar_baseline(ac_line):
    polys = [gen_planar_ngon(n) for n in range(3, 21)] + [validate(p) for p in NONCONVEX]
    t0 = time.perf_counter()
    meshes = [triangulate_planar(P) for P in polys]
    elapsed = time.perf_counter() - t0
    counts = all(M.t == P.n - 2 for M, P in zip(meshes, polys))
    chi = all(topology(M).chi == 1 for M in meshes)
    lifted = [Mesh([v + (0,) for v in M.vertices], M.triangles) for M in meshes]
    embedded = all(check_embedded(M) == [] for M in lifted)
    ok = counts and chi and embedded and elapsed < 1.0
    ac_line("AC1", ok, f"{len(polys)} planar polygons, t = n - 2: {counts}, chi = 1: {chi}, "
                       f"embedded: {embedded}, triangulation time {elapsed:.3f}s (< 1s)")
    assert ok


def test_ac2_seifert_ledger(ac_line):
    sq = seifert_surface(validate(SQUARE))
    L = sq.ledger
    square_ok = (sq.mesh.t == 10 == 3 * L.n_prime - 2 * sq.circuits.s + 2 * sq.diagram.c
                 and (L.n_prime, sq.circuits.s, sq.diagram.c) == (4, 1, 0))
    t0 = time.perf_counter()
    r = seifert_surface(validate(TREFOIL_7))
    elapsed = time.perf_counter() - t0
    n, c, s = 7, r.diagram.c, r.circuits.s
    v = r.validation
    tre_ok = (c == 3 and r.mesh.t == 3 * n + 14 * c - 2 * s <= 63 and v["manifold"]
              and v["orientable"] and v["improper_pairs"] == [] and v["boundary_subdivision"] == [])
    ok = square_ok and tre_ok and elapsed < 5.0
    ac_line("AC2", ok, f"square t={sq.mesh.t} (n'={L.n_prime}, s={sq.circuits.s}, c=0); "
                       f"7-stick trefoil c={c} s={s} t={r.mesh.t} <= 63, all checks ok: {tre_ok}, "
                       f"{elapsed:.2f}s (< 5s)")
    assert ok


def test_ac3_topology_consistency(ac_line, surfaces):
    bad = []
    for s, P in random_seifert_inputs():
        r = surfaces[f"random{s}"]
        rep = topology(r.mesh)
        if not (rep.chi == r.circuits.s - r.diagram.c and 3 * rep.F == 2 * rep.E - rep.m):
            bad.append(s)
    ok = not bad
    ac_line("AC3", ok, f"25 random polygons (n <= 14, seeds 0..24): chi = s - c and 3F = 2E - m "
                       f"exact; failures {bad}")
    assert ok


def test_ac4_genus_cross_check(ac_line, surfaces):
    r = surfaces["trefoil7"]
    g = r.topology.genus
    ok = g == 1 == torus_genus(3, 2) and lb_genus(1) == 5 <= r.mesh.t
    ac_line("AC4", ok, f"trefoil mesh genus {g} = torus_genus(3,2) = {torus_genus(3, 2)}; "
                       f"lb_genus(1) = {lb_genus(1)} <= t = {r.mesh.t}")
    assert ok


def test_ac5_writhe_family(ac_line, surfaces):
    rows, ok = [], True
    for m in range(1, 5):
        r = surfaces[f"writhe{m}"]
        n = r.diagram.n
        w = writhe(project(gen_writhe_family(m), STANDARD_FRAME))
        wr = writhe(r.diagram)
        lower = writhe_family_lower(n)
        good = (n == 6 * m + 3 and w == m * (m + 1) and lb_writhe(wr) <= r.mesh.t
                and lower == F((6 * m + 3) ** 2, 36))
        ok &= good
        rows.append(f"m={m}: n={n} w={w} t={r.mesh.t} lower={lower}")
    ok &= writhe_family_lower(21) == F(441, 36)
    ac_line("AC5", ok, "; ".join(rows))
    assert ok


def test_ac6_crossing_bound_on_sampled_frames(ac_line):
    family = ([gen_writhe_family(m) for m in range(1, 5)] + [gen_torus_stick(m) for m in range(3, 7)]
              + [validate(TREFOIL_6), validate(TREFOIL_7)])
    checked, violations = 0, []
    for k, P in enumerate(family):
        for D in sampled_diagrams(P, 10, seed=k):
            checked += 1
            if D.c < lb_crossings(writhe(D), P.n):
                violations.append((k, D.frame.w))
    ok = not violations and checked >= 10 * len(family)
    ac_line("AC6", ok, f"{len(family)} family polygons x 10 frames = {checked} diagrams, "
                       f"violations of c >= ceil((|w| - 3n)/16): {len(violations)}")
    assert ok


def test_ac7_formula_table(ac_line):
    bad = [m for m in range(3, 11)
           if not (torus_family_lower(2 * m) == 2 * m * m - 6 * m + 5 == 4 * torus_genus(m, m - 1) + 1)]
    ok = not bad
    ac_line("AC7", ok, f"m = 3..10: n^2/2 - 3n + 5 at n = 2m equals 2m^2 - 6m + 5 = 4g + 1; "
                       f"mismatches {bad}")
    assert ok


def test_ac8_cone(ac_line):
    attempts, bad = [], []
    for s in range(20):
        P = gen_random_polygon(3 + s % 10, 5, s)
        r = cone(P, seed=s)
        attempts.append(r.attempts)
        rep = r.topology
        if not (r.mesh.t == P.n and check_embedded(r.mesh) == [] and rep.chi == 1 and rep.b == 1):
            bad.append(s)
    ok = not bad
    mean = sum(attempts) / len(attempts)
    ac_line("AC8", ok, f"20 random polygons in R^5: n triangles, embedded disk; failures {bad}; "
                       f"mean attempts {mean:.2f} (retries {mean - 1:.2f})")
    assert ok


def test_ac9_annulus(ac_line):
    bad = []
    for s in range(10):
        P = gen_random_polygon(3 + s % 8, 4, s)
        r = annulus4(P, seed=s)
        rep = r.topology
        if not (r.mesh.t == 3 * P.n and rep.chi == 1 and rep.b == 1 and rep.orientable
                and check_complementary(r.mesh, P) == []):
            bad.append(s)
    # adversarial: one vertex of Q on a line through edges 0 and 3
    P = gen_random_polygon(6, 4, seed=1)
    good = annulus4(P, seed=1)
    Q = [good.mesh.vertices[P.n + j] for j in range(P.n)]
    p, q = lerp(*P.edge(0), F(1, 2)), lerp(*P.edge(3), F(1, 3))
    Q[1] = add(q, sub(q, p))
    detected = bool(check_complementary(annulus_mesh(P, Q), P))
    ok = not bad and detected
    ac_line("AC9", ok, f"10 random polygons in R^4: 3n triangles, disk, complementary; failures {bad}; "
                       f"bad-set negative detected: {detected}")
    assert ok


def test_ac10_embedded_r4(ac_line):
    polys = [validate([v + (k % 2,) for k, v in enumerate(TREFOIL_7)]),
             validate([v + (0,) for v in TREFOIL_6]),
             gen_random_polygon(4, 4, 11), gen_random_polygon(6, 4, 12), gen_random_polygon(8, 4, 13)]
    rows, ok = [], True
    for k, P in enumerate(polys):
        r = embed4_via_projection(P, seed=k)
        good = (r.mesh.t <= 24 * P.n ** 2 and check_embedded(r.mesh) == []
                and check_boundary_subdivision(r.mesh, P) == [])
        ok &= good
        rows.append(f"n={P.n} t={r.mesh.t}/{24 * P.n ** 2}")
    ac_line("AC10", ok, "embedded surfaces in R^4, t <= 24n^2: " + ", ".join(rows))
    assert ok


def test_ac11_gamma_band(ac_line, surfaces):
    rep = gamma_report([(k, r.diagram.n, r.mesh.t) for k, r in surfaces.items()])
    ok = rep["all_within_upper"] and F(rep["max_ratio"]) <= 7
    ac_line("AC11", ok, f"{len(rep['rows'])} Seifert surfaces, max t/n^2 = {rep['max_ratio']} "
                        f"= {float(F(rep['max_ratio'])):.3f} <= 7 (lower band 1/2 not checked)")
    assert ok


def test_ac12_determinism(ac_line, tmp_path):
    poly3 = tmp_path / "t.poly"
    poly3.write_text("3 7\n" + "".join(" ".join(map(str, v)) + "\n" for v in TREFOIL_7))
    poly5 = tmp_path / "p5.poly"
    main(["gen", "random", "--n", "7", "--d", "5", "--seed", "4", "--out", str(poly5)])
    poly4 = tmp_path / "p4.poly"
    main(["gen", "random", "--n", "5", "--d", "4", "--seed", "4", "--out", str(poly4)])
    commands = [["seifert", "--input", str(poly3), "--seed", "7"],
                ["diagram", "--input", str(poly3)],
                ["bounds", "--input", str(poly3), "--genus", "1"],
                ["cone", "--input", str(poly5), "--seed", "3"],
                ["annulus4", "--input", str(poly4), "--seed", "3"],
                ["embed4", "--input", str(poly4), "--seed", "3"],
                ["bench-gamma", "--family", "writhe", "--m", "1..2"]]
    same = []
    for k, cmd in enumerate(commands):
        outs = []
        for rep in range(2):
            path = tmp_path / f"r{k}_{rep}.json"
            main(cmd + ["--report", str(path)])
            outs.append(path.read_bytes())
        same.append(outs[0] == outs[1] and json.loads(outs[0]) is not None)
    ok = all(same)
    ac_line("AC12", ok, f"{len(commands)} commands run twice, byte-identical reports: {sum(same)}/{len(same)}")
    assert ok

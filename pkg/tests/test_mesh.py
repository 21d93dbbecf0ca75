import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plspan.mesh import (Mesh, MeshError, NonManifold, UnsupportedDimensionForOFF,
                         check_boundary_subdivision, check_complementary, check_embedded,
                         export_exact_json, export_off, import_exact_json, merge_meshes, oriented,
                         topology)
from plspan.polygon import validate

TETRA = Mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)],
             [(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)])
SQUARE2 = Mesh([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 1, 2), (0, 2, 3)])


def strip(n, twist):
    """Band of n squares; the last square is glued back with or without a half twist."""
    verts = [(F(k), F(0), F(0)) for k in range(n)] + [(F(k), F(1), F(0)) for k in range(n)]
    verts = [(F(4) * x, y, z) for x, y, z in verts]
    # bend the band around so the glue seam closes in space
    tris = []
    for k in range(n - 1):
        a, b, c, d = k, k + 1, n + k + 1, n + k
        tris += [(a, b, c), (a, c, d)]
    a, d = n - 1, 2 * n - 1
    b, c = (n, 0) if twist else (0, n)
    tris += [(a, b, c), (a, c, d)]
    rng = random.Random(n)
    verts = [(x, y, F(rng.randint(1, 50))) for x, y, _ in verts]
    return Mesh(verts, tris)


def test_tetrahedron_is_closed_sphere():
    rep = topology(TETRA)
    assert (rep.V, rep.E, rep.F, rep.chi, rep.b, rep.orientable, rep.genus) == (4, 6, 4, 2, 0, True, 0)


def test_square_disk_and_three_f_identity():
    rep = topology(SQUARE2)
    assert rep.chi == 1 and rep.b == 1 and rep.orientable and rep.genus == 0
    assert 3 * rep.F == 2 * rep.E - rep.m


def test_annulus_and_moebius():
    ann = topology(strip(5, twist=False))
    assert ann.chi == 0 and ann.b == 2 and ann.orientable
    mob = topology(strip(5, twist=True))
    assert mob.chi == 0 and mob.b == 1 and not mob.orientable


def test_non_manifold_edge_rejected():
    M = Mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1)],
             [(0, 1, 2), (0, 1, 3), (0, 1, 4)])
    with pytest.raises(NonManifold):
        topology(M)


def test_bowtie_vertex_rejected():
    # two triangles meeting only at a vertex: the link is not an arc
    M = Mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)], [(0, 1, 2), (0, 3, 4)])
    with pytest.raises(NonManifold):
        topology(M)


def test_mesh_construction_errors():
    with pytest.raises(MeshError):
        Mesh([(0, 0, 0), (1, 0, 0), (2, 0, 0)], [(0, 1, 2)])
    with pytest.raises(MeshError):
        Mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 3)])
    with pytest.raises(MeshError):
        Mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2), (2, 1, 0)])


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_topology_invariant_under_relabeling(rnd):
    M = strip(4, twist=rnd.random() < 0.5)
    perm = list(range(len(M.vertices)))
    rnd.shuffle(perm)
    inv = {p: i for i, p in enumerate(perm)}
    verts = [M.vertices[perm[i]] for i in range(len(perm))]
    tris = [tuple(inv[v] for v in t) for t in M.triangles]
    rnd.shuffle(tris)
    a, b = topology(M), topology(Mesh(verts, tris))
    assert (a.chi, a.b, a.orientable, a.genus) == (b.chi, b.b, b.orientable, b.genus)


def test_oriented_gives_consistent_triangles():
    M = Mesh(SQUARE2.vertices, [(0, 1, 2), (0, 3, 2)])
    O = oriented(M)
    directed = [(t[i], t[(i + 1) % 3]) for t in O.triangles for i in range(3)]
    assert len(directed) == len(set(directed))


def test_capping_boundary_raises_chi_by_b():
    rep = topology(SQUARE2)
    capped = Mesh(list(SQUARE2.vertices) + [(F(1, 2), F(1, 2), F(1))],
                  list(SQUARE2.triangles) + [(1, 0, 4), (2, 1, 4), (3, 2, 4), (0, 3, 4)])
    assert topology(capped).chi == rep.chi + rep.b


def test_check_embedded_finds_piercing_pair():
    assert check_embedded(TETRA) == []
    M = Mesh([(0, 0, 0), (4, 0, 0), (0, 4, 0), (1, 1, -1), (1, 1, 1), (2, 1, 1)],
             [(0, 1, 2), (3, 4, 5)])
    assert check_embedded(M) == [(0, 1)]


def test_check_embedded_parallel_matches_serial(monkeypatch):
    import plspan.mesh as mesh_mod
    monkeypatch.setattr(mesh_mod, "PARALLEL_MIN_JOBS", 0)
    M = strip(30, twist=False)
    assert check_embedded(M, workers=2) == check_embedded(M, workers=1)


def test_boundary_subdivision():
    P = validate([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])
    assert check_boundary_subdivision(SQUARE2, P) == []
    sub = Mesh(list(SQUARE2.vertices) + [(F(1, 2), F(0), F(0))], [(0, 4, 3), (4, 1, 2), (4, 2, 3)])
    assert check_boundary_subdivision(sub, P) == []
    off = Mesh([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 2, 0)], [(0, 1, 2), (0, 2, 3)])
    assert check_boundary_subdivision(off, P)


def test_complementary():
    P = validate([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])
    assert check_complementary(SQUARE2, P) == []
    Q = validate([(0, 0, 0), (1, 0, 0), (F(1, 4), F(1, 4), 1), (F(1, 4), F(1, 4), -1)])
    tri = Mesh([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2)])
    assert check_complementary(tri, Q)


def test_off_and_json_export():
    off = export_off(SQUARE2, precision=2)
    assert off.splitlines()[:3] == ["OFF", "4 2 0", "0.00 0.00 0.00"]
    assert off.splitlines()[-1] == "3 0 2 3"
    M = Mesh([(F(1, 3), 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2)])
    assert import_exact_json(export_exact_json(M)).vertices == M.vertices
    with pytest.raises(UnsupportedDimensionForOFF):
        export_off(Mesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)]))


def test_merge_meshes_identifies_equal_points():
    a = Mesh([(0, 0, 0), (1, 0, 0), (1, 1, 0)], [(0, 1, 2)])
    b = Mesh([(0, 0, 0), (1, 1, 0), (0, 1, 0)], [(0, 1, 2)])
    M = merge_meshes([a, b])
    assert len(M.vertices) == 4 and topology(M).chi == 1

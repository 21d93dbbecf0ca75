import pytest

from plspan.diagram import (ExhaustedAttempts, GeneralPositionViolated, crossing_count,
                            find_diagram, gauss_code, project, sampled_diagrams, writhe)
from plspan.exact import STANDARD_FRAME, ProjectionFrame
from plspan.families import TREFOIL_6, TREFOIL_7
from plspan.polygon import validate


def mirror(pts):
    return [(x, y, -z) for x, y, z in pts]


def alternating_trefoil_code(code):
    labels = [k for k, _ in code]
    ou = [s for _, s in code]
    return (len(code) == 6 and all(ou[i] != ou[i - 1] for i in range(6))
            and all(labels[i] == labels[(i + 3) % 6] for i in range(6)))


def test_positive_crossing_convention():
    # over strand heading up-right, under strand heading up-left: positive by the right-hand rule
    P = validate([(-1, -1, 1), (1, 1, 1), (1, -1, 0), (-1, 1, 0)])
    D = project(P, STANDARD_FRAME)
    assert D.c == 1
    x = D.crossings[0]
    assert (x.over_edge, x.under_edge, x.sign) == (0, 2, 1)
    assert x.point2d == (0, 0)
    assert writhe(project(validate(mirror(P.vertices)), STANDARD_FRAME)) == -1


@pytest.mark.parametrize("pts", [TREFOIL_6, TREFOIL_7])
def test_trefoils(pts):
    D = project(validate(pts), STANDARD_FRAME)
    assert D.c == 3 and writhe(D) == 3
    assert alternating_trefoil_code(gauss_code(D))
    assert crossing_count(D) <= D.n * (D.n - 3) // 2


def test_mirror_negates_writhe_and_reversal_keeps_it():
    P = validate(TREFOIL_7)
    assert writhe(project(validate(mirror(TREFOIL_7)), STANDARD_FRAME)) == -3
    assert writhe(project(P.reversed(), STANDARD_FRAME)) == 3


def test_writhe_depends_only_on_viewing_axis():
    P = validate(TREFOIL_7)
    swapped = ProjectionFrame((0, 1, 0), (1, 0, 0), (0, 0, 1))     # det -1
    flipped = ProjectionFrame((1, 0, 0), (0, -1, 0), (0, 0, -1))   # viewed from below
    assert writhe(project(P, swapped)) == writhe(project(P, flipped)) == 3


def test_general_position_violations():
    vertical = validate([(0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 0)])
    with pytest.raises(GeneralPositionViolated) as exc:
        project(vertical, STANDARD_FRAME)
    assert exc.value.condition == "a"
    # vertex 3 projects onto the interior of edge 0
    on_edge = validate([(0, 0, 0), (2, 0, 0), (2, 2, 0), (1, 0, 1), (0, 2, 0)])
    with pytest.raises(GeneralPositionViolated) as exc:
        project(on_edge, STANDARD_FRAME)
    assert exc.value.condition == "f"


def test_find_diagram_prefers_standard_frame_and_recovers():
    assert find_diagram(validate(TREFOIL_7)).frame == STANDARD_FRAME
    vertical = validate([(0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 0)])
    D = find_diagram(vertical, seed=3)
    assert D.frame != STANDARD_FRAME and D.frame.det > 0
    with pytest.raises(ExhaustedAttempts):
        find_diagram(vertical, max_attempts=1)


def test_find_diagram_is_deterministic():
    vertical = validate([(0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 0)])
    assert find_diagram(vertical, seed=9).frame == find_diagram(vertical, seed=9).frame


def test_sampled_diagrams_of_trefoil_have_three_or_more_crossings():
    Ds = sampled_diagrams(validate(TREFOIL_7), 12, seed=1)
    assert len({D.frame.w for D in Ds}) == 12
    assert all(D.c >= 3 for D in Ds)

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherecolor import isbell
from spherecolor.coloring import is_nice_coloring
from spherecolor.generators import genus_two_mesh, icosahedral_subdivision, torus_grid
from spherecolor.tilings import (
    BUILTINS,
    MetricDomain,
    Tile,
    TilingDoc,
    TilingError,
    adjacency_graph,
    builtin_construction,
    cylinder7,
    cylinder_sqrt21_circumference,
    dump_tiling,
    euler_obstruction,
    genus4,
    load_tiling,
    moser_spindle,
    plane_isbell,
    torus_isbell,
    verify_nice_tiling,
)


@pytest.fixture(scope="module")
def cyl():
    return cylinder7()


@pytest.fixture(scope="module")
def cyl_report(cyl):
    return verify_nice_tiling(cyl)


def square(x, y, side=0.5):
    return np.array([[x, y], [x + side, y], [x + side, y + side], [x, y + side]])


# -- cylinder -----------------------------------------------------------------------------

def test_cylinder_is_nice(cyl, cyl_report):
    assert len(cyl.tiles) == 31
    assert cyl_report.passed
    assert cyl_report.diameter_margin > cyl_report.error_bar
    assert cyl_report.distance_margin > cyl_report.error_bar
    assert cyl_report.coverage == pytest.approx(1.0, abs=1e-9)


def test_cylinder_adjacency_is_a_sphere(cyl):
    adj = adjacency_graph(cyl)
    assert adj.fully_triangulated
    assert adj.mesh.euler_characteristic == 2
    assert len(adj.edges) == 3 * len(cyl.tiles) - 6
    ok, _ = is_nice_coloring(adj.mesh, [t.color for t in cyl.tiles], 7)
    assert ok


def test_cylinder_scaled_down_fails(cyl):
    rep = verify_nice_tiling(cyl.scaled(0.9))
    assert not rep.passed
    assert rep.min_same_color_distance < 1


def test_cylinder_sqrt21_circumference():
    assert cylinder_sqrt21_circumference() == pytest.approx(9.165, abs=1e-3)
    assert cylinder_sqrt21_circumference(0.1) == pytest.approx(1.1 * 2 * math.sqrt(21))


@settings(max_examples=5, deadline=None)
@given(st.floats(0.0, 2.05))
def test_cylinder_rotation_invariance(cyl_report, cyl, du):
    rep = verify_nice_tiling(cyl.moved(du))
    tol = 2 * (rep.error_bar + cyl_report.error_bar)
    assert rep.passed
    assert rep.min_same_color_distance == pytest.approx(cyl_report.min_same_color_distance, abs=tol)
    assert rep.max_diameter == pytest.approx(cyl_report.max_diameter, abs=tol)


# -- plane and torus -----------------------------------------------------------------

def test_plane_patch_is_nice():
    doc = plane_isbell()
    rep = verify_nice_tiling(doc)
    assert rep.passed
    assert rep.max_diameter == pytest.approx(2 * 0.76 / math.sqrt(3))
    assert rep.error_bar == 0.0


def test_plane_patch_adjacency_is_lattice():
    doc = plane_isbell(radius=2)
    pts = isbell.ball((0, 0), 2)
    want = {(i, j) for i, j in itertools.combinations(range(len(pts)), 2)
            if isbell.hex_distance(pts[i], pts[j]) == 1}
    assert set(adjacency_graph(doc).edges) == want


def test_plane_patch_too_small_fails():
    assert not verify_nice_tiling(plane_isbell(spacing=0.6)).passed


def test_torus_is_nice_and_triangulated():
    doc = torus_isbell(2, 2)
    assert len(doc.tiles) == 28
    assert verify_nice_tiling(doc).passed
    adj = adjacency_graph(doc)
    assert adj.fully_triangulated and adj.mesh.euler_characteristic == 0
    assert is_nice_coloring(adj.mesh, [t.color for t in doc.tiles], 7)[0]


def test_point_contact_flag():
    doc = TilingDoc(MetricDomain("plane"), 2, (Tile(1, square(0, 0)), Tile(2, square(0.5, 0.5))))
    assert adjacency_graph(doc).edges == ()
    touching = adjacency_graph(doc, point_contact=True)
    assert touching.edges == ((0, 1),) and touching.point_contacts == ((0, 1),)


def test_overlapping_tiles_rejected():
    doc = TilingDoc(MetricDomain("plane"), 2, (Tile(1, square(0, 0)), Tile(2, square(0.25, 0.25))))
    with pytest.raises(TilingError):
        verify_nice_tiling(doc)


# -- genus construction and point sets -------------------------------------------------

def test_genus4_distance():
    rep = verify_nice_tiling(genus4(3))
    assert rep.passed
    assert rep.min_same_color_distance == pytest.approx(math.sqrt(0.45**2 + 0.9**2), abs=1e-9)
    assert rep.min_same_color_distance == pytest.approx(1.00623, abs=1e-5)


def test_genus4_crossbars_apart():
    doc = genus4(4)
    bars = [t.polygon for t in doc.tiles if t.color == 4]
    assert len(bars) == 5
    xs = sorted(b[0, 0] for b in bars)
    assert min(np.diff(xs)) > 1


def test_genus4_narrow_rails_fail():
    assert not verify_nice_tiling(genus4(2, rail_gap=0.85)).passed


def test_moser_spindle():
    ps = moser_spindle()
    pairs = ps.unit_pairs()
    assert len(pairs) == 11
    d = np.linalg.norm(ps.points[:, None] - ps.points[None], axis=-1)
    assert all(abs(d[i, j] - 1) <= 1e-9 for i, j in pairs)
    # independent brute force over every 3- and 4-colouring
    ok3 = any(all(c[i] != c[j] for i, j in pairs) for c in itertools.product(range(3), repeat=7))
    ok4 = any(all(c[i] != c[j] for i, j in pairs) for c in itertools.product(range(4), repeat=7))
    assert not ok3 and ok4
    assert ps.colorable(3) is None and ps.colorable(4) is not None


# -- Euler obstruction --------------------------------------------------------------

def test_euler_obstruction():
    rep = euler_obstruction(genus_two_mesh(100))
    assert (rep.vertices, rep.edges) == (100, 306)
    assert rep.average_degree == pytest.approx(6.12)
    assert rep.obstruction and rep.max_degree >= 7
    sphere = euler_obstruction(icosahedral_subdivision(3))
    assert not sphere.obstruction and sphere.average_degree < 6
    torus = euler_obstruction(torus_grid(6, 5))
    assert not torus.obstruction and torus.average_degree == 6


# -- documents -----------------------------------------------------------------------

@pytest.mark.parametrize("name", BUILTINS)
def test_builtin_roundtrip(name):
    obj = builtin_construction(name)
    if isinstance(obj, TilingDoc):
        back = load_tiling(dump_tiling(obj))
        assert back.domain == obj.domain and len(back.tiles) == len(obj.tiles)
        assert all(np.allclose(a.polygon, b.polygon) and a.color == b.color and a.kind == b.kind
                   for a, b in zip(obj.tiles, back.tiles))
    else:
        assert len(obj.to_dict()["unit_pairs"]) == 11


def test_document_errors():
    with pytest.raises(TilingError):
        builtin_construction("klein_bottle")
    with pytest.raises(TilingError):
        builtin_construction("cylinder7", sides=3)
    with pytest.raises(TilingError):
        TilingDoc(MetricDomain("plane"), 2, (Tile(3, square(0, 0)),))
    with pytest.raises(TilingError):
        TilingDoc(MetricDomain("plane"), 2, (Tile(1, square(0, 0), "cap"),))
    with pytest.raises(TilingError):
        MetricDomain("cylinder", radius=1.0)
    with pytest.raises(TilingError):
        MetricDomain("flat_torus", periods=((1.0, 0.0), (2.0, 0.0)))
    with pytest.raises(TilingError):
        TilingDoc.from_dict({"domain": {"kind": "plane"}, "k": 2})

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherecolor import isbell
from spherecolor.isbell import (
    DIRECTIONS,
    REFERENCE_CENTER_COLORING,
    IsbellParams,
    all_params,
    ball,
    direction_index,
    direction_table,
    fit_params,
    fragment,
    hex_distance,
    in_period_lattice,
    isbell_color,
    to_xy,
    walk_turning_sum,
)

params_st = st.builds(IsbellParams, st.sampled_from("AB"), st.permutations(range(1, 8)).map(tuple),
                      st.tuples(st.integers(-5, 5), st.integers(-5, 5)))


def test_lattice_geometry():
    for d in DIRECTIONS:
        x, y = to_xy(d)
        assert math.isclose(math.hypot(x, y), 1.0)
    angles = [math.degrees(math.atan2(*reversed(to_xy(d)))) % 360 for d in DIRECTIONS]
    assert angles == pytest.approx([0, 60, 120, 180, 240, 300])
    assert hex_distance((2, -1)) == 2
    with pytest.raises(ValueError):
        direction_index((1, 1))


def test_fragment_sizes():
    gh = fragment("G_h")
    assert len(gh.points) == 7 and gh.edge_count() == 12
    plus = fragment("G_h_plus")
    extra = set(plus.points) - set(gh.points)
    assert len(extra) == 1 and hex_distance(next(iter(extra))) == 2
    big = fragment("G_H")
    assert len(big.points) == 19 == len(ball((0, 0), 2))
    assert set(big.labels.values()) == set(big.points)


def test_base_color_and_period():
    p = IsbellParams()
    assert isbell_color(p, (0, 0)) == 1
    assert isbell_color(p, (3, 4)) == isbell_color(p, (10, 4))
    assert in_period_lattice(p, (7, 0))
    assert not in_period_lattice(p, (1, 0))


@settings(max_examples=50, deadline=None)
@given(params_st)
def test_isbell_colorings_are_nice(p):
    pts = ball((0, 0), 4)
    for q, r in itertools.combinations(pts, 2):
        if hex_distance(q, r) <= 2:
            assert isbell_color(p, q) != isbell_color(p, r)


@settings(max_examples=50, deadline=None)
@given(params_st, st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_period_lattice_is_exact(p, v):
    same = all(isbell_color(p, q) == isbell_color(p, isbell.add(q, v)) for q in ball((0, 0), 2))
    assert same == in_period_lattice(p, v)


def test_reference_center_fits_once_per_chirality():
    fits = fit_params(REFERENCE_CENTER_COLORING)
    assert sorted(p.chirality for p in fits) == ["A", "B"]
    for p in fits:
        assert all(isbell_color(p, q) == c for q, c in REFERENCE_CENTER_COLORING.items())


def test_all_params_are_distinct():
    window = ball((0, 0), 3)
    seen = {tuple(isbell_color(p, q) for q in window) for p in all_params()}
    assert len(seen) == len(all_params()) == 2 * math.factorial(7)


@pytest.mark.slow
def test_isbell_uniqueness():
    rep = isbell.verify_isbell_uniqueness()
    assert rep["ok"]
    assert rep["fixed_count"] == 2
    assert rep["unrestricted_count"] == 10080
    for comp in rep["completions"]:
        p = IsbellParams(comp["params"]["chirality"], tuple(comp["params"]["perm"]))
        assert list(comp["colors"]) == [isbell_color(p, q) for q in fragment("G_H").points]


def test_isbell_extension():
    rep = isbell.verify_isbell_extension()
    assert rep["ok"]
    assert rep["extensions_per_hexagon"] == [2]
    assert rep["extensions_per_hexagon_plus"] == [1]


def test_no_two_params_agree_on_hexagon_plus():
    pts = fragment("G_h_plus").points
    keys = [tuple(isbell_color(p, q) for q in pts) for p in all_params()]
    assert len(set(keys)) == len(keys)


def test_direction_table_reference():
    t = direction_table(IsbellParams())
    assert t(isbell_color(t.params, (0, 0)), isbell_color(t.params, (1, 0))) == 0
    with pytest.raises(KeyError):
        t(3, 3)


@settings(max_examples=40, deadline=None)
@given(params_st, st.tuples(st.integers(-30, 30), st.integers(-30, 30)), st.integers(0, 5))
def test_direction_table_reads_edge_direction(p, q, d):
    t = direction_table(p)
    r = isbell.add(q, DIRECTIONS[d])
    assert t(isbell_color(p, q), isbell_color(p, r)) == d
    assert t(isbell_color(p, r), isbell_color(p, q)) == (d + 3) % 6


def test_elementary_triangles_turn_to_zero():
    for p in (IsbellParams("A"), IsbellParams("B", (3, 1, 4, 7, 5, 2, 6))):
        t = direction_table(p)
        tri = fragment("custom", [(a, b) for a in range(16) for b in range(16)]).triangles()
        assert len(tri) == 2 * 15 * 15
        for cyc in tri:
            assert walk_turning_sum(t, [isbell_color(p, q) for q in cyc]) == 0


@settings(max_examples=100, deadline=None)
@given(params_st, st.lists(st.integers(0, 5), min_size=1, max_size=15))
def test_closed_walk_turning_sum(p, steps):
    # go out along ``steps`` and come back along a shortest path
    pts = [(0, 0)]
    for d in steps:
        pts.append(isbell.add(pts[-1], DIRECTIONS[d]))
    while pts[-1] != (0, 0) or len(pts) < 3:
        cur = pts[-1]
        nxt = min((isbell.add(cur, d) for d in DIRECTIONS), key=lambda x: (hex_distance(x), x))
        pts.append(nxt)
    walk = pts[:-1]
    assert len(walk) <= 30
    t = direction_table(p)
    assert walk_turning_sum(t, [isbell_color(p, q) for q in walk]) == 0

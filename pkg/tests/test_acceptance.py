"""The fourteen acceptance criteria, each at its stated tolerance and time budget.

Every test records its verdict through the ``criterion`` fixture; the
terminal summary prints one PASS/FAIL line per criterion.
"""

import itertools
import math
import time

import networkx as nx
import numpy as np
import pytest
import shapely

from spherecolor import isbell
from spherecolor.coloring import is_nice_coloring, search_nice_coloring
from spherecolor.curvature import (
    SWEEP_LENGTH_BOUND,
    case1_trees,
    classify_case,
    contract_to_triangle,
    cut_along_trees,
    cycle_curvature,
    proximity_graph,
    random_disk_cycle,
    separating_cycle,
    sweep_cycles,
)
from spherecolor.generators import genus_two_mesh, icosahedral_subdivision, torus_grid
from spherecolor.geometry import (
    directed_hausdorff,
    hausdorff,
    signed_cycle_distance,
    small_circle,
    star_cycle,
)
from spherecolor.mesh import irregular_vertices, multiplicity, reverse_cycle
from spherecolor.tilings import (
    adjacency_graph,
    cylinder7,
    euler_obstruction,
    genus4,
    moser_spindle,
    verify_nice_tiling,
)

MESHES = {f: icosahedral_subdivision(f) for f in (1, 2, 3, 4)}
SAMPLES = 10_000
GEOM_TOL = 1e-9


def inside_by_flood(m, c):
    """Vertices left of ``c``: flood over triangles sharing an edge, never crossing ``c``."""
    n = len(c)
    cut = {frozenset((c[k], c[(k + 1) % n])) for k in range(n)}
    by_edge = {}
    for t, tri in enumerate(m.triangles):
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            by_edge.setdefault(frozenset((a, b)), []).append(t)
    dual = nx.Graph()
    dual.add_nodes_from(range(len(m.triangles)))
    dual.add_edges_from(ts for e, ts in by_edge.items() if e not in cut)
    region = set()
    for k in range(n):
        region |= nx.node_connected_component(dual, m.left_triangle(c[k], c[(k + 1) % n]))
    return {x for t in region for x in m.triangles[t]} - set(c)


@pytest.fixture(scope="module")
def cycle_corpus():
    """1000 simple separating cycles, 250 per frequency, half of them reversed."""
    rng = np.random.default_rng(20240611)
    corpus = []
    for f, m in MESHES.items():
        for i in range(250):
            c, disk = random_disk_cycle(m, int(rng.integers(1, len(m.triangles))), rng)
            interior = len(disk)
            if i % 2:
                c = reverse_cycle(c)
                interior = len(m.triangles) - len(disk)
            corpus.append((f, c, interior))
    return corpus


def test_c01_irregular_census(criterion):
    start = time.perf_counter()
    totals = {}
    for f in (1, 2, 3, 4, 6, 8):
        m = icosahedral_subdivision(f)
        totals[f] = sum(mult for _, mult in irregular_vertices(m))
        assert max(m.degree(v) for v in range(m.vertex_count)) <= 6
    elapsed = time.perf_counter() - start
    ok = all(t == 12 for t in totals.values()) and elapsed < 1.0
    criterion(1, "sum of multiplicities is 12 for f in {1,2,3,4,6,8}", ok, f"{elapsed:.3f} s")
    assert ok, totals


def test_c02_curvature_identity(criterion, cycle_corpus):
    start = time.perf_counter()
    bad = []
    for f, c, _ in cycle_corpus:
        m = MESHES[f]
        want = 6 - sum(multiplicity(m, v) for v in inside_by_flood(m, c))
        if cycle_curvature(m, c)[0] != want:
            bad.append((f, c))
    elapsed = time.perf_counter() - start
    ok = not bad and len(cycle_corpus) == 1000 and elapsed < 30
    criterion(2, "curvature = 6 - irregular inside on 1000 cycles", ok,
              f"{len(bad)} mismatches, {elapsed:.2f} s")
    assert ok


def test_c03_contraction(criterion, cycle_corpus):
    bad = []
    for f, c, interior in cycle_corpus:
        m = MESHES[f]
        tr = contract_to_triangle(m, c)
        good = len(tr.steps) == interior - 1 and tr.interior_triangles == interior
        prev = tr.start_curvature
        for s in tr.steps:
            good &= s.curvature == prev + (multiplicity(m, s.pivot) if s.kind == "Type2" else 0)
            prev = s.curvature
        good &= prev == 6 and len(tr.final_cycle) == 3
        if not good:
            bad.append((f, c))
    ok = not bad
    criterion(3, "contraction trace length and curvature bookkeeping", ok, f"{len(bad)} failures")
    assert ok


def test_c04_isbell_uniqueness(criterion):
    start = time.perf_counter()
    rep = isbell.verify_isbell_uniqueness()
    elapsed = time.perf_counter() - start
    frag = isbell.fragment("G_H")
    restricted = all(
        list(comp["colors"]) == [isbell.isbell_color(
            isbell.IsbellParams(comp["params"]["chirality"], tuple(comp["params"]["perm"])), q)
            for q in frag.points]
        for comp in rep["completions"])
    ok = (rep["ok"] and rep["fixed_count"] == 2 and rep["unrestricted_count"] == 10080
          and restricted and elapsed < 60)
    criterion(4, "fixed centre gives 2 completions, unrestricted 10080", ok, f"{elapsed:.2f} s")
    assert ok


def test_c05_isbell_extension(criterion):
    start = time.perf_counter()
    rep = isbell.verify_isbell_extension()
    elapsed = time.perf_counter() - start
    ok = (rep["ok"] and rep["extensions_per_hexagon"] == [2]
          and rep["extensions_per_hexagon_plus"] == [1] and elapsed < 60)
    criterion(5, "hexagon: 2 extensions each, hexagon plus one: at most 1", ok, f"{elapsed:.2f} s")
    assert ok


def random_simple_lattice_cycle(rng, max_len=30):
    while True:
        walk = [(0, 0)]
        seen = {(0, 0)}
        while len(walk) < max_len:
            cur = walk[-1]
            if len(walk) >= 3 and (0, 0) in isbell.neighbors(cur) and rng.random() < 0.3:
                return walk
            options = [q for q in isbell.neighbors(cur) if q not in seen]
            if not options:
                break
            nxt = options[int(rng.integers(len(options)))]
            walk.append(nxt)
            seen.add(nxt)
        if len(walk) >= 3 and (0, 0) in isbell.neighbors(walk[-1]):
            return walk


def test_c06_direction_calculus(criterion):
    rng = np.random.default_rng(7)
    params = [isbell.IsbellParams("A"), isbell.IsbellParams("B", (3, 1, 4, 7, 5, 2, 6))]
    block = isbell.fragment("custom", [(a, b) for a in range(16) for b in range(16)]).triangles()
    cycles = [random_simple_lattice_cycle(rng) for _ in range(100)]
    sums = []
    for p in params:
        t = isbell.direction_table(p)
        for cyc in itertools.chain(block, cycles):
            sums.append(isbell.walk_turning_sum(t, [isbell.isbell_color(p, q) for q in cyc]) % 6)
    ok = len(block) == 2 * 15 * 15 and all(len(c) <= 30 for c in cycles) and not any(sums)
    criterion(6, "turning sums vanish mod 6 on 450 triangles and 100 cycles", ok)
    assert ok


@pytest.mark.parametrize("f", [2, 3])
def test_c07_no_nice_seven_coloring(criterion, f):
    m = MESHES[f]
    start = time.perf_counter()
    out = search_nice_coloring(m, 7, mode="prove_unsat")
    elapsed = time.perf_counter() - start
    ok = out.status == "unsat" and elapsed < 600
    criterion(7, f"f={f} (V={m.vertex_count}) is unsat for k=7", ok,
              f"{out.stats.nodes} nodes, {elapsed:.2f} s")
    assert ok


def test_c08_case_pipeline(criterion):
    m = MESHES[4]
    h = proximity_graph(m)
    singletons = len(h.components) == 12 and all(len(c) == 1 for c in h.components)
    case = classify_case(h)
    curv = [cycle_curvature(m, separating_cycle(m, comp))[0] for comp in h.components]
    ok = singletons and case == "Case2" and curv == [5] * 12 and all(x % 6 for x in curv)
    criterion(8, "f=4: 12 singletons, Case2, separating cycles have curvature 5", ok)
    assert ok


def test_c09_cylinder(criterion):
    start = time.perf_counter()
    doc = cylinder7()
    rep = verify_nice_tiling(doc)
    adj = adjacency_graph(doc)
    nice, _ = is_nice_coloring(adj.mesh, [t.color for t in doc.tiles], 7)
    elapsed = time.perf_counter() - start
    margins = min(rep.diameter_margin, rep.distance_margin) - rep.error_bar
    ok = rep.passed and margins > GEOM_TOL and adj.fully_triangulated and nice and elapsed < 10
    criterion(9, "cylinder is nice, triangulated, induced colouring nice", ok,
              f"diameter margin {rep.diameter_margin:.4f}, distance margin {rep.distance_margin:.4f}, "
              f"error bar {rep.error_bar:.2e}, {elapsed:.2f} s")
    assert ok


def test_c10_genus_construction(criterion):
    doc = genus4(4)
    rep = verify_nice_tiling(doc)
    want = math.sqrt(0.45**2 + 0.9**2)
    bars = [shapely.LineString(t.polygon) for t in doc.tiles if t.color == 4]
    bar_gap = min(a.distance(b) for a, b in itertools.combinations(bars, 2))
    ok = (rep.passed and abs(rep.min_same_color_distance - want) <= GEOM_TOL
          and abs(rep.min_same_color_distance - 1.00623) < 5e-6 and bar_gap > 1)
    criterion(10, "minimum same-colour distance 1.00623, crossbars more than 1 apart", ok,
              f"{rep.min_same_color_distance:.12f}, crossbar gap {bar_gap:.3f}")
    assert ok


def test_c11_moser_spindle(criterion):
    start = time.perf_counter()
    ps = moser_spindle()
    pairs = ps.unit_pairs(GEOM_TOL)
    d = np.linalg.norm(ps.points[:, None] - ps.points[None], axis=-1)
    near = [(i, j) for i, j in itertools.combinations(range(7), 2) if abs(d[i, j] - 1) <= GEOM_TOL]

    def colorable(k):
        return any(all(c[i] != c[j] for i, j in pairs) for c in itertools.product(range(k), repeat=7))

    ok3, ok4 = colorable(3), colorable(4)
    elapsed = time.perf_counter() - start
    ok = (len(pairs) == 11 and pairs == near and not ok3 and ok4 and ps.colorable(3) is None
          and ps.colorable(4) is not None and elapsed < 1)
    criterion(11, "11 unit pairs, not 3-colourable, 4-colourable", ok, f"{elapsed:.3f} s")
    assert ok


def random_unit(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def arc(a, b):
    return np.arctan2(np.linalg.norm(np.cross(a, b), axis=-1), np.sum(a * b, axis=-1))


def nested_pairs(rng, count):
    """Star-shaped c1 strictly inside star-shaped c2 around a shared random centre."""
    for _ in range(count):
        center = random_unit(rng, 1)[0]
        n = int(rng.integers(4, 9))
        ang = np.linspace(0, 2 * math.pi, n, endpoint=False) + rng.uniform(0, 0.3, n)
        r2 = rng.uniform(0.3, 1.2, n)
        yield star_cycle(center, r2 * rng.uniform(0.2, 0.95), ang), star_cycle(center, r2, ang)


def test_c12_two_points_and_cycle(criterion):
    rng = np.random.default_rng(12)
    worst = -np.inf
    for k in range(200):
        c = small_circle(random_unit(rng, 1)[0], rng.uniform(0.05, 1.5), int(rng.integers(3, 12)))
        p1, p2 = random_unit(rng, 50), random_unit(rng, 50)
        lhs = np.abs(signed_cycle_distance(p1, c) - signed_cycle_distance(p2, c))
        worst = max(worst, float(np.max(lhs - arc(p1, p2))))
    ok = worst <= GEOM_TOL
    criterion(12, "two points against one cycle, 10^4 samples", ok, f"worst excess {worst:.2e}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the one-sided bound fails when the point lies outside "
                   "both cycles; see the symmetric check below")
def test_c12_point_and_nested_cycles_one_sided(criterion):
    rng = np.random.default_rng(13)
    violations = 0
    for c1, c2 in nested_pairs(rng, 200):
        p = random_unit(rng, SAMPLES // 200)
        lhs = np.abs(signed_cycle_distance(p, c1) - signed_cycle_distance(p, c2))
        bound, err = directed_hausdorff(c1, c2, 32)
        violations += int(np.sum(lhs > bound + err + GEOM_TOL))
    ok = violations == 0
    criterion(12, "point against nested cycles, one-sided bound, 10^4 samples", ok,
              f"{violations} of {SAMPLES} samples violate it")
    assert ok


def test_c12_point_and_nested_cycles_symmetric(criterion):
    rng = np.random.default_rng(13)
    violations = 0
    for c1, c2 in nested_pairs(rng, 200):
        p = random_unit(rng, SAMPLES // 200)
        lhs = np.abs(signed_cycle_distance(p, c1) - signed_cycle_distance(p, c2))
        bound, err = hausdorff(c1, c2, 32)
        violations += int(np.sum(lhs > bound + err + GEOM_TOL))
    ok = violations == 0
    criterion(12, "point against nested cycles, symmetric Hausdorff bound, 10^4 samples", ok,
              f"{violations} violations")
    assert ok


def test_c13_sweep(criterion):
    m = MESHES[2]
    tp = case1_trees(m)
    cm = cut_along_trees(m, tp)
    tr = sweep_cycles(cm)
    ends = sorted(tr.cycles[-1]) == sorted(cm.boundaries[1])
    steiner = tp.t0.edge_count if tp.t0 is not None else 0
    ok = (ends and tr.max_length <= SWEEP_LENGTH_BOUND == 44 and all(tr.vertex_contract)
          and all(tr.edge_contract) and steiner <= 33 and tp.max_edges <= 22)
    criterion(13, "f=2 sweep ends at the second tree, contracts and bounds hold", ok,
              f"{len(tr.kinds)} steps, max length {tr.max_length}, |E(t0)|={steiner}, "
              f"max split {tp.max_edges}")
    assert ok


def test_c14_euler_obstruction(criterion):
    g2 = euler_obstruction(genus_two_mesh(100))
    sphere = euler_obstruction(icosahedral_subdivision(3))
    torus = euler_obstruction(torus_grid(7, 7))
    ok = (g2.vertices == 100 and g2.euler_characteristic == -2 and g2.obstruction
          and g2.max_degree >= 7 and not sphere.obstruction and not torus.obstruction)
    criterion(14, "genus 2 forces degree 7, sphere and torus do not", ok,
              f"genus-2 max degree {g2.max_degree}")
    assert ok

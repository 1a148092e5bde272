"""Cycle curvature, contraction, irregularity proximity, tree surgery and sweeps.

Directed cycles keep their interior on the left.  The local curvature of a
cycle vertex is ``2 - (number of interior edges at it)`` and the curvature of
the cycle is the sum over its vertices.

The cut surface along two trees is modelled on top of the original mesh: a
cycle of the cut surface is the boundary walk of a connected complex (a tree
plus the triangles swept so far) and each visit of an original vertex is
mapped to the copy owning the corners passed during that visit.
"""

from __future__ import annotations

import itertools

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import isbell
from .coloring import Coloring, ColoringError
from .mesh import (
    Edge,
    MeshError,
    TriMesh,
    _edge,
    check_cycle,
    interior_region,
    irregular_vertices,
    multiplicity,
    neighborhood,
    shortest_path,
)

H_THRESHOLD = 3
SWEEP_LENGTH_BOUND = 44


class CurvatureError(RuntimeError):
    """A construction precondition failed or a proved bound was violated."""


# -- curvature ---------------------------------------------------------------------

def _local_curvatures(m: TriMesh, c: Sequence[int]) -> list[int]:
    n = len(c)
    out = []
    for k in range(n):
        v = c[k]
        d = m.degree(v)
        pos = m._pos[v]
        inside = (pos[c[k - 1]] - pos[c[(k + 1) % n]]) % d - 1
        out.append(2 - inside)
    return out


def cycle_curvature(m: TriMesh, c: Sequence[int]) -> tuple[int, list[int]]:
    """Total curvature and the per-vertex local curvatures."""
    c = check_cycle(m, c)
    interior_region(m, c)  # raises for non-separating cycles
    lcs = _local_curvatures(m, c)
    return sum(lcs), lcs


def irregular_inside(m: TriMesh, c: Sequence[int]) -> int:
    region = interior_region(m, c)
    return sum(multiplicity(m, v) for v in region.vertices)


# -- contraction ------------------------------------------------------------------

@dataclass(frozen=True)
class ContractionStep:
    cycle: tuple[int, ...]
    kind: str  # "Type1" | "Type2"
    pivot: int  # removed vertex (Type1) or inserted vertex (Type2)
    curvature: int


@dataclass(frozen=True)
class ContractionTrace:
    start: tuple[int, ...]
    start_curvature: int
    interior_triangles: int
    steps: tuple[ContractionStep, ...]

    @property
    def final_cycle(self) -> tuple[int, ...]:
        return self.steps[-1].cycle if self.steps else self.start

    def to_dict(self) -> dict:
        return {
            "start": list(self.start),
            "start_curvature": self.start_curvature,
            "interior_triangles": self.interior_triangles,
            "steps": [{"cycle": list(s.cycle), "kind": s.kind, "pivot": s.pivot,
                       "curvature": s.curvature} for s in self.steps],
        }


def _contract_once(m: TriMesh, c: tuple[int, ...]) -> tuple[tuple[int, ...], str, int]:
    n = len(c)
    on_cycle = set(c)
    type1 = []
    type2 = []
    for k in range(n):
        v, w = c[k], c[(k + 1) % n]
        x = m.left_third(v, w)
        if x == c[k - 1]:
            if n > 3:
                type1.append((v, k))
        elif x not in on_cycle:
            type2.append((x, v, k))
    if type1:
        _, k = min(type1)
        return c[:k] + c[k + 1:], "Type1", c[k]
    if type2:
        x, _, k = min(type2)
        return c[:k + 1] + (x,) + c[k + 1:], "Type2", x
    raise CurvatureError(f"no contraction step applies to {c}")


def contract_step(m: TriMesh, c: Sequence[int]) -> tuple[tuple[int, ...], str, int]:
    """One interior-shrinking step; the interior loses exactly one triangle."""
    c = check_cycle(m, c)
    if len(interior_region(m, c).triangles) < 2:
        raise CurvatureError("cycle already bounds a single triangle")
    return _contract_once(m, c)


def contract_to_triangle(m: TriMesh, c: Sequence[int]) -> ContractionTrace:
    c = check_cycle(m, c)
    count = len(interior_region(m, c).triangles)
    start_curv = sum(_local_curvatures(m, c))
    steps = []
    cur = c
    for _ in range(count - 1):
        cur, kind, pivot = _contract_once(m, cur)
        steps.append(ContractionStep(cur, kind, pivot, sum(_local_curvatures(m, cur))))
    return ContractionTrace(c, start_curv, count, tuple(steps))


def random_disk_cycle(m: TriMesh, size: int, rng) -> tuple[tuple[int, ...], frozenset[int]]:
    """Grow a random triangulated disk of about ``size`` triangles.

    Returns its boundary (disk on the left) and the disk's triangle ids.
    A triangle is only added when the boundary stays a simple cycle and the
    complement keeps at least one triangle.
    """
    tris = m.triangles
    total = len(tris)
    start = int(rng.integers(total))
    disk = {start}
    boundary = list(tris[start])
    size = max(1, min(size, total - 1))
    stalls = 0
    while len(disk) < size and stalls < 50:
        n = len(boundary)
        k = int(rng.integers(n))
        u, v = boundary[k], boundary[(k + 1) % n]
        t = m.left_triangle(v, u)
        x = m.left_third(v, u)
        if x == boundary[(k + 2) % n] and n > 3:
            # triangle fills the notch u, v, x: drop v
            new = boundary[:k + 1] + boundary[k + 2:] if k + 1 < n else boundary[1:]
        elif x == boundary[k - 1] and n > 3:
            new = boundary[:k] + boundary[k + 1:]
        elif x not in boundary:
            new = boundary[:k + 1] + [x] + boundary[k + 1:]
        else:
            stalls += 1
            continue
        if len(disk) + 1 >= total:
            break
        disk.add(t)
        boundary = new
        stalls = 0
    return tuple(boundary), frozenset(disk)


def curvature_census(m: TriMesh, count: int, rng) -> dict:
    """Check the curvature identity and the contraction rules on random disks.

    Each sample grows a disk, so the enclosed triangles are known without
    consulting the region finder; the curvature must equal 6 minus the
    multiplicity of the vertices strictly inside that disk.
    """
    mismatches = []
    contraction_failures = []
    for i in range(count):
        size = int(rng.integers(1, len(m.triangles)))
        c, disk = random_disk_cycle(m, size, rng)
        inner = {x for t in disk for x in m.triangles[t]} - set(c)
        expected = 6 - sum(multiplicity(m, v) for v in inner)
        total, _ = cycle_curvature(m, c)
        if total != expected:
            mismatches.append({"cycle": list(c), "curvature": total, "expected": expected})
        tr = contract_to_triangle(m, c)
        prev = tr.start_curvature
        ok = len(tr.steps) == len(disk) - 1 and len(tr.final_cycle) == 3
        for st in tr.steps:
            want = prev + (multiplicity(m, st.pivot) if st.kind == "Type2" else 0)
            ok &= st.curvature == want
            prev = st.curvature
        if not (ok and prev == 6):
            contraction_failures.append(list(c))
    return {"samples": count, "mismatches": mismatches, "contraction_failures": contraction_failures,
            "ok": not mismatches and not contraction_failures}


# -- proximity graph and cases ----------------------------------------------------------

@dataclass(frozen=True)
class ProximityGraph:
    nodes: tuple[tuple[int, int], ...]  # (vertex, multiplicity)
    edges: tuple[Edge, ...]
    components: tuple[tuple[int, ...], ...]
    component_multiplicity: tuple[int, ...]
    threshold: int = H_THRESHOLD

    @property
    def total_multiplicity(self) -> int:
        return sum(mu for _, mu in self.nodes)

    def to_dict(self) -> dict:
        return {
            "nodes": [list(x) for x in self.nodes],
            "edges": [list(e) for e in self.edges],
            "components": [list(c) for c in self.components],
            "component_multiplicity": list(self.component_multiplicity),
            "threshold": self.threshold,
        }


def proximity_graph(m: TriMesh, threshold: int = H_THRESHOLD) -> ProximityGraph:
    nodes = tuple(irregular_vertices(m))
    verts = [v for v, _ in nodes]
    mult = dict(nodes)
    dist = m.distance_matrix
    edges = tuple((u, v) for i, u in enumerate(verts) for v in verts[i + 1:]
                  if dist[u, v] <= threshold)
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    comps = []
    seen: set[int] = set()
    for v in verts:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        for x in comp:
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
        comps.append(tuple(sorted(comp)))
    comps.sort()
    return ProximityGraph(nodes, edges, tuple(comps),
                          tuple(sum(mult[v] for v in c) for c in comps), threshold)


def classify_case(h: ProximityGraph) -> str:
    if h.total_multiplicity != 12:
        raise CurvatureError(f"irregular multiplicity sums to {h.total_multiplicity}, not 12")
    if len(h.components) == 1:
        return "Case1a"
    if len(h.components) == 2 and h.component_multiplicity == (6, 6):
        return "Case1b"
    return "Case2"


# -- trees ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tree:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if len(self.edges) != len(self.vertices) - 1:
            raise CurvatureError("a tree needs exactly |V| - 1 edges")
        vs = set(self.vertices)
        adj: dict[int, list[int]] = {v: [] for v in vs}
        for u, v in self.edges:
            if u not in vs or v not in vs:
                raise CurvatureError(f"edge {(u, v)} leaves the vertex set")
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.vertices[0]}
        todo = [self.vertices[0]]
        while todo:
            for y in adj[todo.pop()]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        if len(seen) != len(vs):
            raise CurvatureError("tree is not connected")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list[int]:
        return [b if a == v else a for a, b in self.edges if v in (a, b)]

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}


def make_tree(edges: Iterable[Sequence[int]], vertices: Iterable[int] = ()) -> Tree:
    es = sorted({_edge(int(a), int(b)) for a, b in edges})
    vs = set(int(v) for v in vertices) | {x for e in es for x in e}
    return Tree(tuple(sorted(vs)), tuple(es))


def steiner_tree(m: TriMesh, terminals: Iterable[int], threshold: int = H_THRESHOLD) -> Tree:
    """Tree through every terminal built from short connecting paths.

    Terminals are first joined by a spanning tree of the proximity graph, each
    tree edge is realised by a shortest mesh path, a spanning tree of the union
    is taken and non-terminal leaves are pruned.
    """
    term = sorted(set(int(v) for v in terminals))
    if not term:
        raise CurvatureError("no terminals")
    if len(term) == 1:
        return Tree((term[0],), ())
    dist = m.distance_matrix
    inside = {term[0]}
    h_edges = []
    queue = deque([term[0]])
    while queue:
        u = queue.popleft()
        for v in term:
            if v not in inside and dist[u, v] <= threshold:
                inside.add(v)
                h_edges.append((u, v))
                queue.append(v)
    if len(inside) != len(term):
        raise CurvatureError("terminals are not connected in the proximity graph")

    union: dict[int, set[int]] = {}
    for u, v in h_edges:
        path = shortest_path(m, u, v)
        for a, b in zip(path, path[1:]):
            union.setdefault(a, set()).add(b)
            union.setdefault(b, set()).add(a)
    root = term[0]
    parent = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in sorted(union[u]):
            if v not in parent:
                parent[v] = u
                queue.append(v)
    adj = {v: set() for v in parent}
    for v, p in parent.items():
        if p is not None:
            adj[v].add(p)
            adj[p].add(v)
    keep = set(term)
    leaves = [v for v in adj if len(adj[v]) == 1 and v not in keep]
    while leaves:
        v = leaves.pop()
        for p in adj.pop(v):
            adj[p].discard(v)
            if len(adj[p]) == 1 and p not in keep:
                leaves.append(p)
    tree = make_tree([(u, v) for u in adj for v in adj[u] if u < v], adj)
    bound = threshold * (len(term) - 1)
    if tree.edge_count > bound:
        raise CurvatureError(f"tree has {tree.edge_count} edges, above the bound {bound}")
    return tree


@dataclass(frozen=True)
class TreePair:
    case: str
    t1: Tree
    t2: Tree
    shared: int | None = None
    t0: Tree | None = None

    @property
    def max_edges(self) -> int:
        return max(self.t1.edge_count, self.t2.edge_count)

    def to_dict(self) -> dict:
        out = {"case": self.case, "t1": self.t1.to_dict(), "t2": self.t2.to_dict(),
               "shared": self.shared, "max_edges": self.max_edges}
        if self.t0 is not None:
            out["t0"] = self.t0.to_dict()
        return out


def _branches(tree: Tree, v: int, order: Sequence[int]) -> list[tuple[int, set[int]]]:
    """Components of ``tree - v`` as (attachment neighbour, vertex set), in ``order``."""
    adj: dict[int, list[int]] = {x: [] for x in tree.vertices}
    for a, b in tree.edges:
        adj[a].append(b)
        adj[b].append(a)
    out = []
    for w in order:
        if w not in adj[v]:
            continue
        comp = {w}
        todo = [w]
        while todo:
            for y in adj[todo.pop()]:
                if y != v and y not in comp:
                    comp.add(y)
                    todo.append(y)
        out.append((w, comp))
    return out


def split_tree(m: TriMesh, t0: Tree, bound: int = 22) -> TreePair:
    """Split ``t0`` at one vertex into two non-crossing subtrees.

    Every vertex and every cyclic interval of its branches (in rotation order)
    is tried; the split minimising the larger edge count wins, ties broken by
    vertex id, interval start and interval length.
    """
    best = None
    for v in t0.vertices:
        branches = _branches(t0, v, m.rotation[v])
        d = len(branches)
        sizes = [len(comp) for _, comp in branches]  # edges = vertices incl. attachment edge
        for s in range(d):
            for length in range(1, d):
                e1 = sum(sizes[(s + i) % d] for i in range(length))
                e2 = t0.edge_count - e1
                key = (max(e1, e2), v, s, length)
                if best is None or key < best[0]:
                    best = (key, v, [branches[(s + i) % d][1] for i in range(length)])
    if best is None:
        raise CurvatureError("tree has no vertex with two branches to split at")
    _, v, chosen = best
    side1 = set().union(*chosen) | {v}
    e1 = [e for e in t0.edges if e[0] in side1 and e[1] in side1]
    e2 = [e for e in t0.edges if e not in set(e1)]
    t1 = make_tree(e1, [v])
    t2 = make_tree(e2, [v])
    pair = TreePair("Case1a", t1, t2, v, t0)
    if t0.edge_count <= 33 and pair.max_edges > bound:
        raise CurvatureError(f"best split has {pair.max_edges} edges, above {bound}")
    return pair


def case1_trees(m: TriMesh, h: ProximityGraph | None = None) -> TreePair:
    h = h or proximity_graph(m)
    case = classify_case(h)
    if case == "Case1a":
        return split_tree(m, steiner_tree(m, h.components[0], h.threshold))
    if case == "Case1b":
        t1 = steiner_tree(m, h.components[0], h.threshold)
        t2 = steiner_tree(m, h.components[1], h.threshold)
        if set(t1.vertices) & set(t2.vertices):
            raise CurvatureError("component trees intersect")
        if max(t1.edge_count, t2.edge_count) > 15:
            raise CurvatureError("component tree above 15 edges")
        return TreePair("Case1b", t1, t2)
    raise CurvatureError("mesh is in Case 2; no tree pair")


# -- boundary walks ----------------------------------------------------------------------

@dataclass(frozen=True)
class _Complex:
    """A tree plus a set of triangles; its boundary walk keeps it on the left."""

    tree_edges: frozenset[Edge]
    faces: frozenset[int]

    def edge_set(self, m: TriMesh) -> set[Edge]:
        out = set(self.tree_edges)
        for t in self.faces:
            out.update(m.edges_of(m.triangles[t]))
        return out


def _boundary_walk(m: TriMesh, cx: _Complex) -> list[int] | None:
    """Vertex sequence of the boundary walk, or None if the boundary is not one closed walk."""
    kedges = cx.edge_set(m)
    darts = set()
    for a, b in kedges:
        for u, v in ((a, b), (b, a)):
            if m.left_triangle(v, u) not in cx.faces:
                darts.add((u, v))
    if not darts:
        return None
    start = min(darts)
    seq = []
    u, v = start
    while True:
        seq.append(u)
        w = m.ccw_next(v, u)
        while _edge(v, w) not in kedges:
            w = m.ccw_next(v, w)
        u, v = v, w
        if (u, v) == start:
            break
        if len(seq) > len(darts):
            return None
    if len(seq) != len(darts):
        return None
    return seq


def _wedge(m: TriMesh, u: int, v: int, w: int) -> list[int]:
    """Corner indices at ``v`` swept counterclockwise from ``u`` to ``w``."""
    d = m.degree(v)
    i, j = m._pos[v][u], m._pos[v][w]
    size = (j - i) % d or d
    return [(i + s) % d for s in range(size)]


# -- cut surface --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CutMesh:
    mesh: TriMesh
    trees: tuple[Tree, Tree]
    case: str
    shared: int | None
    cut_edges: Mapping[Edge, int]
    removed: tuple[frozenset[int], frozenset[int]]
    copy_vertex: tuple[int, ...]
    corner_copy: Mapping[tuple[int, int], int]
    boundaries: tuple[tuple[int, ...], tuple[int, ...]]
    boundary_walks: tuple[tuple[int, ...], tuple[int, ...]]
    euler_characteristic: int
    adjacency: tuple[frozenset[int], ...] = field(repr=False)

    def copy_of_visit(self, u: int, v: int, w: int, side: int = 0) -> int | None:
        """Copy of ``v`` used by the walk ``u -> v -> w`` of the given side.

        The side's own region lies on the left.  A dart running along the other
        tree's slit belongs to the copy on its left; every other dart belongs to
        the copy on its right.
        """
        m = self.mesh
        d = m.degree(v)
        other = 2 - side
        i = m._pos[v][u]
        j = m._pos[v][w]
        if self.cut_edges.get(_edge(u, v)) == other:
            i = (i - 1) % d
        if self.cut_edges.get(_edge(v, w)) != other:
            j = (j - 1) % d
        a = self.corner_copy[(v, i)]
        return a if a == self.corner_copy[(v, j)] else None

    def walk_to_copies(self, walk: Sequence[int], side: int = 0) -> tuple[int, ...] | None:
        n = len(walk)
        out = []
        for k in range(n):
            c = self.copy_of_visit(walk[k - 1], walk[k], walk[(k + 1) % n], side)
            if c is None:
                return None
            out.append(c)
        return tuple(out)

    def visit_corners(self, walk: Sequence[int], copies: Sequence[int]) -> list[list[int]]:
        """Corners on the right of each visit that belong to the visited copy.

        At the pinch vertex the whole wedge counts, so that the tree boundary
        sees the full corner it bounds in the uncut sphere.
        """
        m = self.mesh
        n = len(walk)
        out = []
        for k in range(n):
            v = walk[k]
            wedge = _wedge(m, walk[k - 1], v, walk[(k + 1) % n])
            if v != self.shared:
                wedge = [i for i in wedge if self.corner_copy[(v, i)] == copies[k]]
            out.append(wedge)
        return out

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "shared": self.shared,
            "copies": len(self.copy_vertex),
            "copy_vertex": list(self.copy_vertex),
            "t1_boundary": list(self.boundaries[0]),
            "t2_boundary": list(self.boundaries[1]),
            "euler_characteristic": self.euler_characteristic,
        }


def _star(m: TriMesh, v: int) -> frozenset[int]:
    return frozenset(m.left_triangle(v, w) for w in m.rotation[v])


def cut_along_trees(m: TriMesh, tp: TreePair) -> CutMesh:
    t1, t2 = tp.t1, tp.t2
    cut: dict[Edge, int] = {}
    for i, t in ((1, t1), (2, t2)):
        for e in t.edges:
            if not m.are_adjacent(*e):
                raise CurvatureError(f"tree edge {e} is not a mesh edge")
            if e in cut:
                raise CurvatureError(f"trees share the edge {e}")
            cut[e] = i
    shared = set(t1.vertices) & set(t2.vertices)
    removed = []
    for t in (t1, t2):
        removed.append(_star(m, t.vertices[0]) if t.edge_count == 0 else frozenset())
    if removed[0] & removed[1]:
        raise CurvatureError("single-vertex trees are too close")
    for i, t in ((0, t1), (1, t2)):
        other = (t2, t1)[i]
        if t.edge_count == 0 and t.vertices[0] in other.vertices:
            raise CurvatureError("a single-vertex tree may not touch the other tree")

    pinch = None
    if shared:
        if len(shared) != 1:
            raise CurvatureError("trees meet in more than one vertex")
        pinch = next(iter(shared))
        labels = [cut[_edge(pinch, w)] for w in m.rotation[pinch] if _edge(pinch, w) in cut]
        changes = sum(labels[i] != labels[i - 1] for i in range(len(labels)))
        if changes != 2:
            raise CurvatureError(f"trees cross at vertex {pinch}")
    case = "Case1a" if pinch is not None else "Case1b"

    single = {t.vertices[0] for t in (t1, t2) if t.edge_count == 0}
    copy_vertex: list[int] = []
    corner_copy: dict[tuple[int, int], int] = {}
    for v in range(m.vertex_count):
        if v in single:
            continue
        rot = m.rotation[v]
        d = len(rot)
        breaks = [i for i in range(d) if _edge(v, rot[i]) in cut]
        if not breaks:
            cid = len(copy_vertex)
            copy_vertex.append(v)
            for i in range(d):
                corner_copy[(v, i)] = cid
            continue
        pinch_id = None
        for j, b in enumerate(breaks):
            nb = breaks[(j + 1) % len(breaks)]
            run = [(b + s) % d for s in range(((nb - b) % d) or d)]
            transition = v == pinch and cut[_edge(v, rot[b])] != cut[_edge(v, rot[nb])]
            if transition and pinch_id is not None:
                cid = pinch_id
            else:
                cid = len(copy_vertex)
                copy_vertex.append(v)
                if transition:
                    pinch_id = cid
            for i in run:
                corner_copy[(v, i)] = cid

    complexes = (_Complex(frozenset(t1.edges), removed[0]), _Complex(frozenset(t2.edges), removed[1]))
    walks = []
    for cx in complexes:
        walk = _boundary_walk(m, cx)
        if walk is None:
            raise CurvatureError("tree boundary is not a single closed walk")
        walks.append(tuple(walk))

    proto = CutMesh(m, (t1, t2), case, pinch, cut, (removed[0], removed[1]), tuple(copy_vertex),
                    corner_copy, ((), ()), tuple(walks), 0, ())
    bounds = []
    for walk in walks:
        copies = proto.walk_to_copies(walk, len(bounds))
        if copies is None or len(set(copies)) != len(copies):
            raise CurvatureError("tree boundary does not lift to a simple cycle")
        bounds.append(copies)

    gone = removed[0] | removed[1]
    edge_classes = set()
    adjacency = [set() for _ in copy_vertex]

    def edge_class(a, b):
        e = _edge(a, b)
        return (e, (a, b)) if e in cut else (e,)

    for t, (a, b, c) in enumerate(m.triangles):
        if t in gone:
            continue
        cps = {}
        for x in (a, b, c):
            i = m._pos[x][{a: b, b: c, c: a}[x]]
            cps[x] = corner_copy[(x, i)]
        for x, y in ((a, b), (b, c), (c, a)):
            edge_classes.add(edge_class(x, y))
            adjacency[cps[x]].add(cps[y])
            adjacency[cps[y]].add(cps[x])
    for walk, copies in zip(walks, bounds):
        n = len(walk)
        for k in range(n):
            a, b = walk[k], walk[(k + 1) % n]
            edge_classes.add(edge_class(b, a))
            adjacency[copies[k]].add(copies[(k + 1) % n])
            adjacency[copies[(k + 1) % n]].add(copies[k])
    faces = len(m.triangles) - len(gone)
    chi = len(copy_vertex) - len(edge_classes) + faces
    if chi != 0:
        raise CurvatureError(f"cut surface has Euler characteristic {chi}, expected 0")
    return CutMesh(m, (t1, t2), case, pinch, cut, (removed[0], removed[1]), tuple(copy_vertex),
                   corner_copy, (bounds[0], bounds[1]), tuple(walks), chi,
                   tuple(frozenset(s) for s in adjacency))


def _walk_curvatures(cm: CutMesh, walk: Sequence[int], copies: Sequence[int]) -> list[int]:
    return [len(c) - 3 for c in cm.visit_corners(walk, copies)]


def cut_cycle_curvature(cm: CutMesh, walk: Sequence[int], side: int = 0) -> int:
    """Curvature of a cut-surface cycle given as an original-vertex walk.

    The walk keeps the given side's region on its left.  Each visit
    contributes the number of triangles of the visited copy on its right
    minus 3.
    """
    walk = tuple(walk)
    copies = cm.walk_to_copies(walk, side)
    if copies is None:
        raise CurvatureError("walk does not lift to a cycle of the cut surface")
    return sum(_walk_curvatures(cm, walk, copies))


def tree_multiplicity(m: TriMesh, t: Tree) -> int:
    return sum(multiplicity(m, v) for v in t.vertices)


# -- sweep -------------------------------------------------------------------------------

class SweepError(CurvatureError):
    pass


@dataclass(frozen=True)
class SweepTrace:
    cycles: tuple[tuple[int, ...], ...]  # copy ids, first tree on the left
    walks: tuple[tuple[int, ...], ...]  # the same cycles as original-vertex walks
    kinds: tuple[int, ...]  # step kind for each transition
    curvatures: tuple[int, ...]
    vertex_contract: tuple[bool, ...]
    edge_contract: tuple[bool, ...]
    phase_steps: tuple[int, int]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    @property
    def max_length(self) -> int:
        return max(self.lengths)

    @property
    def ok(self) -> bool:
        return (self.max_length <= SWEEP_LENGTH_BOUND and all(self.vertex_contract)
                and all(self.edge_contract))

    def to_dict(self) -> dict:
        return {
            "steps": len(self.kinds),
            "kinds": list(self.kinds),
            "lengths": list(self.lengths),
            "max_length": self.max_length,
            "curvatures": list(self.curvatures),
            "vertex_contract": all(self.vertex_contract),
            "edge_contract": all(self.edge_contract),
            "phase_steps": list(self.phase_steps),
            "cycles": [list(c) for c in self.cycles],
        }


def _canonical(c: Sequence[int]) -> tuple[int, ...]:
    c = tuple(c)
    if not c:
        return c
    k = min(range(len(c)), key=lambda i: c[i])
    return c[k:] + c[:k]


def _same_undirected(a: Sequence[int], b: Sequence[int]) -> bool:
    return _canonical(a) == _canonical(b) or _canonical(a) == _canonical(tuple(reversed(b)))


class _Side:
    def __init__(self, cm: CutMesh, i: int):
        self.cm = cm
        self.i = i
        self.tree = cm.trees[i]
        self.faces = set(cm.removed[i])

    def complex(self, faces=None) -> _Complex:
        return _Complex(frozenset(self.tree.edges), frozenset(self.faces if faces is None else faces))

    def state(self, faces, other: "_Side"):
        """(walk, copies) for a candidate face set, or None if it is not a legal cycle."""
        m = self.cm.mesh
        if faces & other.faces:
            return None
        walk = _boundary_walk(m, self.complex(faces))
        if walk is None:
            return None
        copies = self.cm.walk_to_copies(walk, self.i)
        if copies is None or len(set(copies)) != len(copies):
            return None
        for a, b in other.tree.edges:
            if m.left_triangle(a, b) in faces and m.left_triangle(b, a) in faces:
                return None
        for v in other.tree.vertices:
            if all(t in faces for t in _star(m, v)):
                return None
        return walk, copies


def _try_steps(side: _Side, other: _Side, state, allow_full: bool):
    cm = side.cm
    m = cm.mesh
    walk, copies = state
    n = len(walk)
    corners = cm.visit_corners(walk, copies)
    lcs = [len(c) - 3 for c in corners]
    order = sorted(range(n), key=lambda k: copies[k])
    for kind, target in ((1, -2), (2, -1)):
        for k in order:
            if lcs[k] != target:
                continue
            v = walk[k]
            add = {m.left_triangle(v, m.rotation[v][i]) for i in corners[k]}
            new = side.faces | add
            st = side.state(new, other)
            if st is not None:
                return kind, new, st
    if allow_full and all(x >= 0 for x in lcs):
        # step 3: absorb every free triangle touching the cycle on its far side
        add = set()
        for k in range(n):
            v = walk[k]
            add.update(m.left_triangle(v, m.rotation[v][i]) for i in corners[k])
        new = side.faces | (add - other.faces)
        st = side.state(new, other)
        if st is not None:
            return 3, new, st
    return None


def _contracts(cm: CutMesh, a: Sequence[int], b: Sequence[int]) -> tuple[bool, bool]:
    adj = cm.adjacency
    bset = set(b)
    vertex_ok = all(adj[x] & bset for x in a) and all(adj[x] & set(a) for x in b)

    def edge_ok(c, other):
        n = len(c)
        for k in range(n):
            x, y = c[k], c[(k + 1) % n]
            near = (adj[x] | {x}) & (adj[y] | {y})
            if not near & set(other):
                return False
        return True

    return vertex_ok, edge_ok(a, b) and edge_ok(b, a)


def sweep_cycles(cm: CutMesh, max_steps: int = 100_000) -> SweepTrace:
    """Grow the first tree's side, then the second, until the two cycles meet."""
    m = cm.mesh
    s1, s2 = _Side(cm, 0), _Side(cm, 1)
    walk1, copies1 = cm.boundary_walks[0], cm.boundaries[0]
    walk2, copies2 = cm.boundary_walks[1], cm.boundaries[1]
    first = [(walk1, copies1)]
    second = [(walk2, copies2)]
    kinds1: list[int] = []
    kinds2: list[int] = []

    def met():
        return _same_undirected(first[-1][1], second[-1][1])

    steps = 0
    while not met():
        # first side with ordinary steps, then the second, then full-layer steps
        for side, other, chain, kinds, full in ((s1, s2, first, kinds1, False),
                                                (s2, s1, second, kinds2, False),
                                                (s2, s1, second, kinds2, True),
                                                (s1, s2, first, kinds1, True)):
            found = _try_steps(side, other, chain[-1], allow_full=full)
            if found is not None:
                break
        else:
            lcs = _walk_curvatures(cm, *second[-1])
            raise SweepError(
                f"sweep stuck: cycles differ (lengths {len(first[-1][1])}, {len(second[-1][1])}); "
                f"second-side local curvatures {lcs}")
        kind, side.faces, st = found
        chain.append(st)
        kinds.append(kind)
        steps += 1
        if steps > max_steps:
            raise SweepError("step budget exhausted")

    walks = [w for w, _ in first] + [tuple(reversed(w)) for w, _ in reversed(second[:-1])]
    cycles = [c for _, c in first] + [tuple(reversed(c)) for _, c in reversed(second[:-1])]
    kinds = kinds1 + list(reversed(kinds2))
    curv = [sum(_walk_curvatures(cm, w, c)) for w, c in first]
    curv += [-sum(_walk_curvatures(cm, w, c)) for w, c in reversed(second[:-1])]
    vc, ec = [], []
    for a, b in zip(cycles, cycles[1:]):
        v_ok, e_ok = _contracts(cm, a, b)
        vc.append(v_ok)
        ec.append(e_ok)
    return SweepTrace(tuple(_canonical(c) for c in cycles), tuple(walks), tuple(kinds),
                      tuple(curv), tuple(vc), tuple(ec), (len(kinds1), len(kinds2)))


# -- Case 2 ---------------------------------------------------------------------------

def separating_cycles(m: TriMesh, component: Iterable[int]) -> list[tuple[int, ...]]:
    """Boundaries of the regions far from ``component``, component side on the left."""
    comp = sorted(set(int(v) for v in component))
    near = set()
    for v in comp:
        near |= neighborhood(m, v, 1)
    far = {t for t, tri in enumerate(m.triangles) if not near & set(tri)}
    cycles = []
    seen: set[int] = set()
    for t0 in sorted(far):
        if t0 in seen:
            continue
        region = {t0}
        todo = [t0]
        while todo:
            a, b, c = m.triangles[todo.pop()]
            for x, y in ((a, b), (b, c), (c, a)):
                s = m.left_triangle(y, x)
                if s in far and s not in region:
                    region.add(s)
                    todo.append(s)
        seen |= region
        nxt: dict[int, int] = {}
        for t in region:
            a, b, c = m.triangles[t]
            for x, y in ((a, b), (b, c), (c, a)):
                if m.left_triangle(y, x) not in region:
                    if x in nxt:
                        raise CurvatureError("far region boundary is not a simple cycle")
                    nxt[x] = y
        start = min(nxt)
        cyc = [start]
        while nxt[cyc[-1]] != start:
            cyc.append(nxt[cyc[-1]])
            if len(cyc) > len(nxt):
                break
        if len(cyc) != len(nxt):
            raise CurvatureError("far region has several boundary components")
        cycles.append(_canonical(reversed(cyc)))
    return cycles


def separating_cycle(m: TriMesh, component: Iterable[int]) -> tuple[int, ...]:
    """A cycle around ``component`` whose inside multiplicity is not a multiple of 6."""
    h = proximity_graph(m)
    if classify_case(h) != "Case2":
        raise CurvatureError("separating cycles are only built in Case 2")
    comp = tuple(sorted(set(int(v) for v in component)))
    if comp not in h.components:
        raise CurvatureError(f"{comp} is not a component of the proximity graph")
    for c in separating_cycles(m, comp):
        if irregular_inside(m, c) % 6:
            return c
    raise CurvatureError("no separating cycle with inside multiplicity off a multiple of 6")


def lattice_chart(m: TriMesh, v: int, first: int) -> dict[isbell.Point, int]:
    """Orientation-preserving map from the 19-point lattice chart into the mesh.

    The centre goes to ``v`` and the step (1, 0) to its neighbour ``first``.
    """
    rot = m.rotation[v]
    if len(rot) != 6:
        raise CurvatureError(f"chart centre {v} is not regular")
    i = m._pos[v][first]
    ring = [rot[(i + j) % 6] for j in range(6)]
    chart = {(0, 0): v}
    for j, d in enumerate(isbell.DIRECTIONS):
        chart[d] = ring[j]
    for j, d in enumerate(isbell.DIRECTIONS):
        u = ring[j]
        if m.degree(u) != 6:
            raise CurvatureError(f"chart vertex {u} is not regular")
        chart[(2 * d[0], 2 * d[1])] = m.rotation[u][(m._pos[u][v] + 3) % 6]
        d2 = isbell.DIRECTIONS[(j + 1) % 6]
        chart[isbell.add(d, d2)] = m.left_third(ring[(j + 1) % 6], u)
    if len(set(chart.values())) != len(chart):
        raise CurvatureError(f"chart around {v} is not injective")
    return chart


@dataclass(frozen=True)
class Case2Verdict:
    verdict: str  # "Consistent" | "Contradiction"
    curvature: int
    turning_sum: int  # sum of per-vertex turnings, reduced mod 6
    vertices: tuple[dict, ...]
    mode: str
    params: isbell.IsbellParams

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "curvature": self.curvature,
                "curvature_mod6": self.curvature % 6, "turning_sum_mod6": self.turning_sum,
                "mode": self.mode, "params": self.params.to_dict(),
                "vertices": list(self.vertices)}


def _signed_mod6(x: int) -> int:
    x %= 6
    return x - 6 if x > 3 else x


def case2_consistency(m: TriMesh, sigma: Coloring | Sequence[int] | None, c2: Sequence[int],
                      table: isbell.DirectionTable | None = None) -> Case2Verdict:
    """Compare the cycle's curvature mod 6 with the colour-derived turning sum.

    Without ``table`` the direction table is read off the Isbell chart of the
    first cycle vertex, after checking that every chart is Isbell.  With a
    ``table`` the colours are synthesised by a lattice walk that turns by the
    local curvature at each vertex.
    """
    c2 = check_cycle(m, c2)
    n = len(c2)
    total, lcs = cycle_curvature(m, c2)
    if table is None:
        if sigma is None:
            raise CurvatureError("a colouring or a direction table is required")
        colors = list(sigma.colors if isinstance(sigma, Coloring) else sigma)
        fits0 = None
        for k, v in enumerate(c2):
            chart = lattice_chart(m, v, c2[(k + 1) % n])
            fits = isbell.fit_params({p: colors[x] for p, x in chart.items()})
            if not fits:
                raise CurvatureError(f"colouring around {v} is not part of an Isbell colouring")
            fits0 = fits0 or fits
        table = isbell.direction_table(fits0[0])
        labels = [colors[v] for v in c2]
        mode = "coloring"
    else:
        labels = None
        for first, start in itertools.product(range(n), range(6)):
            pos = (0, 0)
            direction = start
            walk = [isbell.isbell_color(table.params, pos)]
            for k in range(first + 1, first + n):
                pos = isbell.add(pos, isbell.DIRECTIONS[direction])
                direction = (direction + lcs[k % n]) % 6
                walk.append(isbell.isbell_color(table.params, pos))
            # the closing pair only needs distinct colours to be a lattice edge
            if walk[-1] != walk[0]:
                labels = walk[n - first:] + walk[:n - first]
                break
        if labels is None:
            raise CurvatureError("no synthetic labelling closes up with distinct colours")
        mode = "synthetic"
    rows = []
    turn_sum = 0
    for k, v in enumerate(c2):
        a, b, c = labels[k - 1], labels[k], labels[(k + 1) % n]
        if a == b or b == c:
            raise ColoringError(f"equal colours on the edge at cycle vertex {v}")
        t = _signed_mod6(table.turning(a, b, c))
        turn_sum += t
        rows.append({"vertex": v, "color": b, "local_curvature": lcs[k], "turning": t,
                     "agrees": (t - lcs[k]) % 6 == 0})
    turn_sum %= 6
    if turn_sum != 0:
        raise CurvatureError("turning sum does not telescope; direction table is inconsistent")
    verdict = "Consistent" if total % 6 == turn_sum else "Contradiction"
    return Case2Verdict(verdict, total, turn_sum, tuple(rows), mode, table.params)

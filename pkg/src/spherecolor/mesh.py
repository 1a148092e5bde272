"""Closed oriented triangulated surfaces stored as rotation systems.

Each vertex keeps its neighbours in counterclockwise order (seen from the
outside of the surface).  Faces are derived: the face to the left of the
directed edge ``u -> v`` has third vertex ``rot[v][pos(u) - 1]``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


class MeshError(ValueError):
    """Raised for invalid surfaces, cycles or ids."""


def _canon_tri(a: int, b: int, c: int) -> Triangle:
    # rotate so the smallest id leads; orientation is kept
    if a < b and a < c:
        return (a, b, c)
    if b < c:
        return (b, c, a)
    return (c, a, b)


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Embedding:
    """Vertex positions on a sphere of the given radius (unit vectors stored)."""

    radius: float
    positions: np.ndarray

    def points(self) -> np.ndarray:
        return self.radius * self.positions


@dataclass(frozen=True, eq=False)
class TriMesh:
    vertex_count: int
    rotation: tuple[tuple[int, ...], ...]
    embedding: Embedding | None = field(default=None, compare=False)

    def __post_init__(self):
        _validate_rotation(self.vertex_count, self.rotation)

    # -- derived structure -------------------------------------------------
    @cached_property
    def _pos(self) -> list[dict[int, int]]:
        return [{w: i for i, w in enumerate(r)} for r in self.rotation]

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted({_edge(u, v) for u in range(self.vertex_count) for v in self.rotation[u]}))

    @cached_property
    def triangles(self) -> tuple[Triangle, ...]:
        tris = set()
        for u in range(self.vertex_count):
            for v in self.rotation[u]:
                tris.add(_canon_tri(u, v, self.left_third(u, v)))
        return tuple(sorted(tris))

    @cached_property
    def triangle_index(self) -> dict[Triangle, int]:
        return {t: i for i, t in enumerate(self.triangles)}

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges) + len(self.triangles)

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def are_adjacent(self, u: int, v: int) -> bool:
        return v in self._pos[u]

    def left_third(self, u: int, v: int) -> int:
        """Third vertex of the triangle to the left of ``u -> v``."""
        rot = self.rotation[v]
        return rot[self._pos[v][u] - 1]

    def left_triangle(self, u: int, v: int) -> int:
        return self.triangle_index[_canon_tri(u, v, self.left_third(u, v))]

    def ccw_next(self, v: int, w: int) -> int:
        """Neighbour of ``v`` following ``w`` counterclockwise."""
        rot = self.rotation[v]
        return rot[(self._pos[v][w] + 1) % len(rot)]

    def ccw_prev(self, v: int, w: int) -> int:
        rot = self.rotation[v]
        return rot[self._pos[v][w] - 1]

    def edges_of(self, t: Triangle) -> tuple[Edge, Edge, Edge]:
        a, b, c = t
        return (_edge(a, b), _edge(b, c), _edge(c, a))

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        ptr, idx = _kernels.csr(self.rotation)
        return _kernels.bfs_all_pairs(ptr, idx)

    def adjacency(self) -> list[list[int]]:
        return [list(r) for r in self.rotation]


def _validate_rotation(n: int, rotation: Sequence[Sequence[int]]) -> None:
    if n <= 0 or len(rotation) != n:
        raise MeshError("rotation must list one neighbour cycle per vertex")
    pos = []
    for v, r in enumerate(rotation):
        if len(r) < 3:
            raise MeshError(f"vertex {v} has degree {len(r)} < 3")
        if len(set(r)) != len(r) or v in r:
            raise MeshError(f"vertex {v} has a repeated neighbour or a loop")
        for w in r:
            if not 0 <= w < n:
                raise MeshError(f"vertex {v} lists unknown neighbour {w}")
        pos.append({w: i for i, w in enumerate(r)})
    for v, r in enumerate(rotation):
        for w in r:
            if v not in pos[w]:
                raise MeshError(f"edge {v}-{w} missing from the rotation of {w}")
    # every face traced by the left-turn rule must close after three steps
    for u in range(n):
        for v in rotation[u]:
            w = rotation[v][pos[v][u] - 1]
            x = rotation[w][pos[w][v] - 1]
            if x != u:
                raise MeshError(f"face left of {u}->{v} is not a triangle")
    seen = {0}
    todo = [0]
    while todo:
        u = todo.pop()
        for w in rotation[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    if len(seen) != n:
        raise MeshError("mesh is disconnected")


def build_mesh(faces: Iterable[Sequence[int]], embedding: Embedding | None = None) -> TriMesh:
    """Assemble a rotation system from consistently oriented triangles."""
    faces = [tuple(int(x) for x in f) for f in faces]
    if not faces:
        raise MeshError("empty face list")
    ids = sorted({x for f in faces for x in f})
    n = len(ids)
    if ids != list(range(n)):
        raise MeshError("vertex ids must be dense in 0..V-1")
    succ: list[dict[int, int]] = [dict() for _ in range(n)]
    incidence: dict[Edge, int] = {}
    for f in faces:
        if len(f) != 3 or len(set(f)) != 3:
            raise MeshError(f"face {f} is not a triangle")
        a, b, c = f
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            if y in succ[x]:
                raise MeshError(f"directed edge {x}->{y} used twice: inconsistent orientation")
            succ[x][y] = z
            e = _edge(x, y)
            incidence[e] = incidence.get(e, 0) + 1
    for e, count in incidence.items():
        if count != 2:
            raise MeshError(f"edge {e} borders {count} faces")
    rotation = []
    for v in range(n):
        s = succ[v]
        start = min(s)
        order = [start]
        w = s[start]
        while w != start:
            if w not in s or len(order) > len(s):
                raise MeshError(f"vertex {v} is not a manifold vertex")
            order.append(w)
            w = s[w]
        if len(order) != len(s):
            raise MeshError(f"vertex {v} is not a manifold vertex")
        rotation.append(tuple(order))
    return TriMesh(n, tuple(rotation), embedding)


def from_rotation(rotation: Sequence[Sequence[int]], embedding: Embedding | None = None) -> TriMesh:
    return TriMesh(len(rotation), tuple(tuple(int(w) for w in r) for r in rotation), embedding)


def irregular_vertices(m: TriMesh) -> list[tuple[int, int]]:
    """(vertex, 6 - degree) for every vertex of degree below 6."""
    return [(v, 6 - m.degree(v)) for v in range(m.vertex_count) if m.degree(v) < 6]


def multiplicity(m: TriMesh, v: int) -> int:
    return max(0, 6 - m.degree(v))


def neighborhood(m: TriMesh, v: int, i: int, strict: bool = False) -> set[int]:
    """Closed ball ``N_i(v)``; with ``strict`` only the sphere ``n_i(v)``."""
    if not 0 <= v < m.vertex_count:
        raise MeshError(f"unknown vertex {v}")
    row = m.distance_matrix[v]
    if strict:
        return {int(w) for w in np.flatnonzero(row == i)}
    return {int(w) for w in np.flatnonzero((row >= 0) & (row <= i))}


def graph_distance(m: TriMesh, u: int, v: int) -> int:
    return int(m.distance_matrix[u, v])


def distance_to_set(m: TriMesh, v: int, targets: Iterable[int]) -> int:
    targets = list(targets)
    if not targets:
        raise MeshError("empty target set")
    return int(m.distance_matrix[v, targets].min())


def shortest_path(m: TriMesh, u: int, v: int) -> list[int]:
    """A shortest path; ties go to the smallest next vertex id."""
    dist = m.distance_matrix
    path = [u]
    while path[-1] != v:
        cur = path[-1]
        path.append(min(w for w in m.rotation[cur] if dist[w, v] == dist[cur, v] - 1))
    return path


# -- cycles ------------------------------------------------------------------

def check_cycle(m: TriMesh, c: Sequence[int]) -> tuple[int, ...]:
    """Validate a directed simple cycle and return it as a tuple."""
    c = tuple(int(x) for x in c)
    if len(c) < 3:
        raise MeshError("a cycle needs at least three vertices")
    if len(set(c)) != len(c):
        raise MeshError("cycle is not simple")
    for i, v in enumerate(c):
        if not m.are_adjacent(v, c[(i + 1) % len(c)]):
            raise MeshError(f"cycle step {v}->{c[(i + 1) % len(c)]} is not an edge")
    return c


def reverse_cycle(c: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(tuple(c)))


def cycle_edges(c: Sequence[int]) -> set[Edge]:
    return {_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c))}


@dataclass(frozen=True)
class Region:
    """Everything strictly to the left of a directed cycle."""

    triangles: frozenset[int]
    vertices: frozenset[int]
    edges: frozenset[Edge]
    side: str = "left"


def interior_region(m: TriMesh, c: Sequence[int]) -> Region:
    c = check_cycle(m, c)
    blocked = cycle_edges(c)
    seed = m.left_triangle(c[0], c[1])
    forbidden = m.left_triangle(c[1], c[0])
    tris = m.triangles
    seen = {seed}
    todo = deque([seed])
    while todo:
        t = todo.popleft()
        a, b, cc = tris[t]
        for x, y in ((a, b), (b, cc), (cc, a)):
            if _edge(x, y) in blocked:
                continue
            s = m.left_triangle(y, x)
            if s not in seen:
                if s == forbidden:
                    raise MeshError("cycle does not separate the surface")
                seen.add(s)
                todo.append(s)
    on_cycle = set(c)
    verts = {x for t in seen for x in tris[t]} - on_cycle
    edges = {e for t in seen for e in m.edges_of(tris[t])} - blocked
    return Region(frozenset(seen), frozenset(verts), frozenset(edges))


def triangle_adjacency_graph(m: TriMesh) -> tuple[list[list[int]], bool]:
    """Triangles joined across shared edges, plus a connectivity flag."""
    adj: list[list[int]] = []
    for a, b, c in m.triangles:
        adj.append(sorted(m.left_triangle(y, x) for x, y in ((a, b), (b, c), (c, a))))
    seen = {0}
    todo = [0]
    while todo:
        t = todo.pop()
        for s in adj[t]:
            if s not in seen:
                seen.add(s)
                todo.append(s)
    return adj, len(seen) == len(adj)


# -- serialisation -----------------------------------------------------------

def mesh_to_dict(m: TriMesh) -> dict:
    doc: dict = {"vertices": m.vertex_count, "rotation": [list(r) for r in m.rotation]}
    if m.embedding is not None:
        doc["embedding"] = {
            "radius": float(m.embedding.radius),
            "positions": [[float(x) for x in p] for p in m.embedding.positions],
        }
    return doc


def mesh_from_dict(doc: dict) -> TriMesh:
    try:
        n = int(doc["vertices"])
        rotation = doc["rotation"]
    except (KeyError, TypeError) as exc:
        raise MeshError(f"mesh document is missing field {exc}") from exc
    if len(rotation) != n:
        raise MeshError("'vertices' does not match the rotation length")
    emb = None
    if doc.get("embedding") is not None:
        raw = np.asarray(doc["embedding"]["positions"], dtype=float)
        if raw.shape != (n, 3):
            raise MeshError("embedding positions must be an N x 3 array")
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
        if np.any(norms == 0):
            raise MeshError("embedding contains a zero vector")
        emb = Embedding(float(doc["embedding"]["radius"]), raw / norms)
    return from_rotation(rotation, emb)


def dump_mesh(m: TriMesh) -> str:
    return json.dumps(mesh_to_dict(m), separators=(",", ":"))


def load_mesh(text: str) -> TriMesh:
    return mesh_from_dict(json.loads(text))

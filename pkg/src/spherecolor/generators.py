"""Small library of closed triangulated surfaces used as fixtures and inputs."""

from __future__ import annotations

import numpy as np

from .mesh import Embedding, MeshError, TriMesh, build_mesh

_GOLDEN = (1 + 5 ** 0.5) / 2

_ICOSA_POINTS = np.array([
    [-1, _GOLDEN, 0], [1, _GOLDEN, 0], [-1, -_GOLDEN, 0], [1, -_GOLDEN, 0],
    [0, -1, _GOLDEN], [0, 1, _GOLDEN], [0, -1, -_GOLDEN], [0, 1, -_GOLDEN],
    [_GOLDEN, 0, -1], [_GOLDEN, 0, 1], [-_GOLDEN, 0, -1], [-_GOLDEN, 0, 1],
], dtype=float)

_ICOSA_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
    (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
    (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


def _outward(points: np.ndarray, faces):
    out = []
    for a, b, c in faces:
        n = np.cross(points[b] - points[a], points[c] - points[a])
        out.append((a, b, c) if np.dot(n, points[a] + points[b] + points[c]) > 0 else (a, c, b))
    return out


def _convex_mesh(points: np.ndarray, faces, radius: float = 1.0) -> TriMesh:
    unit = points / np.linalg.norm(points, axis=1, keepdims=True)
    return build_mesh(_outward(unit, faces), Embedding(radius, unit))


def tetrahedron() -> TriMesh:
    pts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    return _convex_mesh(pts, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def octahedron() -> TriMesh:
    """Vertices: 0=+x, 1=-x, 2=+y, 3=-y, 4=+z (north), 5=-z (south)."""
    pts = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float)
    faces = [(4, 0, 2), (4, 2, 1), (4, 1, 3), (4, 3, 0), (5, 2, 0), (5, 1, 2), (5, 3, 1), (5, 0, 3)]
    return _convex_mesh(pts, faces)


def icosahedron() -> TriMesh:
    return _convex_mesh(_ICOSA_POINTS, _ICOSA_FACES)


def icosahedral_subdivision(frequency: int, radius: float = 1.0) -> TriMesh:
    """Class-I geodesic sphere: every icosahedron face split into f^2 triangles."""
    if frequency < 1:
        raise MeshError("frequency must be at least 1")
    f = frequency
    base = _ICOSA_POINTS / np.linalg.norm(_ICOSA_POINTS, axis=1, keepdims=True)
    ids: dict[frozenset, int] = {}
    points: list[np.ndarray] = []

    def vertex(weights: dict[int, int]) -> int:
        # key by barycentric weights over icosahedron corners so shared edges coincide
        key = frozenset((c, w) for c, w in weights.items() if w)
        if key not in ids:
            ids[key] = len(points)
            p = sum(w * base[c] for c, w in key) / f
            points.append(p / np.linalg.norm(p))
        return ids[key]

    faces = []
    for a, b, c in _outward(base, _ICOSA_FACES):
        grid = {}
        for i in range(f + 1):
            for j in range(f + 1 - i):
                grid[i, j] = vertex({a: f - i - j, b: i, c: j})
        for i in range(f):
            for j in range(f - i):
                faces.append((grid[i, j], grid[i + 1, j], grid[i, j + 1]))
                if i + j < f - 1:
                    faces.append((grid[i + 1, j], grid[i + 1, j + 1], grid[i, j + 1]))
    return build_mesh(faces, Embedding(radius, np.array(points)))


def torus_grid(m: int, n: int) -> TriMesh:
    """Flat triangular-lattice torus with periods (m, 0) and (0, n) in axial coordinates.

    Vertex id of the lattice point (a, b) is ``a % m + m * (b % n)``.
    """
    if m < 3 or n < 3:
        raise MeshError("torus grid needs both periods >= 3")

    def vid(a, b):
        return a % m + m * (b % n)

    faces = []
    for b in range(n):
        for a in range(m):
            faces.append((vid(a, b), vid(a + 1, b), vid(a, b + 1)))
            faces.append((vid(a + 1, b), vid(a + 1, b + 1), vid(a, b + 1)))
    return build_mesh(faces)


def connected_sum(m1: TriMesh, m2: TriMesh) -> TriMesh:
    """Glue two surfaces along one removed triangle each (genus adds up)."""
    t1 = m1.triangles[0]
    t2 = m2.triangles[0]
    shift = m1.vertex_count
    a, b, c = t1
    x, y, z = t2
    # reversed identification keeps orientations compatible
    glue = {x: a, z: b, y: c}
    rest2 = sorted(set(range(m2.vertex_count)) - set(t2))
    relabel = dict(glue)
    for i, v in enumerate(rest2):
        relabel[v] = shift + i
    faces = [t for t in m1.triangles if t != t1]
    faces += [tuple(relabel[v] for v in t) for t in m2.triangles if t != t2]
    return build_mesh(faces)


def genus_two_mesh(vertex_count: int = 100) -> TriMesh:
    """Connected sum of two flat tori with the requested vertex count."""
    total = vertex_count + 3
    for m1 in range(3, total):
        for n1 in range(3, total // m1 + 1):
            rest = total - m1 * n1
            for m2 in range(3, rest + 1):
                if rest % m2 == 0 and rest // m2 >= 3:
                    return connected_sum(torus_grid(m1, n1), torus_grid(m2, rest // m2))
    raise MeshError(f"no torus pair gives {vertex_count} vertices")

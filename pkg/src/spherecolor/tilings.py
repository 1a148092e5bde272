"""Polygonal tilings of flat, cylindrical and toroidal domains.

A tiling is *nice* when every tile has diameter below 1 and tiles of the
same colour are more than 1 apart.  Tiles are closed polygons (or segments)
given in domain coordinates:

* plane: Euclidean ``(x, y)``;
* cylinder: ``(u, v)`` with ``u`` the arc length around the circumference
  and ``v`` the height, measured by 3-space chords.  A tile of kind ``cap``
  also owns the end disk next to the rim its polygon touches;
* flat torus: ``(x, y)`` modulo two period vectors.

Plane and torus distances are exact (shapely).  Cylinder distances come
from dense boundary samples; the largest sample gap is reported as an error
bar and the verdict only passes when the margins exceed it.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import LineString, Polygon, box

from . import _config, _kernels, isbell
from .coloring import proper_colorings
from .mesh import MeshError, TriMesh, build_mesh

TILE_KINDS = ("polygon", "cap", "segment")
DOMAIN_KINDS = ("plane", "cylinder", "flat_torus")

# residue -> colour of the cylinder construction (chirality B)
CYLINDER_PERM = (1, 7, 5, 6, 3, 2, 4)
DEFAULT_CIRCUMFERENCE = 2.05


class TilingError(ValueError):
    """Invalid tiling documents, overlapping tiles or bad construction parameters."""


# -- domains ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricDomain:
    kind: str
    radius: float = 0.0
    height: float = 0.0
    periods: tuple[tuple[float, float], tuple[float, float]] | None = None

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise TilingError(f"unknown domain kind {self.kind!r}")
        if self.kind == "cylinder" and not (self.radius > 0 and self.height > 0):
            raise TilingError("a cylinder needs a positive radius and height")
        if self.kind == "flat_torus":
            if self.periods is None:
                raise TilingError("a flat torus needs two period vectors")
            (a, b), (c, d) = self.periods
            if abs(a * d - b * c) < 1e-12:
                raise TilingError("torus periods are linearly dependent")

    @property
    def circumference(self) -> float:
        return 2 * math.pi * self.radius

    def embed(self, pts) -> np.ndarray:
        """Points in the ambient space where distances are Euclidean."""
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if self.kind != "cylinder":
            return pts
        theta = pts[:, 0] / self.radius
        return np.column_stack([self.radius * np.cos(theta), self.radius * np.sin(theta), pts[:, 1]])

    def shifts(self) -> list[tuple[float, float]]:
        """Deck translations checked when comparing two tiles."""
        if self.kind == "cylinder":
            c = self.circumference
            return [(-c, 0.0), (0.0, 0.0), (c, 0.0)]
        if self.kind == "flat_torus":
            (a, b), (c, d) = self.periods
            return [(i * a + j * c, i * b + j * d) for i in (-1, 0, 1) for j in (-1, 0, 1)]
        return [(0.0, 0.0)]

    def distance(self, p, q) -> float:
        p = np.asarray(p, dtype=float)
        q = np.asarray(q, dtype=float)
        if self.kind == "cylinder":
            du = p[0] - q[0]
            return float(math.hypot(p[1] - q[1], 2 * self.radius * math.sin(du / (2 * self.radius))))
        return min(float(np.hypot(*(p - q + np.asarray(s)))) for s in self.shifts())

    def area(self) -> float | None:
        if self.kind == "cylinder":
            return self.circumference * self.height
        if self.kind == "flat_torus":
            (a, b), (c, d) = self.periods
            return abs(a * d - b * c)
        return None

    def to_dict(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.kind == "cylinder":
            doc.update(radius=self.radius, height=self.height)
        if self.kind == "flat_torus":
            doc["periods"] = [list(p) for p in self.periods]
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricDomain":
        kind = doc.get("kind")
        if kind == "cylinder":
            return cls(kind, radius=float(doc["radius"]), height=float(doc["height"]))
        if kind == "flat_torus":
            p = doc["periods"]
            return cls(kind, periods=((float(p[0][0]), float(p[0][1])), (float(p[1][0]), float(p[1][1]))))
        return cls(kind)


@dataclass(frozen=True)
class Tile:
    color: int
    polygon: np.ndarray
    kind: str = "polygon"

    def geometry(self, shift=(0.0, 0.0)):
        pts = self.polygon + np.asarray(shift)
        if self.kind == "segment":
            return LineString(pts)
        return Polygon(pts)

    def to_dict(self) -> dict:
        return {"color": int(self.color), "polygon": [[float(x), float(y)] for x, y in self.polygon],
                "kind": self.kind}


@dataclass(frozen=True)
class TilingDoc:
    domain: MetricDomain
    k: int
    tiles: tuple[Tile, ...]
    name: str = ""

    def __post_init__(self):
        for i, t in enumerate(self.tiles):
            if t.kind not in TILE_KINDS:
                raise TilingError(f"tile {i}: unknown kind {t.kind!r}")
            if not 1 <= t.color <= self.k:
                raise TilingError(f"tile {i}: colour {t.color} outside 1..{self.k}")
            need = 2 if t.kind == "segment" else 3
            if t.polygon.ndim != 2 or t.polygon.shape[1] != 2 or len(t.polygon) < need:
                raise TilingError(f"tile {i}: polygon needs at least {need} points")
            if t.kind == "cap" and self.domain.kind != "cylinder":
                raise TilingError(f"tile {i}: caps only exist on cylinders")

    def to_dict(self) -> dict:
        return {"domain": self.domain.to_dict(), "k": self.k, "tiles": [t.to_dict() for t in self.tiles]}

    @classmethod
    def from_dict(cls, doc: dict) -> "TilingDoc":
        try:
            domain = MetricDomain.from_dict(doc["domain"])
            tiles = tuple(Tile(int(t["color"]), np.asarray(t["polygon"], dtype=float), t.get("kind", "polygon"))
                          for t in doc["tiles"])
            return cls(domain, int(doc["k"]), tiles)
        except (KeyError, TypeError, IndexError) as exc:
            raise TilingError(f"tiling document is missing or has a malformed field: {exc}") from exc

    def scaled(self, factor: float) -> "TilingDoc":
        """The same tiling with every length multiplied by ``factor``."""
        d = self.domain
        periods = None if d.periods is None else tuple(tuple(factor * x for x in p) for p in d.periods)
        dom = MetricDomain(d.kind, d.radius * factor, d.height * factor, periods)
        tiles = tuple(Tile(t.color, t.polygon * factor, t.kind) for t in self.tiles)
        return TilingDoc(dom, self.k, tiles, self.name)

    def moved(self, du: float = 0.0, dv: float = 0.0) -> "TilingDoc":
        """Translate every tile; an isometry of the plane, torus or (rotation) cylinder."""
        if self.domain.kind == "cylinder" and dv:
            raise TilingError("moving along the axis would detach the caps")
        tiles = tuple(Tile(t.color, t.polygon + np.array([du, dv]), t.kind) for t in self.tiles)
        return TilingDoc(self.domain, self.k, tiles, self.name)


def dump_tiling(doc: TilingDoc) -> str:
    return json.dumps(doc.to_dict(), indent=1)


def load_tiling(text: str) -> TilingDoc:
    return TilingDoc.from_dict(json.loads(text))


# -- niceness --------------------------------------------------------------------------

@dataclass(frozen=True)
class NicenessReport:
    diameters: tuple[float, ...]
    max_diameter: float
    diameter_witness: int
    min_same_color_distance: float
    distance_witness: tuple[int, int] | None
    error_bar: float
    coverage: float | None
    passed: bool

    @property
    def diameter_margin(self) -> float:
        return 1.0 - self.max_diameter

    @property
    def distance_margin(self) -> float:
        return self.min_same_color_distance - 1.0

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "max_diameter": self.max_diameter,
            "diameter_margin": self.diameter_margin,
            "diameter_witness": self.diameter_witness,
            "min_same_color_distance": self.min_same_color_distance,
            "distance_margin": self.distance_margin,
            "distance_witness": list(self.distance_witness) if self.distance_witness else None,
            "error_bar": self.error_bar,
            "coverage": self.coverage,
            "diameters": list(self.diameters),
        }


def _boundary_samples(t: Tile, n: int) -> tuple[np.ndarray, float]:
    """Points along the tile boundary (vertices included) and the largest gap."""
    pts = t.polygon
    ring = pts if t.kind == "segment" else np.vstack([pts, pts[:1]])
    seg = np.diff(ring, axis=0)
    lengths = np.hypot(seg[:, 0], seg[:, 1])
    total = float(lengths.sum())
    out = []
    gap = 0.0
    for a, d, length in zip(ring[:-1], seg, lengths):
        m = max(1, int(math.ceil(n * length / total))) if total > 0 else 1
        s = np.arange(m) / m
        out.append(a + s[:, None] * d)
        gap = max(gap, length / m)
    out.append(ring[-1:])
    return np.vstack(out), gap


def _check_overlaps(doc: TilingDoc, tol: float) -> None:
    geoms = [t.geometry() for t in doc.tiles]
    tree = shapely.STRtree(geoms)
    for s in doc.domain.shifts():
        for i, t in enumerate(doc.tiles):
            g = t.geometry(s)
            for j in tree.query(g):
                j = int(j)
                if j < i or (j == i and s == (0.0, 0.0)):
                    continue
                inter = g.intersection(geoms[j])
                size = inter.length if t.kind == "segment" else inter.area
                if t.kind != "segment" and doc.tiles[j].kind == "segment":
                    continue
                if size > tol:
                    raise TilingError(f"tiles {i} and {j} overlap (measure {size:.3g})")


def _cap_end(doc: TilingDoc, t: Tile, tol: float) -> float:
    v = t.polygon[:, 1]
    if v.min() <= tol:
        return 0.0
    if v.max() >= doc.domain.height - tol:
        return doc.domain.height
    raise TilingError("a cap tile must touch one end of the cylinder")


def verify_nice_tiling(doc: TilingDoc, samples: int | None = None) -> NicenessReport:
    tol = _config.TOL.geometry
    samples = samples or _config.TOL.samples_per_tile
    _check_overlaps(doc, tol)
    dom = doc.domain
    tiles = doc.tiles
    n = len(tiles)
    coverage = None
    if dom.area() is not None and all(t.kind != "segment" for t in tiles):
        coverage = sum(t.geometry().area for t in tiles) / dom.area()

    diam = np.zeros(n)
    err = 0.0
    if dom.kind == "cylinder":
        rho = dom.radius
        sampled = []
        for t in tiles:
            pts, gap = _boundary_samples(t, samples)
            err = max(err, gap)
            sampled.append(dom.embed(pts))
        ends = [(_cap_end(doc, t, tol) if t.kind == "cap" else None) for t in tiles]
        for i, t in enumerate(tiles):
            diam[i] = _kernels.max_self(sampled[i])[0]
            if ends[i] is not None:
                reach = float(np.abs(t.polygon[:, 1] - ends[i]).max())
                diam[i] = max(diam[i], 2 * rho, math.hypot(reach, 2 * rho))

        def pair_distance(i, j):
            d = _kernels.min_cross(sampled[i], sampled[j])[0]
            for a, b in ((i, j), (j, i)):
                if ends[a] is not None:
                    d = min(d, float(np.abs(tiles[b].polygon[:, 1] - ends[a]).min()))
            if ends[i] is not None and ends[j] is not None and ends[i] != ends[j]:
                d = min(d, dom.height)
            return d
    else:
        geoms = [t.geometry() for t in tiles]
        for i, t in enumerate(tiles):
            p = t.polygon
            diam[i] = float(np.sqrt(((p[:, None, :] - p[None, :, :]) ** 2).sum(-1)).max())
        if dom.kind == "flat_torus":
            shortest = min(math.hypot(*s) for s in dom.shifts() if s != (0.0, 0.0))
            if diam.max() >= shortest / 2:
                raise TilingError("tiles are too large for the torus quotient metric")

        def pair_distance(i, j):
            return min(geoms[i].distance(tiles[j].geometry(s)) for s in dom.shifts())

    best = math.inf
    witness = None
    for i, j in itertools.combinations(range(n), 2):
        if tiles[i].color != tiles[j].color:
            continue
        d = pair_distance(i, j)
        if d < best:
            best, witness = d, (i, j)
    if dom.kind == "flat_torus":
        # a tile against its own translates
        for i, t in enumerate(tiles):
            g = t.geometry()
            for s in dom.shifts():
                if s != (0.0, 0.0):
                    d = g.distance(t.geometry(s))
                    if d < best:
                        best, witness = d, (i, i)

    wi = int(np.argmax(diam)) if n else -1
    max_d = float(diam.max()) if n else 0.0
    passed = bool(max_d + err < 1.0 and best - err > 1.0)
    return NicenessReport(tuple(float(x) for x in diam), max_d, wi, float(best), witness, float(err),
                          coverage, passed)


# -- adjacency -------------------------------------------------------------------------

@dataclass(frozen=True)
class AdjacencyResult:
    tile_count: int
    edges: tuple[tuple[int, int], ...]
    point_contacts: tuple[tuple[int, int], ...]
    mesh: TriMesh | None

    @property
    def fully_triangulated(self) -> bool:
        return self.mesh is not None

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.tile_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(x) for x in adj]

    def to_dict(self) -> dict:
        return {
            "tiles": self.tile_count,
            "edges": [list(e) for e in self.edges],
            "point_contacts": [list(e) for e in self.point_contacts],
            "fully_triangulated": self.fully_triangulated,
            "euler_characteristic": self.mesh.euler_characteristic if self.mesh else None,
        }


def _locate(doc: TilingDoc, pts: np.ndarray, tol: float) -> np.ndarray:
    """Tile index containing each point, -1 outside every tile."""
    dom = doc.domain
    owner = np.full(len(pts), -1, dtype=np.int64)
    x, y = pts[:, 0], pts[:, 1]
    for i, t in enumerate(doc.tiles):
        for s in dom.shifts():
            inside = shapely.contains_xy(t.geometry(s), x, y)
            clash = inside & (owner >= 0) & (owner != i)
            if clash.any():
                raise TilingError(f"tiles {i} and {int(owner[clash][0])} share interior points")
            owner[inside] = i
    if dom.kind == "cylinder":
        for i, t in enumerate(doc.tiles):
            if t.kind == "cap":
                end = _cap_end(doc, t, tol)
                owner[(y < 0) if end == 0.0 else (y > dom.height)] = i
    return owner


def adjacency_graph(doc: TilingDoc, point_contact: bool = False, probes: int = 360) -> AdjacencyResult:
    """Tile adjacency from the cyclic order of tiles around every polygon corner.

    Tiles that follow each other around a corner share a boundary piece of
    positive length.  Tiles that meet at the corner without following each
    other only touch there; they count as adjacent when ``point_contact``
    is set.  A mesh is built when every corner is surrounded by exactly
    three distinct tiles.
    """
    tol = _config.TOL.geometry
    tiles = doc.tiles
    n = len(tiles)
    if any(t.kind == "segment" for t in tiles):
        geoms = [t.geometry() for t in tiles]
        edges = sorted((i, j) for i, j in itertools.combinations(range(n), 2)
                       if min(geoms[i].distance(tiles[j].geometry(s)) for s in doc.domain.shifts()) <= tol)
        return AdjacencyResult(n, tuple(edges), (), None)

    dom = doc.domain
    corners = np.vstack([t.polygon for t in tiles])
    if dom.kind == "cylinder":
        corners[:, 0] %= dom.circumference
    key = np.round(corners / (100 * tol)).astype(np.int64)
    _, first = np.unique(key, axis=0, return_index=True)
    corners = corners[np.sort(first)]
    scale = min(float(np.sqrt(t.geometry().area)) for t in tiles)
    r = 1e-4 * scale
    ang = 2 * math.pi * (np.arange(probes) + 0.5) / probes
    ring = np.column_stack([np.cos(ang), np.sin(ang)]) * r
    pts = (corners[:, None, :] + ring[None, :, :]).reshape(-1, 2)
    owner = _locate(doc, pts, tol).reshape(len(corners), probes)

    edges: set[tuple[int, int]] = set()
    touches: set[tuple[int, int]] = set()
    faces = []
    closed = True
    for row in owner:
        runs = [int(x) for k, x in enumerate(row) if x != row[k - 1]] or [int(row[0])]
        if len(runs) == 1:
            continue
        for k, a in enumerate(runs):
            b = runs[(k + 1) % len(runs)]
            if a >= 0 and b >= 0 and a != b:
                edges.add((min(a, b), max(a, b)))
        real = [x for x in runs if x >= 0]
        for a, b in itertools.combinations(sorted(set(real)), 2):
            touches.add((a, b))
        if -1 in runs:
            closed = False
        elif len(runs) == 2:
            continue
        elif len(runs) != 3 or len(set(runs)) != 3:
            closed = False
        else:
            faces.append(tuple(runs))
    contacts = sorted(touches - edges)
    if point_contact:
        edges |= set(contacts)
    mesh = None
    if closed and faces:
        uniq = sorted({min((f, f[1:] + f[:1], f[2:] + f[:2])) for f in faces})
        try:
            mesh = build_mesh(uniq)
        except MeshError:
            mesh = None
        if mesh is not None and mesh.vertex_count != n:
            mesh = None
    return AdjacencyResult(n, tuple(sorted(edges)), tuple(contacts), mesh)


# -- constructions ---------------------------------------------------------------------

def _hexagon(center, circumradius: float, phase: float) -> np.ndarray:
    a = phase + math.pi / 6 + np.arange(6) * math.pi / 3
    return np.column_stack([center[0] + circumradius * np.cos(a), center[1] + circumradius * np.sin(a)])


def cylinder_sqrt21_circumference(epsilon: float = 0.0) -> float:
    """Circumference of a cylinder with base radius (1+eps)*sqrt(21)/pi."""
    return 2 * (1 + epsilon) * math.sqrt(21)


def cylinder7(circumference: float = DEFAULT_CIRCUMFERENCE, bands: int = 2) -> TilingDoc:
    """Isbell hexagons wrapped around a capped cylinder.

    The triangular lattice with spacing ``circumference / sqrt(7)`` is
    rolled up along its period ``2*e1 + e2``, so each height level carries a
    single lattice point and the colouring is periodic around the axis.  The
    height is ``bands * sqrt(3) * circumference``.  Cells are clipped to the
    side; the sliver of the cell just below each rim joins that end's disk.
    """
    if not circumference > 0 or bands < 1:
        raise TilingError("cylinder7 needs a positive circumference and at least one band")
    c = circumference
    s = c / math.sqrt(7)
    r7 = math.sqrt(7)
    e1 = s * np.array([5 / (2 * r7), -math.sqrt(3) / (2 * r7)])
    e2 = s * np.array([2 / r7, math.sqrt(3) / r7])
    phase = math.atan2(e1[1], e1[0])
    height = bands * math.sqrt(3) * c
    levels = 14 * bands
    params = isbell.IsbellParams("B", CYLINDER_PERM)
    strip = box(-2 * c, 0.0, 3 * c, height)

    def cell(t):
        j = (t + 1) // 2
        i = 2 * j - t
        center = i * e1 + j * e2
        center[0] %= c
        poly = Polygon(_hexagon(center, s / math.sqrt(3), phase)).intersection(strip)
        coords = np.asarray(shapely.get_coordinates(shapely.normalize(poly).exterior))[:-1]
        # counterclockwise, starting from the lowest-leftmost corner
        if Polygon(coords).exterior.is_ccw is False:
            coords = coords[::-1]
        start = int(np.lexsort((coords[:, 0], coords[:, 1]))[0])
        return isbell.isbell_color(params, (i, j)), np.roll(coords, -start, axis=0)

    tiles = []
    color, poly = cell(-1)
    tiles.append(Tile(color, poly, "cap"))
    for t in range(levels + 1):
        color, poly = cell(t)
        tiles.append(Tile(color, poly))
    color, poly = cell(levels + 1)
    tiles.append(Tile(color, poly, "cap"))
    dom = MetricDomain("cylinder", radius=c / (2 * math.pi), height=height)
    return TilingDoc(dom, 7, tuple(tiles), "cylinder7")


def _isbell_hexes(points, spacing: float, params: isbell.IsbellParams) -> list[Tile]:
    out = []
    for q in points:
        x, y = isbell.to_xy(q)
        out.append(Tile(isbell.isbell_color(params, q),
                        _hexagon((spacing * x, spacing * y), spacing / math.sqrt(3), 0.0)))
    return out


def _reference_params() -> isbell.IsbellParams:
    return isbell.fit_params(isbell.REFERENCE_CENTER_COLORING)[0]


def plane_isbell(radius: int = 3, spacing: float = 0.76) -> TilingDoc:
    """Isbell-coloured hexagon patch around the origin (hex radius ``radius``)."""
    if radius < 0 or not spacing > 0:
        raise TilingError("plane_isbell needs radius >= 0 and a positive spacing")
    tiles = _isbell_hexes(isbell.ball((0, 0), radius), spacing, _reference_params())
    return TilingDoc(MetricDomain("plane"), 7, tuple(tiles), "plane_isbell")


def _shortest_periods(params: isbell.IsbellParams) -> tuple[isbell.Point, isbell.Point]:
    """Two independent colour periods of hex length 3 (norm sqrt(7) spacings)."""
    cands = [(a, b) for a in range(-3, 4) for b in range(-3, 4)
             if a * a + a * b + b * b == 7 and isbell.in_period_lattice(params, (a, b))]
    p1 = max(cands)
    p2 = next(q for q in sorted(cands, reverse=True) if p1[0] * q[1] - p1[1] * q[0] > 0)
    return p1, p2


def torus_isbell(n1: int = 2, n2: int = 2, spacing: float = 0.76) -> TilingDoc:
    """Isbell hexagons on the flat torus spanned by multiples of two colour periods.

    Both period vectors lie in the colour-period lattice, so the colouring
    descends to the quotient; the torus carries ``7 * n1 * n2`` tiles.
    """
    if n1 < 1 or n2 < 1 or not spacing > 0:
        raise TilingError("torus_isbell needs positive multipliers and spacing")
    params = _reference_params()
    q1, q2 = _shortest_periods(params)
    p1, p2 = (n1 * q1[0], n1 * q1[1]), (n2 * q2[0], n2 * q2[1])
    det = p1[0] * p2[1] - p1[1] * p2[0]
    pts = []
    span = 4 * (n1 + n2)
    for a in range(-span, span + 1):
        for b in range(-span, span + 1):
            # fractional coordinates of (a, b) in the period basis
            alpha = (a * p2[1] - b * p2[0]) / det
            beta = (b * p1[0] - a * p1[1]) / det
            if 0 <= alpha < 1 and 0 <= beta < 1:
                pts.append((a, b))
    if len(pts) != abs(det):
        raise TilingError("fundamental domain enumeration failed")
    periods = tuple(tuple(spacing * x for x in isbell.to_xy(p)) for p in (p1, p2))
    tiles = _isbell_hexes(sorted(pts), spacing, params)
    return TilingDoc(MetricDomain("flat_torus", periods=periods), 7, tuple(tiles), "torus_isbell")


def genus4(k: int = 1, rail_gap: float = 0.9, segment: float = 0.9, offset: float = 0.45,
           crossbar_spacing: float = 2.25) -> TilingDoc:
    """Two rails of red/blue/green segments joined by ``k + 1`` black crossbars.

    Thickening the drawing into thin tubes gives a genus-``k`` surface; the
    tiling lives on its 1-skeleton.
    """
    if k < 0 or min(rail_gap, segment, crossbar_spacing) <= 0:
        raise TilingError("genus4 needs k >= 0 and positive lengths")
    length = crossbar_spacing * k + 3 * segment
    tiles = []
    for y, shift, first in ((0.0, 0.0, 0), (rail_gap, -offset, 1)):
        j = -1
        while shift + j * segment < length:
            a = max(0.0, shift + j * segment)
            b = min(length, shift + (j + 1) * segment)
            if b - a > 1e-12:
                tiles.append(Tile((j + first) % 3 + 1, np.array([[a, y], [b, y]]), "segment"))
            j += 1
    for i in range(k + 1):
        x = crossbar_spacing * i
        tiles.append(Tile(4, np.array([[x, 0.0], [x, rail_gap]]), "segment"))
    return TilingDoc(MetricDomain("plane"), 4, tuple(tiles), f"genus4({k})")


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray
    name: str = ""
    tolerance: float = field(default=1e-9)

    def unit_pairs(self, tol: float | None = None) -> list[tuple[int, int]]:
        tol = self.tolerance if tol is None else tol
        d = np.sqrt(((self.points[:, None, :] - self.points[None, :, :]) ** 2).sum(-1))
        n = len(self.points)
        return [(i, j) for i in range(n) for j in range(i + 1, n) if abs(d[i, j] - 1.0) <= tol]

    def adjacency(self, tol: float | None = None) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(len(self.points))]
        for i, j in self.unit_pairs(tol):
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def colorable(self, k: int) -> tuple[int, ...] | None:
        """A colouring with no unit pair monochromatic, or None (brute force)."""
        return next(proper_colorings(self.adjacency(), k), None)

    def to_dict(self) -> dict:
        return {"name": self.name, "points": self.points.tolist(),
                "unit_pairs": [list(p) for p in self.unit_pairs()]}


def moser_spindle() -> PointSet:
    """Two unit rhombi hinged at the origin, tips one unit apart."""
    half = math.asin(1 / (2 * math.sqrt(3)))
    pts = [(0.0, 0.0)]
    for sign in (1, -1):
        g = sign * half
        for a in (g - math.pi / 6, g + math.pi / 6):
            pts.append((math.cos(a), math.sin(a)))
        pts.append((math.sqrt(3) * math.cos(g), math.sqrt(3) * math.sin(g)))
    return PointSet(np.array(pts), "moser_spindle")


BUILTINS = ("cylinder7", "plane_isbell", "torus_isbell", "genus4", "moser_spindle")


def builtin_construction(name: str, **params) -> TilingDoc | PointSet:
    makers = {"cylinder7": cylinder7, "plane_isbell": plane_isbell, "torus_isbell": torus_isbell,
              "genus4": genus4, "moser_spindle": moser_spindle}
    if name not in makers:
        raise TilingError(f"unknown construction {name!r}; choose from {', '.join(BUILTINS)}")
    try:
        return makers[name](**params)
    except TypeError as exc:
        raise TilingError(f"bad parameters for {name}: {exc}") from exc


# -- Euler obstruction -----------------------------------------------------------------

@dataclass(frozen=True)
class EulerReport:
    vertices: int
    edges: int
    faces: int
    euler_characteristic: int
    average_degree: float
    max_degree: int
    obstruction: bool

    @property
    def message(self) -> str:
        if self.obstruction:
            return "max degree >= 7 forced, no nice coloring exists"
        return "average degree at most 6, no obstruction"

    def to_dict(self) -> dict:
        return {"vertices": self.vertices, "edges": self.edges, "faces": self.faces,
                "euler_characteristic": self.euler_characteristic,
                "average_degree": self.average_degree, "max_degree": self.max_degree,
                "obstruction": self.obstruction, "message": self.message}


def euler_obstruction(m: TriMesh) -> EulerReport:
    """Degree pressure from |E| = 3|V| - 3*chi on a triangulated closed surface."""
    v, e, f = m.vertex_count, len(m.edges), len(m.triangles)
    chi = v - e + f
    if 2 * e != 3 * f:
        raise TilingError("mesh is not fully triangulated")
    avg = 2 * e / v
    return EulerReport(v, e, f, chi, avg, max(m.degree(x) for x in range(v)), chi < 0)


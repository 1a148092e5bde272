"""Spherical metric, signed distance to closed broken lines, and the
geometric premises on embedded sphere meshes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _config
from .generators import icosahedral_subdivision
from .mesh import Embedding, TriMesh

# the alternative radius quoted in the same remark as 46.5/pi; surfaced, not used
ALTERNATIVE_RADIUS_REMARK = 17.9


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class SpherePoint:
    direction: np.ndarray
    radius: float = 1.0

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        norm = np.linalg.norm(d)
        if norm == 0:
            raise GeometryError("zero direction")
        object.__setattr__(self, "direction", d / norm)

    @property
    def xyz(self) -> np.ndarray:
        return self.radius * self.direction


def _unit(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _check_radius(p: SpherePoint, q: SpherePoint) -> None:
    if abs(p.radius - q.radius) > 1e-12 * max(1.0, p.radius):
        raise GeometryError("points lie on spheres of different radius")


def central_angle(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Angle between unit vectors, stable near 0 and pi."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = np.linalg.norm(np.cross(u, v), axis=-1)
    dot = np.sum(u * v, axis=-1)
    return np.arctan2(cross, dot)


def sphere_distance(p: SpherePoint, q: SpherePoint) -> float:
    _check_radius(p, q)
    return float(p.radius * central_angle(p.direction, q.direction))


def chord_distance(p: SpherePoint, q: SpherePoint) -> float:
    _check_radius(p, q)
    return float(2 * p.radius * math.sin(central_angle(p.direction, q.direction) / 2))


def antipode(p: SpherePoint) -> SpherePoint:
    return SpherePoint(-p.direction, p.radius)


# -- closed broken lines ---------------------------------------------------------

@dataclass(frozen=True)
class SphericalCycle:
    """Closed broken line of minor arcs; the left side is the interior."""

    vertices: np.ndarray  # (n, 3) unit vectors
    radius: float = 1.0

    def __post_init__(self):
        v = _unit(self.vertices)
        if v.ndim != 2 or v.shape[0] < 3:
            raise GeometryError("a spherical cycle needs at least three vertices")
        nxt = np.roll(v, -1, axis=0)
        ang = central_angle(v, nxt)
        if np.any(ang < 1e-15) or np.any(ang > math.pi - 1e-12):
            raise GeometryError("degenerate or antipodal arc in cycle")
        object.__setattr__(self, "vertices", v)

    def reversed(self) -> "SphericalCycle":
        return SphericalCycle(self.vertices[::-1].copy(), self.radius)

    def left_area(self) -> float:
        """Area (unit sphere) to the left, from the turning angles."""
        v = self.vertices
        prev = np.roll(v, 1, axis=0)
        nxt = np.roll(v, -1, axis=0)
        t_in = _unit(np.cross(np.cross(prev, v), v))
        t_out = _unit(nxt - np.sum(nxt * v, axis=1, keepdims=True) * v)
        turn = np.arctan2(np.sum(v * np.cross(t_in, t_out), axis=1), np.sum(t_in * t_out, axis=1))
        return float(2 * math.pi - turn.sum())

    def arc_distance(self, p: np.ndarray) -> np.ndarray:
        """Angular distance from unit vectors ``p`` (m, 3) to the broken line."""
        p = np.atleast_2d(p)
        a = self.vertices
        b = np.roll(a, -1, axis=0)
        n = _unit(np.cross(a, b))  # (k, 3)
        pn = p @ n.T  # (m, k)
        proj = p[:, None, :] - pn[..., None] * n[None, :, :]
        inside = (np.einsum("kd,mkd->mk", np.cross(a, n), proj) <= 0) & \
                 (np.einsum("kd,mkd->mk", np.cross(n, b), proj) <= 0)
        # inside the lune of the arc: the foot of the perpendicular is on the arc
        foot = np.arctan2(np.abs(pn), np.linalg.norm(proj, axis=2))
        ends = np.minimum(central_angle(p[:, None, :], a[None]), central_angle(p[:, None, :], b[None]))
        return np.where(inside, np.minimum(foot, ends), ends).min(axis=1)

    def contains(self, p: np.ndarray) -> np.ndarray:
        """Strictly-left test via the fan-area identity.

        Summing signed areas of the triangles (p, v_i, v_i+1) gives the left
        area when p is inside and that area minus 4*pi otherwise.
        """
        p = _unit(np.atleast_2d(np.asarray(p, dtype=float)))
        v = self.vertices
        out = np.zeros(len(p), dtype=bool)
        nearest = np.argmax(p @ v.T, axis=1)
        close = central_angle(p, v[nearest]) < 1e-7
        if np.any(close):
            out[close] = self._sector_test(p[close], nearest[close])
        far = ~close
        if np.any(far):
            q = p[far].copy()
            # the fan evaluated at -q breaks down when -q sits on the curve;
            # nudge q by under half its own distance to the curve first
            anti = self.arc_distance(-q) < 1e-7
            if np.any(anti):
                r = q[anti]
                step = np.minimum(1e-3, 0.5 * self.arc_distance(r))
                t = self._nearest_arc_normal(-r)
                q[anti] = _unit(np.cos(step)[:, None] * r + np.sin(step)[:, None] * t)
            out[far] = self._fan_test(-q)
        return out

    def _fan_test(self, q: np.ndarray) -> np.ndarray:
        """True where the antipode of ``q`` is strictly left of the curve.

        The signed fan-area sum from apex q equals the left area when -q lies
        outside and the left area minus 4*pi when -q lies inside.
        """
        a = self.vertices
        b = np.roll(a, -1, axis=0)
        triple = q @ np.cross(a, b).T
        denom = 1 + q @ a.T + q @ b.T + np.sum(a * b, axis=1)[None, :]
        fan = 2 * np.arctan2(triple, denom).sum(axis=1)
        area = self.left_area()
        return np.abs(fan - (area - 4 * math.pi)) < np.abs(fan - area)

    def _sector_test(self, p: np.ndarray, vid: np.ndarray) -> np.ndarray:
        v = self.vertices
        n = len(v)
        out = []
        for x, i in zip(p, vid):
            a, prev, nxt = v[i], v[i - 1], v[(i + 1) % n]
            d = x - np.dot(x, a) * a
            if np.linalg.norm(d) == 0:
                out.append(False)
                continue
            t_prev = _unit(prev - np.dot(prev, a) * a)
            t_next = _unit(nxt - np.dot(nxt, a) * a)
            d = _unit(d)

            def ang(y):
                return math.atan2(np.dot(a, np.cross(t_next, y)), np.dot(t_next, y)) % (2 * math.pi)

            out.append(0 < ang(d) < ang(t_prev))
        return np.array(out, dtype=bool)

    def _nearest_arc_normal(self, p: np.ndarray) -> np.ndarray:
        a = self.vertices
        b = np.roll(a, -1, axis=0)
        n = _unit(np.cross(a, b))
        which = np.argmin(np.abs(p @ n.T), axis=1)
        return n[which]


def signed_cycle_distance(p, c: SphericalCycle) -> np.ndarray | float:
    """Distance to ``c``; positive in the interior (left), negative outside."""
    scalar = isinstance(p, SpherePoint) or np.asarray(p).ndim == 1
    pts = p.direction if isinstance(p, SpherePoint) else _unit(p)
    pts = np.atleast_2d(pts)
    ang = c.arc_distance(pts)
    sign = np.where(c.contains(pts), 1.0, -1.0)
    out = np.where(ang <= _config.TOL.on_curve, 0.0, sign * ang) * c.radius
    return float(out[0]) if scalar else out


def antipodal_gap(c: SphericalCycle, vertices: np.ndarray) -> float:
    """Signed set distance from the antipodes of ``vertices`` to ``c``.

    Positive when every antipode is inside, negative when all are outside,
    zero when they straddle or touch the cycle.
    """
    v = np.atleast_2d(np.asarray(vertices, dtype=float))
    if v.shape[0] == 0:
        raise GeometryError("empty vertex set")
    d = np.asarray(signed_cycle_distance(-_unit(v), c))
    if np.all(d > 0):
        return float(d.min())
    if np.all(d < 0):
        return float(d.max())
    return 0.0


def sample_cycle(c: SphericalCycle, per_arc: int = 64) -> tuple[np.ndarray, float]:
    """Points along every arc of ``c`` and the largest angular gap between them."""
    a = c.vertices
    b = np.roll(a, -1, axis=0)
    ang = central_angle(a, b)
    t = np.arange(per_arc) / per_arc
    # slerp along each minor arc
    w1 = np.sin((1 - t)[None, :] * ang[:, None]) / np.sin(ang)[:, None]
    w2 = np.sin(t[None, :] * ang[:, None]) / np.sin(ang)[:, None]
    pts = w1[..., None] * a[:, None, :] + w2[..., None] * b[:, None, :]
    return pts.reshape(-1, 3), float(ang.max() / per_arc)


def directed_hausdorff(c1: SphericalCycle, c2: SphericalCycle, per_arc: int = 64) -> tuple[float, float]:
    """max over c1 of the distance to c2 (sampled on c1), with its sampling error."""
    pts, gap = sample_cycle(c1, per_arc)
    return float(c1.radius * c2.arc_distance(pts).max()), c1.radius * gap


def hausdorff(c1: SphericalCycle, c2: SphericalCycle, per_arc: int = 64) -> tuple[float, float]:
    h12, e12 = directed_hausdorff(c1, c2, per_arc)
    h21, e21 = directed_hausdorff(c2, c1, per_arc)
    return max(h12, h21), max(e12, e21)


def star_cycle(center: np.ndarray, radii: np.ndarray, angles: np.ndarray) -> SphericalCycle:
    """Counterclockwise polygon with vertex i at angular distance radii[i] along bearing angles[i]."""
    c = _unit(center)
    helper = np.array([1.0, 0, 0]) if abs(c[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = _unit(np.cross(c, helper))
    e2 = np.cross(c, e1)
    radii = np.asarray(radii, dtype=float)[:, None]
    angles = np.asarray(angles, dtype=float)[:, None]
    pts = np.cos(radii) * c[None, :] + np.sin(radii) * (np.cos(angles) * e1 + np.sin(angles) * e2)
    return SphericalCycle(pts)


def broken_line_length(points: np.ndarray, radius: float = 1.0, d1: float | None = None,
                       closed: bool = False) -> tuple[float, bool | None]:
    """Total arc length, and whether ``L < d1 * hops`` holds (None without d1)."""
    p = _unit(np.asarray(points, dtype=float))
    q = np.roll(p, -1, axis=0) if closed else p[1:]
    base = p if closed else p[:-1]
    arcs = radius * central_angle(base, q)
    if np.any(arcs == 0):
        raise GeometryError("consecutive points coincide")
    total = float(arcs.sum())
    if d1 is None:
        return total, None
    if np.all(arcs < d1):
        bound = total < d1 * len(arcs)
        if not bound:
            raise AssertionError("length bound violated although every hop is shorter than d1")
        return total, bound
    return total, False


def threshold_radius(d1: float, d2: float) -> float:
    return (23 * d1 + 0.5 * d2) / math.pi


# -- embedded meshes --------------------------------------------------------------

def geodesic_sphere(frequency: int, radius: float = 1.0) -> TriMesh:
    return icosahedral_subdivision(frequency, radius)


def frequency_for_edge(radius: float, max_edge: float) -> int:
    """Smallest subdivision frequency whose longest edge arc is below ``max_edge``."""
    f = 1
    while True:
        m = geodesic_sphere(f, radius)
        if edge_arcs(m).max() < max_edge:
            return f
        f += 1


def edge_arcs(m: TriMesh) -> np.ndarray:
    emb = _need_embedding(m)
    e = np.array(m.edges)
    return emb.radius * central_angle(emb.positions[e[:, 0]], emb.positions[e[:, 1]])


def triangle_circumradii(m: TriMesh) -> np.ndarray:
    """Spherical circumradius (arc length) of every triangle."""
    emb = _need_embedding(m)
    t = np.array(m.triangles)
    a, b, c = (emb.positions[t[:, i]] for i in range(3))
    center = _unit(np.cross(b - a, c - a))
    return emb.radius * central_angle(center, a)


def _need_embedding(m: TriMesh) -> Embedding:
    if m.embedding is None:
        raise GeometryError("mesh has no sphere embedding")
    return m.embedding


def verify_graph_premises(m: TriMesh, d1: float, d2: float) -> dict:
    arcs = edge_arcs(m)
    circ = triangle_circumradii(m)
    r = m.embedding.radius
    thr = threshold_radius(d1, d2)
    checks = {
        "edge_below_d1": {"ok": bool(arcs.max() < d1), "max_edge": float(arcs.max()),
                          "margin": float(d1 - arcs.max())},
        "unit_disk_cover": {"ok": bool(circ.max() < 1), "max_circumradius": float(circ.max()),
                            "margin": float(1 - circ.max())},
        "edge_points_within_d2": {"ok": bool(arcs.max() < 2 * d2), "margin": float(2 * d2 - arcs.max())},
        "radius_gate": {"ok": bool(r >= thr), "radius": float(r), "threshold": thr,
                        "alternative_remark": ALTERNATIVE_RADIUS_REMARK},
    }
    return {"checks": checks, "ok": all(c["ok"] for c in checks.values())}


def small_circle(center: np.ndarray, angle: float, n: int = 64) -> SphericalCycle:
    """Counterclockwise (seen from outside) circle of angular radius ``angle``."""
    c = _unit(center)
    helper = np.array([1.0, 0, 0]) if abs(c[0]) < 0.9 else np.array([0, 1.0, 0])
    e1 = _unit(np.cross(c, helper))
    e2 = np.cross(c, e1)
    t = np.linspace(0, 2 * math.pi, n, endpoint=False)
    pts = (math.cos(angle) * c[None, :]
           + math.sin(angle) * (np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2))
    return SphericalCycle(pts)

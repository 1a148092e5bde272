"""Triangular lattice, Isbell 7-colourings and the edge-direction table.

Lattice points use axial coordinates ``(a, b)`` with planar position
``a * (1, 0) + b * (1/2, sqrt(3)/2)``.  The six unit steps, counterclockwise
from angle 0, are listed in ``DIRECTIONS``.

An Isbell colouring is modelled as ``perm[(a - a0) + m (b - b0)) mod 7]``
with ``m`` in {3, 5}.  Both multipliers are primitive roots mod 7 and satisfy
``m^2 - m + 1 = 0 (mod 7)``, which makes every closed neighbourhood rainbow.
The exhaustive checks in this module confirm that nothing else is a nice
7-colouring of the 2-neighbourhood.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .coloring import search_nice_coloring

Point = tuple[int, int]

DIRECTIONS: tuple[Point, ...] = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
MULTIPLIER = {"A": 3, "B": 5}
SQRT3_2 = math.sqrt(3) / 2


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def neighbors(p: Point) -> list[Point]:
    return [add(p, d) for d in DIRECTIONS]


def hex_distance(p: Point, q: Point = (0, 0)) -> int:
    a, b = sub(p, q)
    return (abs(a) + abs(b) + abs(a + b)) // 2


def to_xy(p: Point) -> tuple[float, float]:
    return (p[0] + 0.5 * p[1], SQRT3_2 * p[1])


def direction_index(step: Point) -> int:
    try:
        return DIRECTIONS.index(step)
    except ValueError:
        raise ValueError(f"{step} is not a unit lattice step") from None


def ball(center: Point, radius: int) -> list[Point]:
    ca, cb = center
    return sorted((ca + a, cb + b)
                  for a in range(-radius, radius + 1)
                  for b in range(-radius, radius + 1)
                  if hex_distance((a, b)) <= radius)


# -- Isbell colourings --------------------------------------------------------

@dataclass(frozen=True)
class IsbellParams:
    chirality: str = "A"
    perm: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7)  # colour of residue 0..6
    base: Point = (0, 0)

    def __post_init__(self):
        if self.chirality not in MULTIPLIER:
            raise ValueError("chirality must be 'A' or 'B'")
        if sorted(self.perm) != list(range(1, 8)):
            raise ValueError("perm must be a permutation of 1..7")

    @property
    def multiplier(self) -> int:
        return MULTIPLIER[self.chirality]

    def residue(self, q: Point) -> int:
        return ((q[0] - self.base[0]) + self.multiplier * (q[1] - self.base[1])) % 7

    def to_dict(self) -> dict:
        return {"chirality": self.chirality, "perm": list(self.perm), "base": list(self.base)}


def isbell_color(p: IsbellParams, q: Point) -> int:
    return p.perm[p.residue(q)]


def in_period_lattice(p: IsbellParams, v: Point) -> bool:
    return (v[0] + p.multiplier * v[1]) % 7 == 0


def all_params() -> list[IsbellParams]:
    """One representative per distinct colouring (the base offset is absorbed by perm)."""
    return [IsbellParams(ch, perm) for ch in ("A", "B")
            for perm in itertools.permutations(range(1, 8))]


def fit_params(coloring: Mapping[Point, int]) -> list[IsbellParams]:
    """Every Isbell colouring (base fixed at the origin) agreeing with ``coloring``."""
    found = []
    for ch, m in MULTIPLIER.items():
        perm: dict[int, int] = {}
        ok = True
        for (a, b), c in coloring.items():
            r = (a + m * b) % 7
            if perm.setdefault(r, c) != c:
                ok = False
                break
        if not ok or len(set(perm.values())) != len(perm):
            continue
        free_res = [r for r in range(7) if r not in perm]
        free_col = sorted(set(range(1, 8)) - set(perm.values()))
        for fill in itertools.permutations(free_col):
            full = dict(perm)
            full.update(zip(free_res, fill))
            found.append(IsbellParams(ch, tuple(full[r] for r in range(7))))
    return found


# -- fragments ------------------------------------------------------------------

# reference central hexagon: centre 1, then 4,5,6,7,2,3 counterclockwise
REFERENCE_CENTER_COLORING: dict[Point, int] = {
    (0, 0): 1, (1, 0): 4, (0, 1): 5, (-1, 1): 6, (-1, 0): 7, (0, -1): 2, (1, -1): 3,
}

# labelled layout of the 19-point chart: u, u_1..u_6, u_{j,j}, u_{j,j+1}
GH_LABELS: dict[str, Point] = {
    "u": (0, 0),
    "u1": (1, 0), "u2": (0, 1), "u3": (-1, 1), "u4": (-1, 0), "u5": (0, -1), "u6": (1, -1),
    "u11": (2, 0), "u12": (1, 1), "u22": (0, 2), "u23": (-1, 2), "u33": (-2, 2), "u34": (-2, 1),
    "u44": (-2, 0), "u45": (-1, -1), "u55": (0, -2), "u56": (1, -2), "u66": (2, -2), "u61": (2, -1),
}

_G_H_MINUS_EXTRA = [(-1, 2), (-2, 2), (-2, 1), (-2, 0), (-1, -1), (0, -2), (1, -2)]

FRAGMENT_POINTS: dict[str, tuple[Point, ...]] = {
    "G_h": tuple(ball((0, 0), 1)),
    "G_h_plus": tuple(sorted(ball((0, 0), 1) + [(2, 0)])),
    "G_H_minus": tuple(sorted(ball((0, 0), 1) + _G_H_MINUS_EXTRA)),
    "G_H": tuple(ball((0, 0), 2)),
}


@dataclass(frozen=True)
class LatticeFragment:
    kind: str
    points: tuple[Point, ...]
    labels: dict[str, Point] = field(default_factory=dict, compare=False)

    @property
    def index(self) -> dict[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    def adjacency(self) -> list[list[int]]:
        idx = self.index
        return [sorted(idx[q] for q in neighbors(p) if q in idx) for p in self.points]

    def edge_count(self) -> int:
        return sum(len(n) for n in self.adjacency()) // 2

    def triangles(self) -> list[tuple[Point, Point, Point]]:
        pts = set(self.points)
        out = []
        for a, b in self.points:
            up = ((a, b), (a + 1, b), (a, b + 1))
            down = ((a + 1, b), (a + 1, b + 1), (a, b + 1))
            out += [t for t in (up, down) if all(q in pts for q in t)]
        return out

    def to_dict(self) -> dict:
        return {"kind": self.kind, "points": [list(p) for p in self.points],
                "labels": {k: list(v) for k, v in self.labels.items()}}


def fragment(kind: str, points: Iterable[Point] | None = None) -> LatticeFragment:
    if kind == "custom":
        if points is None:
            raise ValueError("custom fragments need explicit points")
        return LatticeFragment("custom", tuple(sorted(set(points))))
    if kind not in FRAGMENT_POINTS:
        raise ValueError(f"unknown fragment kind {kind!r}")
    labels = dict(GH_LABELS) if kind == "G_H" else {}
    return LatticeFragment(kind, FRAGMENT_POINTS[kind], labels)


# -- exhaustive checks ------------------------------------------------------------

def _restrict(p: IsbellParams, pts: Sequence[Point]) -> tuple[int, ...]:
    return tuple(isbell_color(p, q) for q in pts)


def verify_isbell_uniqueness(timeout: float | None = None) -> dict:
    """Enumerate nice 7-colourings of the 19-point chart.

    With the central hexagon fixed to the reference colouring there must be exactly
    two, each the restriction of an Isbell colouring; without the constraint
    there must be 2 * 7! of them, all Isbell restrictions.
    """
    frag = fragment("G_H")
    idx = frag.index
    fixed = {idx[q]: c for q, c in REFERENCE_CENTER_COLORING.items()}
    pinned = search_nice_coloring(frag.adjacency(), 7, mode="enumerate", fixed=fixed,
                                  max_solutions_kept=16, timeout=timeout)
    completions = []
    for sol in pinned.solutions:
        col = dict(zip(frag.points, sol))
        params = fit_params(col)
        if len(params) != 1:
            raise AssertionError(f"completion {sol} is not a unique Isbell restriction")
        completions.append({"colors": list(sol), "params": params[0].to_dict()})

    free = search_nice_coloring(frag.adjacency(), 7, mode="enumerate", symmetry_breaking=False,
                                max_solutions_kept=20000, timeout=timeout)
    isbell_restrictions = {_restrict(p, frag.points) for p in all_params()}
    enumerated = set(free.solutions)
    all_isbell = enumerated == isbell_restrictions
    report = {
        "fixed_count": pinned.count,
        "completions": completions,
        "unrestricted_count": free.count,
        "expected_unrestricted": 2 * math.factorial(7),
        "all_unrestricted_are_isbell": all_isbell,
        "nodes": pinned.stats.nodes + free.stats.nodes,
    }
    report["ok"] = (pinned.status == "enumerated" and free.status == "enumerated"
                    and pinned.count == 2 and free.count == 2 * math.factorial(7) and all_isbell)
    return report


def verify_isbell_extension() -> dict:
    """Count Isbell colourings per restriction to the hexagon and to hexagon-plus-one."""
    gh = fragment("G_h").points
    ghp = fragment("G_h_plus").points
    window = ball((0, 0), 3)  # large enough to separate distinct colourings
    by_gh: dict[tuple, set] = {}
    by_ghp: dict[tuple, set] = {}
    for p in all_params():
        full = _restrict(p, window)
        by_gh.setdefault(_restrict(p, gh), set()).add(full)
        by_ghp.setdefault(_restrict(p, ghp), set()).add(full)
    gh_sizes = sorted({len(v) for v in by_gh.values()})
    ghp_sizes = sorted({len(v) for v in by_ghp.values()})
    # every nice colouring of the hexagon is rainbow, hence 7! of them
    cross = 0
    for key, group in by_gh.items():
        chir = {fit.chirality for fit in fit_params(dict(zip(gh, key)))}
        cross += chir == {"A", "B"}
    report = {
        "params": len(all_params()),
        "hexagon_colorings": len(by_gh),
        "extensions_per_hexagon": gh_sizes,
        "extensions_per_hexagon_plus": ghp_sizes,
        "hexagons_with_both_chiralities": cross,
    }
    report["ok"] = (len(by_gh) == math.factorial(7) and gh_sizes == [2] and ghp_sizes == [1]
                    and cross == len(by_gh))
    return report


# -- direction table --------------------------------------------------------------

@dataclass(frozen=True)
class DirectionTable:
    params: IsbellParams
    table: dict[tuple[int, int], int]

    def __call__(self, ci: int, cj: int) -> int:
        try:
            return self.table[(ci, cj)]
        except KeyError:
            raise KeyError(f"colour pair {(ci, cj)} never occurs on a lattice edge") from None

    def turning(self, prev: int, cur: int, nxt: int) -> int:
        """Direction change at ``cur`` in sixths of a turn, mod 6."""
        return (self(cur, nxt) - self(prev, cur)) % 6


def direction_table(p: IsbellParams) -> DirectionTable:
    """Map each ordered colour pair on an edge to the edge's direction index."""
    inv = {c: r for r, c in enumerate(p.perm)}
    m = p.multiplier
    log = {pow(m, i, 7): i for i in range(6)}  # residue step of direction i is m**i
    table = {}
    for ci in range(1, 8):
        for cj in range(1, 8):
            if ci != cj:
                table[(ci, cj)] = log[(inv[cj] - inv[ci]) % 7]
    return DirectionTable(p, table)


def walk_turning_sum(table: DirectionTable, colors: Sequence[int]) -> int:
    """Sum of turning numbers around a closed walk given by its colour sequence."""
    n = len(colors)
    return sum(table.turning(colors[i - 1], colors[i], colors[(i + 1) % n]) for i in range(n)) % 6

"""Distance-2 ("nice") colourings: verification and exact backtracking search."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .mesh import TriMesh

MAX_COLORS = 32


class ColoringError(ValueError):
    pass


@dataclass(frozen=True)
class Coloring:
    k: int
    colors: tuple[int | None, ...]

    def to_dict(self) -> dict:
        return {"k": self.k, "colors": list(self.colors)}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Coloring":
        try:
            k = int(doc["k"])
            colors = tuple(None if c is None else int(c) for c in doc["colors"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ColoringError(f"malformed colouring document: {exc}") from exc
        for c in colors:
            if c is not None and not 1 <= c <= k:
                raise ColoringError(f"colour {c} outside 1..{k}")
        return cls(k, colors)


def adjacency_of(g) -> list[list[int]]:
    """Neighbour lists for a mesh, a networkx graph on 0..n-1, or raw lists."""
    if isinstance(g, TriMesh):
        return g.adjacency()
    if hasattr(g, "adj") and hasattr(g, "nodes"):
        n = g.number_of_nodes()
        if set(g.nodes) != set(range(n)):
            raise ColoringError("graph nodes must be 0..n-1")
        return [sorted(g.adj[v]) for v in range(n)]
    return [sorted(int(w) for w in nbrs) for nbrs in g]


def square_graph(g) -> list[list[int]]:
    """Neighbours at graph distance 1 or 2."""
    adj = adjacency_of(g)
    out = []
    for v, nbrs in enumerate(adj):
        near = set(nbrs)
        for w in nbrs:
            near.update(adj[w])
        near.discard(v)
        out.append(sorted(near))
    return out


def is_nice_coloring(g, sigma: Sequence[int | None] | Coloring, k: int | None = None):
    """Return ``(ok, witness)``; witness is the first clashing pair or None."""
    if isinstance(sigma, Coloring):
        k = sigma.k if k is None else k
        sigma = sigma.colors
    sq = square_graph(g)
    if len(sigma) != len(sq):
        raise ColoringError("colouring length does not match the graph")
    for v, c in enumerate(sigma):
        if c is None:
            raise ColoringError(f"vertex {v} is uncoloured")
        if k is not None and not 1 <= c <= k:
            raise ColoringError(f"colour {c} of vertex {v} outside 1..{k}")
    for v, nbrs in enumerate(sq):
        for w in nbrs:
            if w > v and sigma[v] == sigma[w]:
                return False, (v, w)
    return True, None


@dataclass
class SearchStats:
    nodes: int = 0
    elapsed: float = 0.0
    symmetry_breaking: bool = False


@dataclass
class SearchOutcome:
    status: str  # "sat" | "unsat" | "enumerated" | "indeterminate"
    coloring: Coloring | None = None
    count: int | None = None
    solutions: list[tuple[int, ...]] = field(default_factory=list)
    stats: SearchStats = field(default_factory=SearchStats)

    def to_dict(self) -> dict:
        out = {"status": self.status, "nodes": self.stats.nodes,
               "symmetry_breaking": self.stats.symmetry_breaking}
        if self.coloring is not None:
            out["coloring"] = self.coloring.to_dict()
        if self.count is not None:
            out["count"] = self.count
        return out


def symmetry_anchor(adj: list[list[int]], k: int) -> dict[int, int] | None:
    """Colours 1..d+1 on the closed neighbourhood of the lowest-id max-degree vertex.

    A closed neighbourhood is a clique of the square graph, so any nice
    colouring can be permuted to agree with this assignment.  Returns None when
    the neighbourhood needs more than k colours (no nice colouring exists).
    """
    n = len(adj)
    v = max(range(n), key=lambda u: (len(adj[u]), -u))
    members = [v] + list(adj[v])
    if len(members) > k:
        return None
    return {u: i + 1 for i, u in enumerate(members)}


def search_nice_coloring(
    g,
    k: int,
    mode: str = "find",
    fixed: Mapping[int, int] | Coloring | None = None,
    symmetry_breaking: bool | None = None,
    max_solutions_kept: int = 0,
    timeout: float | None = None,
    max_nodes: int | None = None,
    chunk: int = 200_000,
) -> SearchOutcome:
    """Exact search for proper colourings of the square graph.

    ``mode`` is ``find`` (first solution), ``enumerate`` (count every
    completion of ``fixed``) or ``prove_unsat`` (exhaust the tree; the
    outcome is ``sat`` with a witness if one turns up).  Running out of
    ``timeout`` seconds or ``max_nodes`` yields ``indeterminate``.
    """
    if mode not in ("find", "enumerate", "prove_unsat"):
        raise ColoringError(f"unknown mode {mode!r}")
    if not 1 <= k <= MAX_COLORS:
        raise ColoringError(f"k must lie in 1..{MAX_COLORS}")
    adj = adjacency_of(g)
    sq = square_graph(adj)
    n = len(sq)
    if isinstance(fixed, Coloring):
        fixed = {v: c for v, c in enumerate(fixed.colors) if c is not None}
    fixed = dict(fixed or {})
    if symmetry_breaking is None:
        symmetry_breaking = mode != "enumerate" and not fixed
    stats = SearchStats(symmetry_breaking=bool(symmetry_breaking))
    start = time.perf_counter()

    if symmetry_breaking:
        if fixed:
            raise ColoringError("symmetry breaking cannot be combined with a fixed assignment")
        anchor = symmetry_anchor(adj, k)
        if anchor is None:
            stats.elapsed = time.perf_counter() - start
            status = "enumerated" if mode == "enumerate" else "unsat"
            return SearchOutcome(status, count=0 if mode == "enumerate" else None, stats=stats)
        fixed = anchor

    colors = np.zeros(n, dtype=np.int64)
    forb = np.zeros((n, k + 1), dtype=np.int64)
    ptr, idx = _kernels.csr(sq)
    for v, c in sorted(fixed.items()):
        if not 0 <= v < n or not 1 <= c <= k:
            raise ColoringError(f"invalid fixed assignment {v}->{c}")
        if forb[v, c]:
            stats.elapsed = time.perf_counter() - start
            return SearchOutcome("enumerated" if mode == "enumerate" else "unsat",
                                 count=0 if mode == "enumerate" else None, stats=stats)
        colors[v] = c
        for w in sq[v]:
            forb[w, c] += 1

    stack_v = np.full(n + 1, -1, dtype=np.int64)
    stack_c = np.zeros(n + 1, dtype=np.int64)
    state = np.zeros(6, dtype=np.int64)
    state[5] = 1 if mode in ("find", "prove_unsat") else 0
    store = np.zeros((max_solutions_kept, n), dtype=np.int64)
    while True:
        budget = chunk
        if max_nodes is not None:
            budget = min(budget, max_nodes - int(state[2]))
            if budget <= 0:
                break
        _kernels.dsatur(ptr, idx, k, colors, forb, stack_v, stack_c, state, budget, store)
        if state[3] != 0:
            break
        if timeout is not None and time.perf_counter() - start > timeout:
            break
    stats.nodes = int(state[2])
    stats.elapsed = time.perf_counter() - start
    kept = [tuple(int(x) for x in row) for row in store[: int(state[4])]]

    if state[3] == 2:
        sol = Coloring(k, tuple(int(c) for c in colors))
        ok, _ = is_nice_coloring(adj, sol.colors, k)
        if not ok:  # independent re-check of the kernel's answer
            raise AssertionError("search returned an invalid colouring")
        return SearchOutcome("sat", coloring=sol, count=1, solutions=kept, stats=stats)
    if state[3] == 1:
        if mode == "enumerate":
            return SearchOutcome("enumerated", count=int(state[1]), solutions=kept, stats=stats)
        return SearchOutcome("unsat", count=0, stats=stats)
    return SearchOutcome("indeterminate", count=int(state[1]) if mode == "enumerate" else None,
                         solutions=kept, stats=stats)


def proper_colorings(adj: Sequence[Sequence[int]], k: int):
    """Brute-force proper (distance-1) colourings; for tiny graphs only."""
    n = len(adj)
    colors = [0] * n

    def rec(i):
        if i == n:
            yield tuple(colors)
            return
        for c in range(1, k + 1):
            if all(colors[w] != c for w in adj[i] if w < i):
                colors[i] = c
                yield from rec(i + 1)
        colors[i] = 0

    yield from rec(0)

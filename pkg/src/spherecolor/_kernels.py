"""Hot loops: breadth-first distances, the exact colouring search and
pairwise point-distance scans.

Each kernel exists once as plain Python over numpy arrays.  When numba is
importable and ``SPHERECOLOR_DISABLE_NUMBA`` is unset, the same source is
compiled with ``@njit``; otherwise the interpreted version runs (the distance
scans switch to a vectorised numpy path instead, which is much faster than
interpreting the loops).
"""

from __future__ import annotations

import numpy as np

from ._config import numba_disabled, thread_count

try:  # pragma: no cover - exercised through both CI modes
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and not numba_disabled()

if USE_NUMBA:
    _n_threads = thread_count()
    if _n_threads is not None:
        numba.set_num_threads(min(_n_threads, numba.config.NUMBA_NUM_THREADS))


def _bfs_all_pairs(ptr, idx):
    n = ptr.shape[0] - 1
    dist = np.full((n, n), -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        row = dist[s]
        row[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            du = row[u] + 1
            for e in range(ptr[u], ptr[u + 1]):
                w = idx[e]
                if row[w] < 0:
                    row[w] = du
                    queue[tail] = w
                    tail += 1
    return dist


def _dsatur(ptr, idx, k, colors, forb, stack_v, stack_c, state, budget, store):
    """Resumable iterative backtracking over a distance-2 conflict graph.

    ``state`` = [depth, solutions, nodes, status, stored, stop_at_first].
    status: 0 running (budget exhausted), 1 tree exhausted, 2 stopped on a
    solution (``colors`` then holds it).
    """
    n = colors.shape[0]
    depth = state[0]
    while budget > 0:
        if depth < 0:
            state[3] = 1
            break
        v = stack_v[depth]
        if v < 0:
            best = -1
            best_sat = -1
            best_deg = -1
            for u in range(n):
                if colors[u] != 0:
                    continue
                sat = 0
                for c in range(1, k + 1):
                    if forb[u, c] > 0:
                        sat += 1
                deg = ptr[u + 1] - ptr[u]
                if sat > best_sat or (sat == best_sat and deg > best_deg):
                    best = u
                    best_sat = sat
                    best_deg = deg
            if best < 0:
                state[1] += 1
                if state[4] < store.shape[0]:
                    for u in range(n):
                        store[state[4], u] = colors[u]
                    state[4] += 1
                if state[5] == 1:
                    state[3] = 2
                    break
                depth -= 1
                continue
            stack_v[depth] = best
            stack_c[depth] = 0
            v = best
        c = stack_c[depth]
        if c > 0:
            colors[v] = 0
            for e in range(ptr[v], ptr[v + 1]):
                forb[idx[e], c] -= 1
        c += 1
        while c <= k and forb[v, c] > 0:
            c += 1
        if c > k:
            stack_v[depth] = -1
            stack_c[depth] = 0
            depth -= 1
            continue
        colors[v] = c
        stack_c[depth] = c
        for e in range(ptr[v], ptr[v + 1]):
            forb[idx[e], c] += 1
        state[2] += 1
        budget -= 1
        depth += 1
        stack_v[depth] = -1
        stack_c[depth] = 0
    state[0] = depth


def _min_cross_loop(a, b):
    best = np.inf
    bi = -1
    bj = -1
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            s = 0.0
            for d in range(a.shape[1]):
                t = a[i, d] - b[j, d]
                s += t * t
            if s < best:
                best = s
                bi = i
                bj = j
    return np.sqrt(best), bi, bj


def _max_self_loop(a):
    best = 0.0
    bi = 0
    bj = 0
    for i in range(a.shape[0]):
        for j in range(i + 1, a.shape[0]):
            s = 0.0
            for d in range(a.shape[1]):
                t = a[i, d] - a[j, d]
                s += t * t
            if s > best:
                best = s
                bi = i
                bj = j
    return np.sqrt(best), bi, bj


def _min_cross_numpy(a, b, chunk=2048):
    best = np.inf
    pair = (-1, -1)
    for s in range(0, a.shape[0], chunk):
        block = a[s:s + chunk]
        d2 = ((block[:, None, :] - b[None, :, :]) ** 2).sum(axis=2)
        flat = int(np.argmin(d2))
        i, j = divmod(flat, d2.shape[1])
        if d2[i, j] < best:
            best = float(d2[i, j])
            pair = (s + i, j)
    return np.sqrt(best), pair[0], pair[1]


def _max_self_numpy(a, chunk=2048):
    best = 0.0
    pair = (0, 0)
    for s in range(0, a.shape[0], chunk):
        block = a[s:s + chunk]
        d2 = ((block[:, None, :] - a[None, :, :]) ** 2).sum(axis=2)
        flat = int(np.argmax(d2))
        i, j = divmod(flat, d2.shape[1])
        if d2[i, j] > best:
            best = float(d2[i, j])
            pair = (s + i, j)
    i, j = sorted(pair)
    return np.sqrt(best), i, j


PYTHON_KERNELS = {
    "bfs_all_pairs": _bfs_all_pairs,
    "dsatur": _dsatur,
    "min_cross": _min_cross_numpy,
    "max_self": _max_self_numpy,
}

if USE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    bfs_all_pairs = _jit(_bfs_all_pairs)
    dsatur = _jit(_dsatur)
    min_cross = _jit(_min_cross_loop)
    max_self = _jit(_max_self_loop)
else:
    bfs_all_pairs = _bfs_all_pairs
    dsatur = _dsatur
    min_cross = _min_cross_numpy
    max_self = _max_self_numpy

COMPILED_KERNELS = {
    "bfs_all_pairs": bfs_all_pairs,
    "dsatur": dsatur,
    "min_cross": min_cross,
    "max_self": max_self,
}


def csr(adjacency) -> tuple[np.ndarray, np.ndarray]:
    """Pack a list of neighbour lists into CSR arrays."""
    ptr = np.zeros(len(adjacency) + 1, dtype=np.int64)
    for i, nbrs in enumerate(adjacency):
        ptr[i + 1] = ptr[i] + len(nbrs)
    idx = np.fromiter((w for nbrs in adjacency for w in nbrs), dtype=np.int64, count=int(ptr[-1]))
    return ptr, idx

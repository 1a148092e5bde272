import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from spherecolor import _kernels
from spherecolor.coloring import search_nice_coloring
from spherecolor.generators import icosahedral_subdivision
from spherecolor.isbell import fragment

PY, JIT = _kernels.PYTHON_KERNELS, _kernels.COMPILED_KERNELS
points = arrays(np.float64, st.tuples(st.integers(1, 40), st.just(3)), elements=st.floats(-5, 5))


def test_bfs_backends_agree(sphere2):
    ptr, idx = _kernels.csr(sphere2.rotation)
    assert np.array_equal(PY["bfs_all_pairs"](ptr, idx), JIT["bfs_all_pairs"](ptr, idx))


@settings(max_examples=40, deadline=None)
@given(points, points)
def test_min_cross_backends_agree(a, b):
    d_py, i_py, j_py = PY["min_cross"](a, b)
    d_jit, i_jit, j_jit = JIT["min_cross"](a, b)
    assert d_py == pytest.approx(d_jit, abs=1e-12)
    brute = np.linalg.norm(a[:, None] - b[None], axis=-1)
    assert d_py == pytest.approx(brute.min(), abs=1e-12)
    assert brute[i_jit, j_jit] == pytest.approx(brute.min(), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(points.filter(lambda a: len(a) >= 2))
def test_max_self_backends_agree(a):
    brute = np.linalg.norm(a[:, None] - a[None], axis=-1).max()
    assert PY["max_self"](a)[0] == pytest.approx(brute, abs=1e-12)
    assert JIT["max_self"](a)[0] == pytest.approx(brute, abs=1e-12)


def test_search_backends_agree(monkeypatch):
    chart = fragment("G_h_plus").adjacency()
    sphere = icosahedral_subdivision(2)
    fast = search_nice_coloring(chart, 7, mode="enumerate")
    fast_unsat = search_nice_coloring(sphere, 7, mode="prove_unsat")
    monkeypatch.setattr(_kernels, "dsatur", PY["dsatur"])
    slow = search_nice_coloring(chart, 7, mode="enumerate")
    slow_unsat = search_nice_coloring(sphere, 7, mode="prove_unsat")
    assert fast.count == slow.count > 0
    assert fast_unsat.status == slow_unsat.status == "unsat"


def test_env_flag_disables_numba():
    code = "from spherecolor import _kernels; print(_kernels.USE_NUMBA, _kernels.min_cross is _kernels.PYTHON_KERNELS['min_cross'])"
    env = dict(os.environ, SPHERECOLOR_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]


def test_csr_layout():
    ptr, idx = _kernels.csr([[1, 2], [0], [0]])
    assert ptr.tolist() == [0, 2, 3, 4] and idx.tolist() == [1, 2, 0, 0]

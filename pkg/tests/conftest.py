import numpy as np
import pytest

from spherecolor.generators import icosahedral_subdivision, icosahedron, octahedron, tetrahedron, torus_grid


@pytest.fixture(scope="session")
def ico():
    return icosahedron()


@pytest.fixture(scope="session")
def octa():
    return octahedron()


@pytest.fixture(scope="session")
def tetra():
    return tetrahedron()


@pytest.fixture(scope="session")
def sphere2():
    return icosahedral_subdivision(2)


@pytest.fixture(scope="session")
def sphere4():
    return icosahedral_subdivision(4)


@pytest.fixture(scope="session")
def grid77():
    return torus_grid(7, 7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criterion -> list of (part, ok, detail), printed after the run
_ACCEPTANCE: dict[int, list[tuple[str, bool, str]]] = {}


@pytest.fixture
def criterion():
    def record(number: int, part: str, ok: bool, detail: str = "") -> bool:
        _ACCEPTANCE.setdefault(number, []).append((part, bool(ok), detail))
        return bool(ok)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[n]
        verdict = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        tr.write_line(f"criterion {n:2d}: {verdict}")
        for part, ok, detail in parts:
            tr.write_line(f"    {'ok ' if ok else 'BAD'} {part}" + (f" ({detail})" if detail else ""))

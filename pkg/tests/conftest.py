import math

import numpy as np
import pytest

GROVER4 = np.full((4, 4), 0.5) - np.eye(4)
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
SIGMA_Z = np.diag([1.0, -1.0])

_acceptance_lines: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(label: str, ok: bool, detail: str = ""):
        _acceptance_lines.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def dense_walk_operator(coin: np.ndarray, d: int, radius: int) -> np.ndarray:
    """Z = S (1 x U) as an explicit matrix on a truncated lattice.

    Ordering matches a C-ordered ``(x_1, ..., x_d, coin)`` array, which is how
    the engine lays out amplitudes; nothing else is shared with it.
    """
    size = 2 * radius + 1
    fwd = np.eye(size, k=-1)  # |j+1><j|
    eye = np.eye(size)
    n_coin = 2 * d
    shift = np.zeros(((size**d) * n_coin,) * 2)
    for n in range(d):
        for pol, f in ((0, fwd), (1, fwd.T)):
            lattice = np.array([[1.0]])
            for k in range(d):
                lattice = np.kron(lattice, f if k == n else eye)
            proj = np.zeros((n_coin, n_coin))
            c = 2 * n + pol
            proj[c, c] = 1.0
            shift = shift + np.kron(lattice, proj)
    return shift @ np.kron(np.eye(size**d), coin)


def haar(n: int, rng) -> np.ndarray:
    from scipy.stats import unitary_group

    return unitary_group.rvs(n, random_state=rng)

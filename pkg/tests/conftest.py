import itertools

import numpy as np
import pytest

from schurkit.perm import Perm


def brute_force_aut_order(color: np.ndarray) -> int:
    """Count permutations preserving a coloring by trying all of them."""
    n = color.shape[0]
    count = 0
    for p in itertools.permutations(range(n)):
        p = np.array(p)
        if np.array_equal(color[p[:, None], p[None, :]], color):
            count += 1
    return count


def brute_force_group_order(degree: int, gens) -> int:
    seen = {tuple(range(degree))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g.images[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def cyc(n, *cycles):
    return Perm.from_cycles(n, cycles)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def record(criterion: int, status: str, detail: str) -> None:
    ACCEPTANCE[criterion] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {status:4s} {detail}")

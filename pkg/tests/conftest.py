import itertools
import random

import pytest

from rcoreset import Graph


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete(n):
    return Graph(n, list(itertools.combinations(range(n), 2)))


def complete_bipartite(a, b):
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)], n_left=a)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def random_graph(rng, max_n=12, p=None):
    n = rng.randint(1, max_n)
    q = rng.random() if p is None else p
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < q]
    return Graph(n, edges)


def random_bipartite(rng, max_side=6, p=None):
    a = rng.randint(1, max_side)
    b = rng.randint(1, max_side)
    q = rng.random() if p is None else p
    edges = [(i, a + j) for i in range(a) for j in range(b) if rng.random() < q]
    return Graph(a + b, edges, n_left=a)


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, shown at the end of the run
ACCEPTANCE = []


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title}: {detail}"
    ACCEPTANCE.append((number, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)

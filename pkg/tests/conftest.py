import random
from fractions import Fraction
from itertools import combinations

import pytest

from rtlab.wgraph import WeightedGraph

HALF = Fraction(1, 2)


def naive_count(G: WeightedGraph, q: int) -> Fraction:
    """Sum of products of weights over all q-subsets, in Fractions."""
    total = Fraction(0)
    for K in combinations(range(G.n), q):
        w = Fraction(1)
        for a, b in combinations(K, 2):
            w *= G.weight(a, b)
            if not w:
                break
        total += w
    return total


def naive_skeleton_value(G: WeightedGraph) -> int:
    best = 0
    n = G.n
    for ymask in range(1, 1 << n):
        Y = [v for v in range(n) if ymask >> v & 1]
        if any(G.codes[a][b] == 0 for a, b in combinations(Y, 2)):
            continue
        for xmask in range(1, 1 << len(Y)):
            X = [Y[i] for i in range(len(Y)) if xmask >> i & 1]
            if all(G.codes[a][b] == 2 for a, b in combinations(X, 2)):
                best = max(best, len(X) + len(Y))
    return best


def random_graph(rng: random.Random, n: int, mix=(0, 1, 1, 2)) -> WeightedGraph:
    codes = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            codes[i][j] = codes[j][i] = rng.choice(mix)
    return WeightedGraph.from_codes(codes)


@pytest.fixture
def rng():
    return random.Random(12345)


# -- acceptance summary --------------------------------------------------------

_CRITERIA = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    log = request.config.stash[_CRITERIA]

    def record(label: str, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        log.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

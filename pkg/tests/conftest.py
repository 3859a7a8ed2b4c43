import random
from fractions import Fraction

import pytest

from logsymplectic.exterior import MultiVector, coordinate_frame
from logsymplectic.poisson import PoissonStructure
from logsymplectic.ring import LaurentPoly, VarSpec

EXPLICIT_GRID = [
    [0, 1, 2, 3],
    [-1, 0, 4, 5],
    [-2, -4, 0, 6],
    [-3, -5, -6, 0],
]


def toric_structure(grid) -> PoissonStructure:
    """Invariant bivector of a constant skew grid, all variables divisorial."""
    size = len(grid)
    vs = VarSpec(size, size)
    terms = {}
    for i in range(1, size + 1):
        for j in range(i + 1, size + 1):
            a = Fraction(grid[i - 1][j - 1])
            if a == 0:
                continue
            exps = [0] * size
            exps[i - 1] = 1
            exps[j - 1] = 1
            terms[(i, j)] = LaurentPoly.monomial(vs, tuple(exps), a)
    return PoissonStructure(vs, MultiVector(coordinate_frame(vs), 2, terms))


def random_skew_grid(rng: random.Random, size: int, lo=-9, hi=9):
    grid = [[Fraction(0)] * size for _ in range(size)]
    values = [v for v in range(lo, hi + 1) if v != 0]
    for i in range(size):
        for j in range(i + 1, size):
            v = Fraction(rng.choice(values))
            grid[i][j] = v
            grid[j][i] = -v
    return grid


@pytest.fixture
def vs4() -> VarSpec:
    return VarSpec(4, 4)


@pytest.fixture
def vs4_mixed() -> VarSpec:
    return VarSpec(4, 2)


@pytest.fixture
def explicit_toric() -> PoissonStructure:
    return toric_structure(EXPLICIT_GRID)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)

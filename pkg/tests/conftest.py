import random
from fractions import Fraction

import pytest

from srk import Triangulation


def rand_fraction(rng: random.Random, span: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def chain_mesh(breakpoints) -> Triangulation:
    """Consecutive intervals between the given 1D breakpoints."""
    verts = [[Fraction(x)] for x in breakpoints]
    cells = [[i, i + 1] for i in range(len(breakpoints) - 1)]
    return Triangulation(1, verts, cells)


@pytest.fixture
def rng():
    return random.Random(20240811)


@pytest.fixture
def unit_chain():
    return chain_mesh([0, 1, 2])


@pytest.fixture
def two_tets():
    return Triangulation(
        3,
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]],
        [[0, 1, 2, 3], [1, 2, 3, 4]],
    )

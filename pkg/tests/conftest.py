import random
from fractions import Fraction

import pytest

from dualshare.boolcube import SymmetricDistribution


def random_fraction(rng: random.Random, max_num: int = 20, max_den: int = 12) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def random_symmetric_distribution(rng: random.Random, n: int) -> SymmetricDistribution:
    raw = [Fraction(rng.randint(0, 12)) for _ in range(n + 1)]
    if sum(raw) == 0:
        raw[rng.randrange(n + 1)] = Fraction(1)
    total = sum(raw)
    return SymmetricDistribution.of(n, [r / total for r in raw])


@pytest.fixture
def rng():
    return random.Random(20240811)

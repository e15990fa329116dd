import random

import pytest

from schottkylab import build_group
from schottkylab.group import ALLOWED_NEXT, LETTERS


@pytest.fixture(scope="session")
def group():
    return build_group(0.8)


def random_reduced_word(rng: random.Random, length: int) -> str:
    word = [rng.choice(LETTERS)]
    while len(word) < length:
        word.append(rng.choice(ALLOWED_NEXT[word[-1]]))
    return "".join(word)


@pytest.fixture
def rng():
    return random.Random(20260810)

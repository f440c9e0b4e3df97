import numpy as np
import pytest

from utils.angular import NineJ


@pytest.fixture
def worked_symbol():
    return NineJ.of(6, 10, 16, 14, 12, 8, 12, 14, 24)


@pytest.fixture
def worked_value():
    return "13/124062*sqrt(1615/7683753)"


@pytest.fixture
def rng():
    return np.random.default_rng(2021)


def _pick_third(rng, a2, b2):
    """Random doubled c with (a, b, c) a valid triad."""
    return int(rng.choice(np.arange(abs(a2 - b2), a2 + b2 + 1, 2)))


def random_valid_ninej(rng, max_twice):
    """Valid 9j with doubled entries <= max_twice, built triad by triad with rejection on the last entry."""
    while True:
        a, b, d, e = (int(v) for v in rng.integers(0, max_twice + 1, size=4))
        c, f = _pick_third(rng, a, b), _pick_third(rng, d, e)
        g, h = _pick_third(rng, a, d), _pick_third(rng, b, e)
        lo = max(abs(c - f), abs(g - h))
        hi = min(c + f, g + h, max_twice)
        candidates = [i for i in range(lo, hi + 1, 2) if (i - c - f) % 2 == 0 and (i - g - h) % 2 == 0]
        if max(c, f, g, h) > max_twice or not candidates:
            continue
        i = int(rng.choice(candidates))
        return NineJ.from_twice(((a, b, c), (d, e, f), (g, h, i)))


@pytest.fixture
def ninej_sampler(rng):
    def sample(count, max_twice=6):
        return [random_valid_ninej(rng, max_twice) for _ in range(count)]
    return sample

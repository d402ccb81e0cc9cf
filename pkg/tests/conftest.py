import json

import numpy as np
import pytest

from blochpt import load


def make_random_spec(rng, dim=None, real=False):
    """Random Hermitian problem: target level 0, target gap >= 1, ||v||_2 <= 1."""
    if dim is None:
        dim = int(rng.integers(4, 9))
    h0 = np.zeros(dim)
    h0[1:] = 1.0 + np.arange(dim - 1) + rng.uniform(0.0, 0.9, dim - 1)
    m = rng.normal(size=(dim, dim))
    if not real:
        m = m + 1j * rng.normal(size=(dim, dim))
    v = (m + m.conj().T) / 2
    v = v / np.linalg.norm(v, 2)
    return load(h0, v, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(1105)


@pytest.fixture
def two_level():
    return load([0.0, 1.0], [[0.0, 1.0], [1.0, 0.0]], 0)


@pytest.fixture
def two_level_file(tmp_path):
    path = tmp_path / "two_level.json"
    path.write_text(
        json.dumps({"dim": 2, "h0": [0.0, 1.0], "v": [[0.0, 1.0], [1.0, 0.0]], "target": 0})
    )
    return path

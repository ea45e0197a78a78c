import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


@pytest.fixture
def flat4():
    from paraslant.neutral_linalg import NeutralSpace

    return NeutralSpace(np.diag([1.0, -1.0, 1.0, -1.0]))


@pytest.fixture
def swap_phi():
    return np.kron(np.eye(2), np.array([[0.0, 1.0], [1.0, 0.0]]))

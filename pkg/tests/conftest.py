# tests/conftest.py
import numpy as np
import pytest

from modules.kernel_models import hardy_model, standard_model

NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
ONES = np.ones((2, 2), dtype=np.complex128)


@pytest.fixture
def std2():
    return standard_model(2)


@pytest.fixture
def std3():
    return standard_model(3)


@pytest.fixture
def small_hardy():
    """Origin plus two rings of eight points, truncation 8."""
    return hardy_model(8, radii=[0.0, 0.3, 0.6], angles_per_ring=8)


@pytest.fixture
def nilpotent():
    return NILPOTENT.copy()


@pytest.fixture
def ones():
    return ONES.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def ginibre(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

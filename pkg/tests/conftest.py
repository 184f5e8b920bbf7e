import numpy as np
import pytest

from gl3kuz.quadrature import QuadratureSettings
from gl3kuz.transforms import TestFunctionSpec

# not a test class, despite the name pytest sees on import
TestFunctionSpec.__test__ = False


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def tight():
    return QuadratureSettings(abs_tol=1e-12, rel_tol=1e-11)


@pytest.fixture
def standard():
    return QuadratureSettings(abs_tol=1e-10, rel_tol=1e-8)

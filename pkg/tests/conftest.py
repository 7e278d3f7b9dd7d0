import math

import numpy as np
import pytest

import settings
from wcop.moebius import build_canonical_hyperbolic, build_parabolic_cayley, build_rotation
from wcop.norms import DiscGrid, QuadratureRule
from wcop.symbols import RationalSymbol

_KNOBS = ("PARABOLIC_TOLERANCE", "BOUNDED_AWAY_THRESHOLD", "REFINEMENT_STABILITY",
          "BLOCH_GROWTH_ALPHA", "INTERPOLATION_CONSTANT", "SEED", "VERIFY_SANDWICH_SYMBOLS",
          "VERIFY_SANDWICH_MAX_N", "VERIFY_CONTRACTIVE_WEIGHTS", "VERIFY_BLASCHKE_PRODUCTS",
          "VERIFY_BLASCHKE_WEIGHTS")


@pytest.fixture(autouse=True)
def restore_settings():
    saved = {name: getattr(settings, name) for name in _KNOBS}
    yield
    for name, value in saved.items():
        setattr(settings, name, value)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def grid():
    return DiscGrid(12)


@pytest.fixture(scope="session")
def small_grid():
    return DiscGrid(8)


@pytest.fixture(scope="session")
def rule():
    return QuadratureRule()


@pytest.fixture
def weight():
    """u = 2 + z"""
    return RationalSymbol([2, 1])


@pytest.fixture
def hyperbolic():
    return build_canonical_hyperbolic(0.5)


@pytest.fixture
def parabolic():
    return build_parabolic_cayley(1.0)


@pytest.fixture
def half_turn():
    return build_rotation(math.pi)

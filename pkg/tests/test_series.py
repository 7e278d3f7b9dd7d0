import math

import numpy as np
import pytest

from nlab.exception import DomainError
from wcop import series
from wcop.moebius import build_canonical_hyperbolic


def test_truncate_pads_and_cuts():
    np.testing.assert_array_equal(series.truncate([1, 2], 4), [1, 2, 0, 0])
    np.testing.assert_array_equal(series.truncate([1, 2, 3], 2), [1, 2])


def test_multiply_is_truncated_convolution():
    # (1 + z)^2 = 1 + 2z + z^2
    np.testing.assert_allclose(series.multiply([1, 1], [1, 1], 2), [1, 2])


def test_geometric_series():
    np.testing.assert_allclose(series.divide([1], [1, -1], 8), np.ones(8))


def test_division_needs_nonzero_constant_term():
    with pytest.raises(DomainError):
        series.divide([1], [0, 1], 4)


def test_powers_rows():
    rows = series.powers([0, 1], 3, 4, first=[2, 1])
    # (2 + z) z^k
    np.testing.assert_allclose(rows, [[2, 1, 0, 0], [0, 2, 1, 0], [0, 0, 2, 1]])


def test_cauchy_coefficients_of_exp():
    coeffs = series.cauchy_coefficients(np.exp, 10)
    expected = [1 / math.factorial(k) for k in range(10)]
    np.testing.assert_allclose(coeffs, expected, atol=1e-12)


def test_rational_series_of_a_moebius_map():
    phi = build_canonical_hyperbolic(0.5)
    coeffs = series.rational_series([phi.b, phi.a], [phi.d, phi.c], 12)
    np.testing.assert_allclose(coeffs, series.cauchy_coefficients(phi, 12), atol=1e-10)
    z = 0.3 + 0.1j
    assert series.evaluate(series.rational_series([phi.b, phi.a], [phi.d, phi.c], 60), z) \
        == pytest.approx(phi(z), abs=1e-12)

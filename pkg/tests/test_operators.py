import math

import numpy as np
import pytest

from nlab.exception import DomainError, PreconditionError
from wcop.moebius import build_canonical_hyperbolic, build_rotation, random_automorphism
from wcop.operators import (ComposedFunction, Space, Verdict, WeightedCompositionOp, WeightedImage,
                            binomial_identity_residual, check_bounded, check_invertible, check_multiplier,
                            check_contractive_multiplier, composition_lower_bound, composition_norm_bound,
                            inverse_operator, power_apply, power_norm_bound, taylor_truncation,
                            wcomp_apply)
from wcop.series import cauchy_coefficients
from wcop.symbols import BlaschkeProduct, RationalSymbol, log_weight_taylor


@pytest.fixture
def op(weight, hyperbolic):
    return WeightedCompositionOp(weight, hyperbolic)


def test_symbol_must_be_a_selfmap(weight):
    with pytest.raises(DomainError, match="not a selfmap"):
        WeightedCompositionOp(weight, RationalSymbol([0, 1.5]))


def test_apply(op, weight, hyperbolic):
    f = RationalSymbol([1, -1, 0.5])
    z = np.array([0.1 + 0.1j, -0.7])
    np.testing.assert_allclose(op(f, z), weight(z) * f(hyperbolic(z)))
    np.testing.assert_allclose(wcomp_apply(op, f, z), op(f, z))


def test_weighted_image_derivative(op):
    image = WeightedImage(op, RationalSymbol([0, 0, 1]))
    z, h = 0.3 - 0.2j, 1e-6
    assert image.derivative(z) == pytest.approx((image(z + h) - image(z - h)) / (2 * h), rel=1e-7)


def test_composed_function(hyperbolic):
    g = ComposedFunction(RationalSymbol([0, 1]), hyperbolic)
    assert g(0.2) == pytest.approx(hyperbolic(0.2))
    assert g.derivative(0.2) == pytest.approx(hyperbolic.derivative(0.2))


def test_power_apply_matches_repeated_application(op):
    f = RationalSymbol([1, 2, 0, -1])
    z = 0.4 + 0.2j
    nested = WeightedImage(op, WeightedImage(op, WeightedImage(op, f)))
    assert power_apply(op, 3, f, z) == pytest.approx(nested(z), rel=1e-12)
    with pytest.raises(DomainError):
        power_apply(op, -1, f, z)


def test_binomial_identity(rng):
    for _ in range(20):
        u = RationalSymbol([1 + 0.5j * rng.uniform(), 0.5 * rng.uniform()])
        op = WeightedCompositionOp(u, random_automorphism(rng))
        f = RationalSymbol(rng.uniform(-1, 1, 4))
        residual = binomial_identity_residual(op, 0.7 - 0.4j, 10, f, 0.3 + 0.1j)
        assert residual <= 1e-9


def test_binomial_identity_overflow_regime(op):
    with pytest.raises(DomainError, match="binomial overflow regime"):
        binomial_identity_residual(op, 1.0, 31, RationalSymbol([1]), 0.1)


def test_bounded_automorphism_operator(op, grid):
    verdict = check_bounded(op, grid)
    assert verdict.verdict == Verdict.BOUNDED
    assert set(verdict.witnesses) == {"c24", "c25"}
    assert verdict.witnesses["c25"].value == pytest.approx(3)
    assert op.certificates["bounded"] is verdict


def test_bounded_on_the_dirichlet_space(weight, hyperbolic, grid):
    op = WeightedCompositionOp(weight, hyperbolic, Space.DIRICHLET)
    assert check_bounded(op, grid).verdict == Verdict.BOUNDED

    other = WeightedCompositionOp(weight, BlaschkeProduct([0.3, -0.2j]), Space.DIRICHLET)
    assert check_bounded(other, grid).verdict == Verdict.INCONCLUSIVE


def test_multipliers(weight, grid):
    assert check_multiplier(weight, Space.BLOCH, grid).bounded
    assert check_multiplier(weight.reciprocal(), Space.BLOCH, grid).bounded
    assert check_multiplier(weight, Space.DIRICHLET, grid).bounded


def test_log_taylor_polynomial_looks_unbounded(small_grid):
    verdict = check_multiplier(log_weight_taylor(40), Space.BLOCH, small_grid)
    assert verdict.verdict == Verdict.UNBOUNDED_EVIDENCE
    assert len(verdict.history["c26"]) == 4


def test_invertible_operator(op, grid):
    result = check_invertible(op, grid)
    assert result.invertible
    assert result.witnesses["inf_modulus"] == pytest.approx(1)

    inverse = result.inverse
    f = RationalSymbol([0.5, 1, -0.3j])
    for z in (0.1, -0.6 + 0.2j, 0.9j):
        assert wcomp_apply(op, WeightedImage(inverse, f), z) == pytest.approx(f(z), rel=1e-10)
        assert wcomp_apply(inverse, WeightedImage(op, f), z) == pytest.approx(f(z), rel=1e-10)


def test_inverse_operator_symbol(op):
    inverse = inverse_operator(op)
    assert inverse.is_automorphism
    assert inverse.phi.compose(op.phi).is_identity(1e-12)



def test_inverse_of_the_inverse(op, rng):
    twice = inverse_operator(inverse_operator(op))
    f = RationalSymbol([1, -0.5, 0.25j])
    for z in (0.2 + 0.1j, -0.7, 0.5j):
        assert twice.u(z) == pytest.approx(op.u(z), rel=1e-10)
        assert twice.phi(z) == pytest.approx(op.phi(z), abs=1e-12)
        assert wcomp_apply(twice, f, z) == pytest.approx(wcomp_apply(op, f, z), rel=1e-10)

    other = WeightedCompositionOp(RationalSymbol([3, 1j], [1, 0.25]), random_automorphism(rng))
    twice = inverse_operator(inverse_operator(other))
    for z in (0.3, -0.4 - 0.4j):
        assert wcomp_apply(twice, f, z) == pytest.approx(wcomp_apply(other, f, z), rel=1e-9)

def test_vanishing_weight_is_not_invertible(hyperbolic, grid):
    result = check_invertible(WeightedCompositionOp(RationalSymbol([0, 1]), hyperbolic), grid)
    assert not result.invertible
    assert "bounded away" in result.reason


def test_contraction_is_not_invertible(weight, grid):
    result = check_invertible(WeightedCompositionOp(weight, RationalSymbol([0, 0.5])), grid)
    assert not result.invertible
    assert result.reason == "symbol is not an automorphism"


def test_invertibility_needs_a_bounded_operator(grid):
    op = WeightedCompositionOp(log_weight_taylor(40), build_rotation(0.0))
    with pytest.raises(PreconditionError, match="not certified bounded"):
        check_invertible(op, grid)


def test_composition_norm_bound(hyperbolic):
    assert composition_norm_bound(hyperbolic, 0, Space.BLOCH) == pytest.approx(1)
    assert composition_norm_bound(hyperbolic, 4, Space.BLOCH) == pytest.approx(1 + 2 * math.log(2))
    assert composition_norm_bound(hyperbolic, 0, Space.DIRICHLET) == pytest.approx(math.sqrt(2))
    with pytest.raises(DomainError):
        composition_norm_bound(hyperbolic, -1, Space.BLOCH)


@pytest.mark.parametrize("n", [0, 1, 3, 10])
def test_composition_lower_bound_sandwich(hyperbolic, small_grid, rule, n):
    lower = composition_lower_bound(hyperbolic, n, Space.BLOCH, small_grid)
    assert 1 <= lower.value <= composition_norm_bound(hyperbolic, n, Space.BLOCH) + 1e-10

    lower = composition_lower_bound(hyperbolic, n, Space.DIRICHLET, rule=rule)
    assert 1 <= lower.value <= composition_norm_bound(hyperbolic, n, Space.DIRICHLET) + 1e-10


def test_contractive_multiplier_criterion(grid, hyperbolic):
    assert check_contractive_multiplier(RationalSymbol([0, 0.5]), grid).holds
    assert not check_contractive_multiplier(hyperbolic, grid).holds


def test_power_norm_bound_roots_approach_the_radius(op, grid):
    roots = [power_norm_bound(op, n, grid, root=True) for n in (10, 100, 1000)]
    assert roots[0] > roots[1] > roots[2] > 3
    assert roots[2] < 3.1


def test_power_norm_bound_needs_a_nonvanishing_weight(hyperbolic, grid):
    op = WeightedCompositionOp(RationalSymbol([0, 1]), hyperbolic)
    with pytest.raises(PreconditionError):
        power_norm_bound(op, 5, grid)


def test_truncation_of_a_multiplication_operator():
    op = WeightedCompositionOp(RationalSymbol([2, 1]), RationalSymbol.identity())
    matrix = taylor_truncation(op, 5).entries
    np.testing.assert_allclose(np.diag(matrix), 2)
    np.testing.assert_allclose(np.diag(matrix, -1), 1)
    assert np.count_nonzero(matrix) == 9


def test_truncation_columns_are_taylor_coefficients(op, weight, hyperbolic):
    matrix = taylor_truncation(op, 12).entries
    for k in (0, 1, 3):
        expected = cauchy_coefficients(lambda z: weight(z) * hyperbolic(z) ** k, 12)
        np.testing.assert_allclose(matrix[:, k], expected, atol=1e-10)


@pytest.mark.parametrize("size", [0, 513])
def test_truncation_size_range(op, size):
    with pytest.raises(DomainError):
        taylor_truncation(op, size)


def test_truncation_of_a_rotation_is_diagonal():
    theta = 0.7
    op = WeightedCompositionOp(RationalSymbol.constant(1), build_rotation(theta))
    matrix = taylor_truncation(op, 6).entries
    np.testing.assert_allclose(matrix, np.diag(np.exp(1j * theta * np.arange(6))), atol=1e-14)


def test_dirichlet_lower_bound_grows_with_the_iterate(hyperbolic, rule):
    ratios = []
    for n in range(1, 6):
        lower = composition_lower_bound(hyperbolic, n, Space.DIRICHLET, rule=rule)
        assert lower.value <= composition_norm_bound(hyperbolic, n, Space.DIRICHLET)
        ratios.append(lower.value)
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] > math.sqrt(2)


def test_dirichlet_lower_bound_matches_the_log_function(hyperbolic, rule):
    lower = composition_lower_bound(hyperbolic, 3, Space.DIRICHLET, rule=rule)
    assert lower.test_function.startswith("f_a")
    a = abs(complex(hyperbolic.compose(hyperbolic).compose(hyperbolic)(0j)))
    L = -math.log(1 - a * a)
    assert lower.value == pytest.approx(math.sqrt(((1 + L) ** 2 + L) / (1 + L)), rel=1e-6)


def test_dirichlet_lower_bound_for_a_long_orbit(rule):
    phi = build_canonical_hyperbolic(0.3)
    for n in (20, 50):
        lower = composition_lower_bound(phi, n, Space.DIRICHLET, rule=rule)
        assert 1 <= lower.value <= composition_norm_bound(phi, n, Space.DIRICHLET)

import numpy as np
import pytest

from nlab.exception import DomainError
from wcop.moebius import iterate, random_automorphism
from wcop.norms import dirichlet_norm
from wcop.symbols import (BlaschkeProduct, LogWeightFunction, RationalSymbol, blaschke_K, cocycle_eval,
                          cocycle_log_modulus, cocycle_sup_root, compose_with_moebius, inf_modulus,
                          cocycle_orbit, log_weight_taylor, random_blaschke, symbol_eval)


def test_pole_on_the_closed_disc_is_rejected():
    with pytest.raises(DomainError, match="closed disc"):
        RationalSymbol([1], [1, -1])
    with pytest.raises(DomainError, match="closed disc"):
        RationalSymbol([1], [0.5, 1])


def test_denominator_is_normalized():
    u = RationalSymbol([2], [2, 1])
    assert u.denominator.coef[0] == 1
    assert u(0.5) == pytest.approx(2 / 2.5)


def test_evaluate_and_derivative():
    u = RationalSymbol([1, 2, 3], [1, 0.25])
    z, h = 0.2 - 0.5j, 1e-6
    numeric = (u(z + h) - u(z - h)) / (2 * h)
    assert u.derivative(z) == pytest.approx(numeric, rel=1e-8)
    assert u.evaluate(z, order=1) == u.derivative(z)


def test_higher_derivative_order_is_rejected(weight):
    with pytest.raises(DomainError):
        weight.evaluate(0.1, order=2)


def test_symbol_eval_outside_the_disc(weight):
    with pytest.raises(DomainError):
        symbol_eval(weight, 1.5)
    assert symbol_eval(weight, 1.0) == pytest.approx(3)


def test_reciprocal(weight):
    inverse = weight.reciprocal()
    z = np.array([0.3, -0.9j, 1.0])
    np.testing.assert_allclose(inverse(z), 1 / (2 + z))


def test_reciprocal_of_a_vanishing_weight():
    with pytest.raises(DomainError, match="reciprocal has a pole"):
        RationalSymbol.identity().reciprocal()


def test_arithmetic(weight):
    z = 0.4 + 0.3j
    assert (weight + 1)(z) == pytest.approx(3 + z)
    assert (1 + weight)(z) == pytest.approx(3 + z)
    assert (weight - weight)(z) == pytest.approx(0)
    assert (weight * weight)(z) == pytest.approx((2 + z) ** 2)
    assert (3 * weight)(z) == pytest.approx(3 * (2 + z))
    assert (-weight)(z) == pytest.approx(-(2 + z))


def test_constants():
    assert RationalSymbol.constant(2j).is_constant
    assert RationalSymbol.constant(2j).constant_value == 2j
    assert not RationalSymbol.identity().is_constant


def test_dict_round_trip():
    u = RationalSymbol([1, 1j], [1, 0.5])
    v = RationalSymbol.from_dict(u.to_dict())
    np.testing.assert_allclose(v.numerator.coef, u.numerator.coef)
    np.testing.assert_allclose(v.denominator.coef, u.denominator.coef)


def test_compose_with_moebius(rng):
    phi = random_automorphism(rng)
    u = RationalSymbol([1, 0.5, 0.25], [1, 0.2])
    composed = compose_with_moebius(u, phi)
    z = np.array([0.1, 0.5j, -0.8 + 0.1j])
    np.testing.assert_allclose(composed(z), u(phi(z)), atol=1e-12)


def test_blaschke_product(rng):
    B = random_blaschke(rng, 4)
    assert B.degree == 4
    zeta = np.exp(2j * np.pi * np.arange(64) / 64)
    np.testing.assert_allclose(np.abs(B(zeta)), 1, atol=1e-12)
    np.testing.assert_allclose(B(B.zeros), 0, atol=1e-12)

    z, h = 0.3 + 0.2j, 1e-6
    assert B.derivative(z) == pytest.approx((B(z + h) - B(z - h)) / (2 * h), rel=1e-7)
    assert B.to_rational()(z) == pytest.approx(B(z))


def test_blaschke_rejects_bad_input():
    with pytest.raises(DomainError):
        BlaschkeProduct([1.0])
    with pytest.raises(DomainError):
        BlaschkeProduct([0.5], unimodular_factor=2)


def test_blaschke_constant():
    assert blaschke_K(BlaschkeProduct([0.5])) == pytest.approx(3)
    assert blaschke_K(BlaschkeProduct([0, 0.5j])) == pytest.approx(4)
    with pytest.raises(DomainError):
        blaschke_K(BlaschkeProduct([]))


def test_log_weight_function():
    f = LogWeightFunction(0.5)
    assert f(0) == pytest.approx(1)
    z, h = 0.2 + 0.1j, 1e-6
    assert f.derivative(z) == pytest.approx((f(z + h) - f(z - h)) / (2 * h), rel=1e-8)
    assert f.bloch_seminorm == pytest.approx(1 / (1 + np.sqrt(0.75)))


@pytest.mark.parametrize("a", [0.1, 0.5, 0.75, 0.9, 0.999])
def test_log_weight_seminorm_stays_below_two(a):
    f = LogWeightFunction(a)
    assert f.bloch_seminorm < 2
    if a <= 0.75:
        assert f.bloch_norm <= 2


def test_log_weight_parameter_in_the_disc():
    with pytest.raises(DomainError):
        LogWeightFunction(1.0)


def test_log_weight_taylor():
    u = log_weight_taylor(5)
    np.testing.assert_allclose(u.numerator.coef, [1, 1, 1 / 2, 1 / 3, 1 / 4, 1 / 5])


def test_cocycle(hyperbolic, weight):
    z = np.array([0.2, -0.4j])
    np.testing.assert_allclose(cocycle_eval(weight, hyperbolic, 0, z), 1)
    np.testing.assert_allclose(cocycle_eval(weight, hyperbolic, 2, z), weight(z) * weight(hyperbolic(z)))
    np.testing.assert_allclose(cocycle_log_modulus(weight, hyperbolic, 5, z),
                               np.log(np.abs(cocycle_eval(weight, hyperbolic, 5, z))))


def test_cocycle_of_a_constant(hyperbolic, small_grid):
    assert cocycle_sup_root(RationalSymbol.constant(-3), hyperbolic, 17, small_grid) == 3


def test_cocycle_order_must_be_positive(hyperbolic, weight, small_grid):
    with pytest.raises(DomainError):
        cocycle_sup_root(weight, hyperbolic, 0, small_grid)
    with pytest.raises(DomainError):
        cocycle_eval(weight, hyperbolic, -1, 0.1)


def test_inf_modulus(weight, small_grid):
    assert inf_modulus(weight, small_grid) == pytest.approx(1)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (5, 4), (0, 6)])
def test_cocycle_is_multiplicative(rng, m, n):
    phi = random_automorphism(rng, max_modulus=0.6)
    u = RationalSymbol([1, 0.5j, -0.25], [1, 0.3])
    z = np.array([0.1 + 0.3j, -0.5, 0.7j])
    _, w = cocycle_orbit(u, phi, m, z)
    np.testing.assert_allclose(cocycle_eval(u, phi, m + n, z),
                               cocycle_eval(u, phi, m, z) * cocycle_eval(u, phi, n, w), rtol=1e-10)
    np.testing.assert_allclose(w, iterate(phi, m)(z), atol=1e-10)


def test_compose_with_iterates(rng):
    phi = random_automorphism(rng, max_modulus=0.6)
    u = RationalSymbol([2, 1, 0.5], [1, -0.4j])
    z = np.array([0.2 - 0.2j, 0.6, -0.9j])
    w = z
    for k in range(1, 6):
        w = phi(w)
        np.testing.assert_allclose(compose_with_moebius(u, iterate(phi, k))(z), u(w), rtol=1e-9)


@pytest.mark.parametrize("a", [0.2, 0.5j, -0.7])
def test_log_weight_dirichlet_norm(rule, a):
    f = LogWeightFunction(a)
    assert f.dirichlet_norm == pytest.approx(dirichlet_norm(f, rule).value, rel=1e-8)

import logging
import math
from functools import cached_property
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial

import settings
from nlab.conf import parse_complex
from nlab.exception import DomainError, InternalError
from wcop.moebius import MoebiusTransform

logger = logging.getLogger(__name__)

_BOUNDARY = np.exp(2j * np.pi * np.arange(1024) / 1024)


def _as_polynomial(coeffs) -> Polynomial:
    if isinstance(coeffs, Polynomial):
        return Polynomial(np.asarray(coeffs.coef, dtype=complex)).trim()
    if np.isscalar(coeffs):
        coeffs = [coeffs]
    values = [parse_complex(c) for c in coeffs]
    if not values:
        raise DomainError("empty coefficient list")
    return Polynomial(np.asarray(values, dtype=complex)).trim()


def _coeff_pairs(poly: Polynomial):
    return [[float(c.real), float(c.imag)] for c in np.asarray(poly.coef, dtype=complex)]


class RationalSymbol:
    """
    Analytic weight u = numerator / denominator, pole-free on the closed disc.

    Coefficients are ascending; the pair is normalized so that denominator(0) = 1.
    """

    def __init__(self, numerator, denominator=(1,)):
        numerator = _as_polynomial(numerator)
        denominator = _as_polynomial(denominator)

        if not np.any(denominator.coef):
            raise DomainError("zero denominator")

        poles = denominator.roots()
        if len(poles) and np.min(np.abs(poles)) <= 1 + settings.POLE_MARGIN:
            raise DomainError("denominator vanishes on the closed disc",
                              witness={"poles": [[p.real, p.imag] for p in poles]})

        scale = denominator.coef[0]
        self.numerator = numerator / scale
        self.denominator = denominator / scale

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def identity(cls):
        return cls([0, 1])

    @classmethod
    def from_polynomial(cls, coeffs):
        return cls(coeffs)

    @classmethod
    def from_moebius(cls, phi: MoebiusTransform):
        return cls([phi.b, phi.a], [phi.d, phi.c])

    @classmethod
    def from_dict(cls, data):
        return cls(data["numerator"], data.get("denominator", [1]))

    def to_dict(self):
        return {
            "numerator": _coeff_pairs(self.numerator),
            "denominator": _coeff_pairs(self.denominator),
        }

    @property
    def degree(self):
        return max(self.numerator.degree(), self.denominator.degree())

    @property
    def is_constant(self):
        return self.numerator.degree() == 0 and self.denominator.degree() == 0

    @property
    def constant_value(self):
        return complex(self.numerator.coef[0] / self.denominator.coef[0])

    @property
    def poles(self):
        return self.denominator.roots()

    @property
    def zeros(self):
        if not np.any(self.numerator.coef):
            return np.array([], dtype=complex)
        return self.numerator.roots()

    @cached_property
    def boundary_sup(self):
        """max |u| over 1024 equispaced boundary points."""
        return float(np.max(np.abs(self.evaluate(_BOUNDARY))))

    def evaluate(self, z, order=0):
        z = np.asarray(z, dtype=complex)
        p, q = self.numerator(z), self.denominator(z)
        if order == 0:
            return p / q
        if order == 1:
            return (self.numerator.deriv()(z) * q - p * self.denominator.deriv()(z)) / q ** 2
        raise DomainError("derivative order must be 0 or 1", witness={"order": order})

    __call__ = evaluate

    def derivative(self, z):
        return self.evaluate(z, order=1)

    def reciprocal(self) -> "RationalSymbol":
        try:
            return RationalSymbol(self.denominator, self.numerator)
        except DomainError as e:
            raise DomainError("reciprocal has a pole on the closed disc",
                              witness=e.witness) from e

    def _coerce(self, other):
        if isinstance(other, RationalSymbol):
            return other
        return RationalSymbol.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        return RationalSymbol(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalSymbol(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalSymbol(self.numerator * other.numerator,
                              self.denominator * other.denominator)

    __rmul__ = __mul__

    def __repr__(self):
        return "RationalSymbol(%s / %s)" % (np.round(self.numerator.coef, 12).tolist(),
                                            np.round(self.denominator.coef, 12).tolist())


def symbol_eval(u: RationalSymbol, z, order=0):
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1 + 1e-12):
        raise DomainError("point outside the closed disc")
    return u.evaluate(z, order=order)


def compose_with_moebius(u: RationalSymbol, phi: MoebiusTransform) -> RationalSymbol:
    """u o phi as a single rational function."""
    n = u.degree
    top = Polynomial([phi.b, phi.a])
    bottom = Polynomial([phi.d, phi.c])

    def homogenize(poly):
        total = Polynomial([0j])
        for k, coef in enumerate(poly.coef):
            total = total + coef * top ** k * bottom ** (n - k)
        return total

    try:
        return RationalSymbol(homogenize(u.numerator), homogenize(u.denominator))
    except DomainError as e:
        raise InternalError("composition created a pole on the closed disc",
                            witness=e.witness) from e


class BlaschkeProduct:
    """lambda * prod (z - a_j) / (1 - conj(a_j) z)"""

    def __init__(self, zeros: Sequence[complex], unimodular_factor: complex = 1):
        self.zeros = np.asarray([parse_complex(a) for a in zeros], dtype=complex)
        self.unimodular_factor = parse_complex(unimodular_factor)

        if len(self.zeros) and np.max(np.abs(self.zeros)) >= 1:
            raise DomainError("Blaschke zeros must lie in the open disc")
        if abs(abs(self.unimodular_factor) - 1) > 1e-12:
            raise DomainError("Blaschke factor must be unimodular")

    @property
    def degree(self):
        return len(self.zeros)

    def _factors(self, z):
        a = self.zeros[:, None]
        return (z[None, :] - a) / (1 - np.conj(a) * z[None, :])

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        if not self.degree:
            return np.full_like(z, self.unimodular_factor)
        values = self.unimodular_factor * np.prod(self._factors(flat), axis=0)
        return values.reshape(z.shape)

    __call__ = evaluate

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        if not self.degree:
            return np.zeros_like(z)
        factors = self._factors(flat)
        a = self.zeros[:, None]
        slopes = (1 - np.abs(a) ** 2) / (1 - np.conj(a) * flat[None, :]) ** 2

        total = np.zeros_like(flat)
        for j in range(self.degree):
            others = np.prod(np.delete(factors, j, axis=0), axis=0)
            total += slopes[j] * others
        return (self.unimodular_factor * total).reshape(z.shape)

    def to_rational(self) -> RationalSymbol:
        numerator = Polynomial([self.unimodular_factor])
        denominator = Polynomial([1])
        for a in self.zeros:
            numerator = numerator * Polynomial([-a, 1])
            denominator = denominator * Polynomial([1, -np.conj(a)])
        return RationalSymbol(numerator, denominator)

    def to_dict(self):
        return {
            "zeros": [[a.real, a.imag] for a in self.zeros],
            "unimodular_factor": [self.unimodular_factor.real, self.unimodular_factor.imag],
        }


def blaschke_K(B: BlaschkeProduct) -> float:
    if not B.degree:
        raise DomainError("Blaschke product without zeros")
    r = np.abs(B.zeros)
    return float(np.sum((1 + r) / (1 - r)))


def random_blaschke(rng: np.random.Generator, degree: int, max_modulus=0.9) -> BlaschkeProduct:
    radii = max_modulus * np.sqrt(rng.uniform(size=degree))
    zeros = radii * np.exp(1j * rng.uniform(-np.pi, np.pi, size=degree))
    return BlaschkeProduct(zeros, np.exp(1j * rng.uniform(-np.pi, np.pi)))


class LogWeightFunction:
    """f_a(z) = log(e / (1 - conj(a) z))"""

    def __init__(self, a: complex):
        self.a = parse_complex(a)
        if abs(self.a) >= 1:
            raise DomainError("parameter must lie in the open disc")

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return 1 - np.log(1 - np.conj(self.a) * z)

    __call__ = evaluate

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return np.conj(self.a) / (1 - np.conj(self.a) * z)

    @property
    def bloch_seminorm(self):
        """sup (1 - |z|^2) |f_a'(z)|, attained on the ray through a; always below 2."""
        r = abs(self.a)
        return 2 * r / (1 + math.sqrt(1 - r * r))

    @property
    def bloch_norm(self):
        return 1 + self.bloch_seminorm

    @property
    def dirichlet_norm(self):
        """sqrt(|f_a(0)|^2 + sum |a|^(2k) / k) = sqrt(1 + log(1 / (1 - |a|^2)))."""
        return math.sqrt(1 - math.log1p(-abs(self.a) ** 2))


def log_weight_taylor(degree=40) -> RationalSymbol:
    """Taylor polynomial of log(e / (1 - z)) = 1 + sum z^k / k."""
    k = np.arange(1, degree + 1)
    return RationalSymbol(np.concatenate([[1.0], 1.0 / k]))


def cocycle_orbit(u, phi, n, z):
    """(u_(n)(z), phi_n(z)) by pushing z through phi."""
    z = np.asarray(z, dtype=complex)
    acc = np.ones_like(z)
    w = z
    for _ in range(n):
        acc = acc * u(w)
        w = phi(w)
    return acc, w


def cocycle_eval(u, phi, n, z):
    if n < 0:
        raise DomainError("cocycle order must be nonnegative")
    return cocycle_orbit(u, phi, n, z)[0]


def cocycle_log_modulus(u, phi, n, z):
    """log |u_(n)(z)| accumulated term by term."""
    z = np.asarray(z, dtype=complex)
    total = np.zeros(z.shape)
    w = z
    with np.errstate(divide="ignore"):
        for _ in range(n):
            total += np.log(np.abs(u(w)))
            w = phi(w)
    return total


def cocycle_sup(u, phi, n, grid) -> float:
    """Grid maximum of |u_(n)|."""
    if n < 1:
        raise DomainError("cocycle order must be positive")
    if getattr(u, "is_constant", False):
        return abs(u.constant_value) ** n
    return float(np.exp(np.max(cocycle_log_modulus(u, phi, n, grid.points))))


def cocycle_sup_root(u, phi, n, grid) -> float:
    """Grid maximum of |u_(n)|^(1/n), without forming u_(n) itself."""
    if n < 1:
        raise DomainError("cocycle order must be positive")
    if getattr(u, "is_constant", False):
        return abs(u.constant_value)
    return float(np.exp(np.max(cocycle_log_modulus(u, phi, n, grid.points)) / n))


def inf_modulus(u, grid) -> float:
    return float(np.min(np.abs(u(grid.points))))

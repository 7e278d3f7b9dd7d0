import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

import settings
from nlab.exception import DomainError

logger = logging.getLogger(__name__)

_BOUNDARY_PROBE = np.exp(2j * np.pi * np.arange(16) / 16)


@dataclass(frozen=True)
class MoebiusTransform:
    """
    z -> (a*z + b) / (c*z + d), coefficients normalized to a*d - b*c = 1.

    `automorphism` is set by the builders once the map is known to carry
    the disc onto itself.
    """
    a: complex
    b: complex
    c: complex
    d: complex
    automorphism: bool = False

    @classmethod
    def from_coefficients(cls, a, b, c, d, automorphism=False):
        det = complex(a) * complex(d) - complex(b) * complex(c)
        if det == 0:
            raise DomainError("degenerate Moebius transform: a*d - b*c = 0")
        s = np.sqrt(det)
        return cls(complex(a / s), complex(b / s), complex(c / s), complex(d / s),
                   automorphism=automorphism)

    @classmethod
    def from_matrix(cls, m, automorphism=False):
        return cls.from_coefficients(m[0, 0], m[0, 1], m[1, 0], m[1, 1],
                                     automorphism=automorphism)

    @classmethod
    def identity(cls):
        return cls(1 + 0j, 0j, 0j, 1 + 0j, automorphism=True)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def determinant(self):
        return self.a * self.d - self.b * self.c

    @property
    def discriminant(self):
        """Discriminant of c*z^2 + (d - a)*z - b, equal to trace^2 - 4."""
        return (self.d - self.a) ** 2 + 4 * self.b * self.c

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.a * z + self.b) / (self.c * z + self.d)

    __call__ = evaluate

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return self.determinant / (self.c * z + self.d) ** 2

    def compose(self, other: "MoebiusTransform") -> "MoebiusTransform":
        """self o other"""
        return MoebiusTransform.from_matrix(
            self.matrix @ other.matrix,
            automorphism=self.automorphism and other.automorphism,
        )

    def inverse(self) -> "MoebiusTransform":
        return MoebiusTransform(self.d, -self.b, -self.c, self.a,
                                automorphism=self.automorphism)

    def is_identity(self, tol=1e-12):
        return abs(self.b) <= tol and abs(self.c) <= tol \
            and abs(self.a - self.d) <= tol

    def to_dict(self):
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "c": [self.c.real, self.c.imag],
            "d": [self.d.real, self.d.imag],
        }


class AutomorphismKind(Enum):
    IDENTITY = "Identity"
    ELLIPTIC = "Elliptic"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"


@dataclass(frozen=True)
class FixedPoint:
    location: complex
    derivative: complex


@dataclass(frozen=True)
class AutomorphismClass:
    kind: AutomorphismKind
    fixed_points: Tuple[FixedPoint, ...] = ()
    attractive: Optional[complex] = None
    repulsive: Optional[complex] = None
    multiplier: Optional[float] = None
    discriminant: complex = 0j
    unstable: bool = False

    @property
    def tag(self):
        return self.kind.value

    @property
    def denjoy_wolff_point(self):
        if self.kind == AutomorphismKind.HYPERBOLIC:
            return self.attractive
        if self.fixed_points:
            return self.fixed_points[0].location
        return None

    def to_dict(self):
        data = {
            "tag": self.tag,
            "fixed_points": [
                {"location": [p.location.real, p.location.imag],
                 "derivative": [p.derivative.real, p.derivative.imag]}
                for p in self.fixed_points
            ],
            "unstable": self.unstable,
        }
        if self.kind == AutomorphismKind.HYPERBOLIC:
            data.update({
                "attractive": [self.attractive.real, self.attractive.imag],
                "repulsive": [self.repulsive.real, self.repulsive.imag],
                "multiplier": self.multiplier,
            })
        return data


def is_disc_automorphism(phi: MoebiusTransform, tol=settings.BOUNDARY_SNAP_TOLERANCE):
    if abs(phi.d) == 0 or abs(phi.b / phi.d) >= 1:
        return False
    if abs(phi.c) > 0 and abs(phi.d / phi.c) <= 1 + tol:
        return False
    return bool(np.all(np.abs(np.abs(phi(_BOUNDARY_PROBE)) - 1) < tol))


def checked_automorphism(phi: MoebiusTransform) -> MoebiusTransform:
    if phi.automorphism:
        return phi
    if not is_disc_automorphism(phi):
        raise DomainError("not a disc automorphism", witness=phi.to_dict())
    return MoebiusTransform(phi.a, phi.b, phi.c, phi.d, automorphism=True)


def build_disc_automorphism(theta: float, p: complex) -> MoebiusTransform:
    """e^{i theta} (z - p) / (1 - conj(p) z)"""
    p = complex(p)
    if abs(p) >= 1:
        raise DomainError("not a disc automorphism", witness={"p": [p.real, p.imag]})
    rot = np.exp(1j * theta)
    return MoebiusTransform.from_coefficients(rot, -rot * p, -p.conjugate(), 1,
                                              automorphism=True)


def build_rotation(theta: float) -> MoebiusTransform:
    return build_disc_automorphism(theta, 0)


def build_canonical_hyperbolic(mu: float) -> MoebiusTransform:
    """((1 + mu) z + (1 - mu)) / ((1 - mu) z + (1 + mu)): attracting 1, repelling -1."""
    if not 0 < mu < 1:
        raise DomainError("multiplier must lie in (0, 1)", witness={"mu": mu})
    return MoebiusTransform.from_coefficients(1 + mu, 1 - mu, 1 - mu, 1 + mu,
                                              automorphism=True)


def build_parabolic_cayley(t: float = 1.0) -> MoebiusTransform:
    """Translation w -> w + t of the upper half-plane seen through the Cayley map; fixes 1."""
    if t == 0:
        raise DomainError("translation length must be nonzero")
    return MoebiusTransform.from_coefficients(2j - t, t, -t, 2j + t, automorphism=True)


def random_automorphism(rng: np.random.Generator, max_modulus=0.9) -> MoebiusTransform:
    theta = rng.uniform(-np.pi, np.pi)
    p = max_modulus * np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(-np.pi, np.pi))
    return build_disc_automorphism(theta, p)


def _snap(z, tol=settings.BOUNDARY_SNAP_TOLERANCE):
    r = abs(z)
    if abs(r - 1) < tol:
        return z / r
    return z


def fixed_points(phi: MoebiusTransform):
    """Finite solutions of c*z^2 + (d - a)*z - b = 0, larger root first."""
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(c) <= 1e-14 * scale:
        if abs(d - a) <= 1e-14 * scale:
            return ()
        return (b / (d - a),)

    beta = d - a
    sq = np.sqrt(complex(phi.discriminant))
    plus, minus = beta + sq, beta - sq
    q = -0.5 * (plus if abs(plus) >= abs(minus) else minus)
    if q == 0:
        return ((a - d) / (2 * c),)
    return (q / c, -b / q)


def _roundoff(phi: MoebiusTransform):
    scale = max(abs(phi.a), abs(phi.b), abs(phi.c), abs(phi.d))
    return 64 * np.finfo(float).eps * scale ** 2


def _parabolic_point(phi: MoebiusTransform):
    """The double root (a - d) / 2c when it is a fixed point on the circle, else None."""
    if abs(phi.c) == 0:
        return None
    z = (phi.a - phi.d) / (2 * phi.c)
    if abs(abs(z) - 1) > settings.BOUNDARY_SNAP_TOLERANCE:
        return None
    z = complex(_snap(z))
    if abs(complex(phi(z)) - z) > settings.BOUNDARY_SNAP_TOLERANCE:
        return None
    return z


def _single_point(kind, phi, z, disc, unstable):
    z = complex(z)
    return AutomorphismClass(
        kind,
        fixed_points=(FixedPoint(z, complex(phi.derivative(z))),),
        discriminant=disc, unstable=unstable,
    )


def _hyperbolic(phi, points, disc, unstable):
    snapped = [complex(_snap(z)) for z in points]
    derivs = [complex(phi.derivative(z)) for z in snapped]
    if abs(derivs[0]) < abs(derivs[1]):
        (a, da), (b, db) = (snapped[0], derivs[0]), (snapped[1], derivs[1])
    else:
        (a, da), (b, db) = (snapped[1], derivs[1]), (snapped[0], derivs[0])
    return AutomorphismClass(
        AutomorphismKind.HYPERBOLIC,
        fixed_points=(FixedPoint(a, da), FixedPoint(b, db)),
        attractive=a, repulsive=b, multiplier=float(abs(da)),
        discriminant=disc, unstable=unstable,
    )


def _classify_by_location(phi: MoebiusTransform, disc):
    """
    Kind read off the fixed points themselves when the discriminant is too
    small to carry its sign.

    An elliptic map fixes z and 1/conj(z), so the outer point sits at least
    half their separation away from the circle; hyperbolic fixed points both
    lie on it.
    """
    points = fixed_points(phi)
    if not points:
        return AutomorphismClass(AutomorphismKind.IDENTITY, discriminant=disc, unstable=True)

    if len(points) == 1:
        # c == 0: an automorphism fixing infinity is a rotation about 0
        z = points[0]
        if abs(z) >= 1 - settings.BOUNDARY_SNAP_TOLERANCE:
            raise DomainError("automorphism fixing infinity without an interior fixed point",
                              witness={"fixed_points": [str(z)]})
        return _single_point(AutomorphismKind.ELLIPTIC, phi, z, disc, True)

    z1, z2 = points
    separation = abs(z1 - z2)
    if separation <= settings.BOUNDARY_SNAP_TOLERANCE:
        mean = (z1 + z2) / 2
        return _single_point(AutomorphismKind.PARABOLIC, phi, mean / abs(mean), disc, True)

    offset = max(abs(abs(z1) - 1), abs(abs(z2) - 1))
    if offset > separation / 4:
        inner = z1 if abs(z1) < abs(z2) else z2
        return _single_point(AutomorphismKind.ELLIPTIC, phi, inner, disc, True)
    return _hyperbolic(phi, [z / abs(z) for z in points], disc, True)


def classify(phi: MoebiusTransform, tolerance: Optional[float] = None) -> AutomorphismClass:
    phi = checked_automorphism(phi)
    tolerance = settings.PARABOLIC_TOLERANCE if tolerance is None else tolerance

    if phi.is_identity():
        return AutomorphismClass(AutomorphismKind.IDENTITY)

    disc = complex(phi.discriminant)
    exact = abs(disc) <= _roundoff(phi)
    unstable = not exact and abs(disc) < 100 * tolerance

    if abs(disc) < tolerance:
        z = _parabolic_point(phi)
        if z is None:
            logger.warning("classification unstable: discriminant %.3e below the parabolic "
                           "threshold %.1e without a boundary double fixed point",
                           abs(disc), tolerance)
            return _classify_by_location(phi, disc)
        if unstable:
            logger.warning("classification unstable: discriminant %.3e near the parabolic "
                           "threshold %.1e", abs(disc), tolerance)
        return _single_point(AutomorphismKind.PARABOLIC, phi, z, disc, unstable)

    if unstable:
        logger.warning("classification unstable: discriminant %.3e near the parabolic "
                       "threshold %.1e", abs(disc), tolerance)

    points = fixed_points(phi)

    if disc.real < 0:
        inside = [z for z in points if abs(z) < 1 - settings.BOUNDARY_SNAP_TOLERANCE]
        if len(inside) != 1:
            raise DomainError("elliptic map without a unique interior fixed point",
                              witness={"fixed_points": [str(z) for z in points]})
        return _single_point(AutomorphismKind.ELLIPTIC, phi, inside[0], disc, unstable)

    if len(points) != 2:
        raise DomainError("hyperbolic map must have two boundary fixed points")
    return _hyperbolic(phi, points, disc, unstable)


def _normalized(m):
    return m / np.sqrt(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def iterate(phi: MoebiusTransform, n: int) -> MoebiusTransform:
    """phi_n by square-and-multiply on the coefficient matrix."""
    if n < 0:
        raise DomainError("iterate count must be nonnegative", witness={"n": n})

    result = np.eye(2, dtype=complex)
    base = phi.matrix
    while n:
        if n & 1:
            result = _normalized(result @ base)
        n >>= 1
        if n:
            base = _normalized(base @ base)

    return MoebiusTransform(*result.ravel(), automorphism=phi.automorphism)


def hyperbolic_distance(z, w):
    """Pseudo-hyperbolic based distance; vectorized over numpy arrays."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    rz, rw = np.abs(z), np.abs(w)
    if np.any(rz >= 1) or np.any(rw >= 1):
        raise DomainError("hyperbolic distance needs points of the open disc")

    den = np.abs(1 - np.conj(z) * w)
    s = np.abs(z - w) / den
    # 1 - s^2 without cancellation near the boundary
    one_minus_s2 = (1 - rz) * (1 + rz) * (1 - rw) * (1 + rw) / den ** 2
    return np.log1p(s) - 0.5 * np.log(one_minus_s2)


def orbit_distance(phi: MoebiusTransform, n: int) -> float:
    """rho(phi_n(0), 0) read off the unit-determinant iterate."""
    phi = checked_automorphism(phi)
    phi_n = iterate(phi, n)
    # an automorphism with unit determinant has |d|^2 - |b|^2 = 1
    return float(np.log(abs(phi_n.b) + abs(phi_n.d)))


def dw_limit_sequence(phi: MoebiusTransform, count: int):
    """(1 - |phi_n(0)|)^(1/n) for n = 1..count."""
    kind = classify(phi).kind
    if kind not in (AutomorphismKind.PARABOLIC, AutomorphismKind.HYPERBOLIC):
        raise DomainError("limit requires a boundary Denjoy-Wolff point",
                          witness={"tag": kind.value})
    if count < 1:
        raise DomainError("sequence length must be positive")

    step = phi.matrix
    acc = np.eye(2, dtype=complex)
    log_scale = 0.0
    terms = []
    for n in range(1, count + 1):
        acc = acc @ step
        scale = np.max(np.abs(acc))
        acc /= scale
        log_scale += np.log(scale)

        w = abs(acc[0, 1] / acc[1, 1])
        # 1 - |phi_n(0)|^2 = 1 / |d_n|^2 for the unit-determinant iterate
        log_gap = -2.0 * (log_scale + np.log(abs(acc[1, 1]))) - np.log1p(w)
        terms.append(float(np.exp(log_gap / n)))

    return terms

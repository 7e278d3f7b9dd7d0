import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, List

import numpy as np

import settings
from nlab.exception import DomainError, NumericalError

logger = logging.getLogger(__name__)


class DiscGrid:
    """
    Sampling of the disc refined toward the boundary.

    Rings sit at radii 1 - 2^(-k*beta), k = 0..R-1, with at least
    ceil(2*pi / (1 - r)) equispaced angles each; the optional boundary layer
    samples |z| = 1 and always contains z = 1. Refinement doubles R and the
    angular factor, so a refined grid contains every point of the coarser one.
    """

    def __init__(self, radial_levels=None, beta=None, boundary_layer=None, angular_factor=None):
        self.radial_levels = settings.GRID_RADIAL_LEVELS if radial_levels is None else int(radial_levels)
        self.beta = settings.GRID_BETA if beta is None else float(beta)
        self.boundary_layer = settings.GRID_BOUNDARY_LAYER if boundary_layer is None \
            else bool(boundary_layer)
        self.angular_factor = settings.GRID_ANGULAR_FACTOR if angular_factor is None \
            else int(angular_factor)

        if self.radial_levels < 1:
            raise DomainError("grid needs at least one radial level")
        if self.beta <= 0:
            raise DomainError("refinement exponent must be positive")
        if self.angular_factor < 1:
            raise DomainError("angular factor must be positive")

        self.radii = 1.0 - 2.0 ** (-np.arange(self.radial_levels) * self.beta)
        self.angular_counts = [self._angular_count(r) for r in self.radii]

    def _angular_count(self, r):
        if r == 0:
            return 1
        return self.angular_factor * max(math.ceil(2 * math.pi / (1 - r)), settings.GRID_MIN_ANGULAR)

    @property
    def boundary_count(self):
        resolved = 2 * math.pi / (1 - self.radii[-1])
        return self.angular_factor * 2 ** max(4, math.ceil(math.log2(resolved)))

    @staticmethod
    def _ring(r, count):
        return r * np.exp(2j * np.pi * np.arange(count) / count)

    @cached_property
    def interior_points(self):
        return np.concatenate([self._ring(r, n) for r, n in zip(self.radii, self.angular_counts)])

    @cached_property
    def boundary_points(self):
        if not self.boundary_layer:
            return np.array([], dtype=complex)
        return self._ring(1.0, self.boundary_count)

    @cached_property
    def points(self):
        return np.concatenate([self.interior_points, self.boundary_points])

    @property
    def max_radius(self):
        return 1.0 if self.boundary_layer else float(self.radii[-1])

    @property
    def descriptor(self):
        return {
            "radial_levels": self.radial_levels,
            "beta": self.beta,
            "boundary_layer": self.boundary_layer,
            "angular_factor": self.angular_factor,
            "points": int(len(self.points)),
        }

    def refine(self) -> "DiscGrid":
        return DiscGrid(2 * self.radial_levels, self.beta, self.boundary_layer, 2 * self.angular_factor)

    def coarsen(self) -> "DiscGrid":
        return DiscGrid(max(1, self.radial_levels // 2), self.beta, self.boundary_layer,
                        max(1, self.angular_factor // 2))

    def ladder(self, depth=3) -> List["DiscGrid"]:
        """This grid and up to `depth` coarsenings, coarsest first."""
        grids = [self]
        while len(grids) <= depth and grids[-1].radial_levels > 1:
            grids.append(grids[-1].coarsen())
        return grids[::-1]


class QuadratureRule:
    """Gauss-Legendre in t = r^2 times the trapezoid rule in angle; normalized area measure."""

    def __init__(self, order=None, angular=None):
        self.order = settings.QUADRATURE_ORDER if order is None else int(order)
        self.angular = settings.QUADRATURE_ANGULAR if angular is None else int(angular)
        if self.order < 1 or self.angular < 1:
            raise DomainError("quadrature sizes must be positive")

        x, w = np.polynomial.legendre.leggauss(self.order)
        self.t = (x + 1) / 2
        self.weights = w / 2
        self.angles = 2 * np.pi * np.arange(self.angular) / self.angular

    @cached_property
    def points(self):
        return np.sqrt(self.t)[:, None] * np.exp(1j * self.angles)[None, :]

    def integrate(self, func):
        values = np.asarray(func(self.points))
        return np.sum(self.weights * values.mean(axis=1))

    def moment(self, k):
        """Integral of |z|^(2k) dA."""
        return float(np.real(self.integrate(lambda z: np.abs(z) ** (2 * k))))

    def coarsen(self) -> "QuadratureRule":
        return QuadratureRule(max(1, self.order // 2), max(1, self.angular // 2))

    @property
    def descriptor(self):
        return {"order": self.order, "angular": self.angular}


class NormKind(Enum):
    LOWER_BOUND_OF_SUP = "lower_bound_of_sup"
    QUADRATURE_VALUE = "quadrature_value"


@dataclass
class NormEstimate:
    value: float
    kind: NormKind
    grid: Dict = field(default_factory=dict)
    refinement_delta: float = 0.0

    @property
    def relative_delta(self):
        if not math.isfinite(self.value):
            return math.inf
        return abs(self.refinement_delta) / max(abs(self.value), 1e-300)

    def to_dict(self):
        return {
            "value": self.value,
            "kind": self.kind.value,
            "grid": self.grid,
            "refinement_delta": self.refinement_delta,
        }


def _gap(z):
    """1 - |z|^2 without cancellation."""
    r = np.abs(z)
    return (1 - r) * (1 + r)


def _max(values):
    values = np.asarray(values, dtype=float)
    if np.any(np.isnan(values)):
        raise NumericalError("NaN in grid evaluation")
    return float(np.max(values))


def _sup_estimate(measure: Callable[[DiscGrid], float], grid: DiscGrid) -> NormEstimate:
    value = measure(grid)
    coarse = measure(grid.coarsen()) if grid.radial_levels > 1 else value
    delta = value - coarse if math.isfinite(value) else math.inf
    return NormEstimate(value, NormKind.LOWER_BOUND_OF_SUP, grid.descriptor, delta)


def bloch_norm(f, grid: DiscGrid) -> NormEstimate:
    """|f(0)| + sup (1 - |z|^2) |f'(z)|"""
    f0 = abs(complex(f(0j)))

    def measure(g):
        z = g.interior_points
        return f0 + _max(_gap(z) * np.abs(f.derivative(z)))

    return _sup_estimate(measure, grid)


def dirichlet_norm(f, rule: QuadratureRule) -> NormEstimate:
    f0 = abs(complex(f(0j)))

    def measure(q):
        integral = float(np.real(q.integrate(lambda z: np.abs(f.derivative(z)) ** 2)))
        return math.sqrt(f0 ** 2 + integral)

    value = measure(rule)
    coarse = measure(rule.coarsen())
    return NormEstimate(value, NormKind.QUADRATURE_VALUE, rule.descriptor, value - coarse)


def weighted_sup_norm(f, s: float, grid: DiscGrid) -> NormEstimate:
    """sup (1 - |z|^2)^s |f(z)|; s = 0 is the plain sup-norm and includes the boundary layer."""
    if s < 0:
        raise DomainError("weight exponent must be nonnegative")

    def measure(g):
        if s == 0:
            with np.errstate(divide="ignore", invalid="ignore"):
                return _max(np.abs(f(g.points)))
        z = g.interior_points
        return _max(_gap(z) ** s * np.abs(f(z)))

    return _sup_estimate(measure, grid)


def sup_norm(f, grid: DiscGrid) -> NormEstimate:
    return weighted_sup_norm(f, 0, grid)


def log_growth_ratio(f, grid: DiscGrid) -> float:
    """sup |f(z)| / log(e / (1 - |z|^2))"""
    z = grid.interior_points
    return _max(np.abs(f(z)) / (1 - np.log(_gap(z))))


def embedding_constant(s: float, grid: DiscGrid, alpha=None) -> float:
    """alpha * sup (1 - |z|^2)^s log(e / (1 - |z|^2)), the constant of B into the weighted space."""
    alpha = settings.BLOCH_GROWTH_ALPHA if alpha is None else alpha
    gap = _gap(grid.interior_points)
    return alpha * _max(gap ** s * (1 - np.log(gap)))


@dataclass
class ConditionSuprema:
    c24: NormEstimate
    c25: NormEstimate
    c26: NormEstimate
    sup_u: NormEstimate

    def to_dict(self):
        return {
            "c24": self.c24.to_dict(),
            "c25": self.c25.to_dict(),
            "c26": self.c26.to_dict(),
            "sup_u": self.sup_u.to_dict(),
        }


def check_selfmap(phi, z):
    w = np.asarray(phi(z), dtype=complex)
    if np.any(~(np.abs(w) < 1)):
        bad = int(np.argmax(~(np.abs(w) < 1)))
        raise DomainError("not a selfmap", witness={"z": [z[bad].real, z[bad].imag],
                                                    "image_modulus": float(np.abs(w[bad]))})
    return w


def multiplier_suprema(u, grid: DiscGrid):
    """(c26, sup_u): the two quantities deciding u as a Bloch multiplier."""

    def c26(g):
        z = g.interior_points
        gap = _gap(z)
        return _max(gap * np.abs(u.derivative(z)) * (1 - np.log(gap)))

    def sup_u(g):
        return _max(np.abs(u(g.points)))

    return _sup_estimate(c26, grid), _sup_estimate(sup_u, grid)


def condition_suprema(u, phi, grid: DiscGrid) -> ConditionSuprema:
    def c24(g):
        z = g.interior_points
        w = check_selfmap(phi, z)
        return _max(_gap(z) * np.abs(u.derivative(z)) * (1 - np.log(_gap(w))))

    def c25(g):
        z = g.interior_points
        w = check_selfmap(phi, z)
        values = _gap(z) / _gap(w) * np.abs(u(z) * phi.derivative(z))
        if g.boundary_layer:
            # radial limit: |u| where phi touches the circle, 0 elsewhere
            zeta = g.boundary_points
            touching = np.abs(1 - np.abs(phi(zeta))) < settings.BOUNDARY_SNAP_TOLERANCE
            values = np.concatenate([values, np.where(touching, np.abs(u(zeta)), 0.0)])
        return _max(values)

    c26, sup_u = multiplier_suprema(u, grid)
    return ConditionSuprema(_sup_estimate(c24, grid), _sup_estimate(c25, grid), c26, sup_u)

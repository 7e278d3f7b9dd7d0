import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg
from scipy.spatial import cKDTree
from scipy.special import gammaln

import settings
from nlab.exception import DomainError, NumericalError, PreconditionError
from wcop.moebius import AutomorphismClass, AutomorphismKind, classify, iterate
from wcop.norms import DiscGrid
from wcop.operators import (Space, TruncationMatrix, WeightedCompositionOp, check_invertible,
                            taylor_truncation)
from wcop.symbols import cocycle_eval, cocycle_sup_root

logger = logging.getLogger(__name__)


class Provenance(Enum):
    PARABOLIC_CIRCLE = "parabolic-circle"
    HYPERBOLIC_ANNULUS = "hyperbolic-annulus"
    HYPERBOLIC_EQUAL_MODULI_CIRCLE = "hyperbolic-equal-moduli-circle"
    ELLIPTIC_PERIODIC_ROOT_SET = "elliptic-periodic-root-set"
    ELLIPTIC_APERIODIC_CIRCLE = "elliptic-aperiodic-circle"
    DIRICHLET_PARABOLIC_CIRCLE = "dirichlet-parabolic-circle"
    DIRICHLET_HYPERBOLIC_ANNULUS = "dirichlet-hyperbolic-annulus"
    DIRICHLET_ELLIPTIC_PERIODIC_ROOT_SET = "dirichlet-elliptic-periodic-root-set"
    DIRICHLET_ELLIPTIC_APERIODIC_CIRCLE = "dirichlet-elliptic-aperiodic-circle"
    MULTIPLICATION_OPERATOR_IMAGE = "multiplication-operator-image"


@dataclass(frozen=True)
class Circle:
    radius: float

    kind = "Circle"

    def reciprocal(self):
        return Circle(1.0 / self.radius)

    @property
    def spectral_radius(self):
        return self.radius

    def to_dict(self):
        return {"kind": self.kind, "radius": self.radius}


@dataclass(frozen=True)
class Annulus:
    r_min: float
    r_max: float
    exact: bool = False

    kind = "Annulus"

    def reciprocal(self):
        return Annulus(1.0 / self.r_max, 1.0 / self.r_min, self.exact)

    @property
    def spectral_radius(self):
        return self.r_max

    def to_dict(self):
        return {"kind": self.kind, "r_min": self.r_min, "r_max": self.r_max, "exact": self.exact}


@dataclass
class RootSetClosure:
    period: int
    points: np.ndarray

    kind = "RootSetClosure"

    def reciprocal(self):
        return RootSetClosure(self.period, 1.0 / self.points)

    @property
    def spectral_radius(self):
        return float(np.max(np.abs(self.points)))

    def to_dict(self):
        moduli = np.abs(self.points)
        return {
            "kind": self.kind,
            "period": self.period,
            "count": int(len(self.points)),
            "min_modulus": float(np.min(moduli)),
            "max_modulus": float(np.max(moduli)),
        }


@dataclass
class SpectrumPrediction:
    shape: object
    provenance: Provenance
    assumptions_checked: Dict[str, object] = field(default_factory=dict)
    extra: Dict[str, object] = field(default_factory=dict)

    def to_dict(self):
        return {
            "shape": self.shape.to_dict(),
            "provenance": self.provenance.value,
            "assumptions_checked": self.assumptions_checked,
            "extra": self.extra,
        }


def spectrum_radius(prediction: SpectrumPrediction) -> float:
    return prediction.shape.spectral_radius


def _unity_roots(m):
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    # quarter turns exactly, so the cloud is symmetric to the last bit
    exact = {0: 1, 1: 1j, 2: -1, 3: -1j}
    for j in range(m):
        if (4 * j) % m == 0:
            roots[j] = exact[4 * j // m]
    return roots


def detect_period(op_or_phi, automorphism_class: Optional[AutomorphismClass] = None) -> Optional[int]:
    """Minimal m <= MAX_PERIOD with phi_m = identity, for an elliptic phi."""
    phi = getattr(op_or_phi, "phi", op_or_phi)
    cls = automorphism_class or classify(phi)
    if cls.kind == AutomorphismKind.IDENTITY:
        return 1
    if cls.kind != AutomorphismKind.ELLIPTIC:
        return None

    multiplier = cls.fixed_points[0].derivative
    powers = multiplier ** np.arange(1, settings.MAX_PERIOD + 1)
    sample = 0.5 * np.exp(2j * np.pi * np.arange(16) / 16)
    for m in np.flatnonzero(np.abs(powers - 1) < 1e-10) + 1:
        if np.max(np.abs(iterate(phi, int(m))(sample) - sample)) < 1e-9:
            return int(m)

    logger.warning("no period up to %d, rotation treated as aperiodic", settings.MAX_PERIOD)
    return None


def _root_cloud(op: WeightedCompositionOp, m: int, grid: DiscGrid):
    values = cocycle_eval(op.u, op.phi, m, grid.points)
    principal = np.abs(values) ** (1.0 / m) * np.exp(1j * np.angle(values) / m)
    return (principal[:, None] * _unity_roots(m)[None, :]).reshape(-1)


def elliptic_root_cloud(op: WeightedCompositionOp, grid: DiscGrid) -> SpectrumPrediction:
    cls = classify(op.phi)
    m = detect_period(op.phi, cls) if cls.kind in (AutomorphismKind.ELLIPTIC,
                                                    AutomorphismKind.IDENTITY) else None
    if m is None:
        raise PreconditionError("use predict_spectrum", witness={"tag": cls.tag})

    if m == 1 and cls.kind == AutomorphismKind.IDENTITY:
        provenance = Provenance.MULTIPLICATION_OPERATOR_IMAGE
    elif op.space == Space.DIRICHLET:
        provenance = Provenance.DIRICHLET_ELLIPTIC_PERIODIC_ROOT_SET
    else:
        provenance = Provenance.ELLIPTIC_PERIODIC_ROOT_SET

    return SpectrumPrediction(RootSetClosure(m, _root_cloud(op, m, grid)), provenance,
                              {"classification": cls.tag, "period": m})


def root_cloud_coverage(op: WeightedCompositionOp, grid: DiscGrid) -> float:
    """Hausdorff distance between the clouds of `grid` and of its coarsening."""
    fine = elliptic_root_cloud(op, grid).shape.points
    coarse = elliptic_root_cloud(op, grid.coarsen()).shape.points
    a = np.column_stack([fine.real, fine.imag])
    b = np.column_stack([coarse.real, coarse.imag])
    forward, _ = cKDTree(b).query(a)
    backward, _ = cKDTree(a).query(b)
    return float(max(np.max(forward), np.max(backward)))


def predict_spectrum(op: WeightedCompositionOp, grid: DiscGrid) -> SpectrumPrediction:
    if not op.is_automorphism:
        raise PreconditionError("spectrum prediction needs a disc automorphism symbol")

    cls = classify(op.phi)
    dirichlet = op.space == Space.DIRICHLET
    assumptions = {"classification": cls.tag, "rational_weight": hasattr(op.u, "numerator")}

    if cls.kind == AutomorphismKind.IDENTITY:
        prediction = elliptic_root_cloud(op, grid)
        prediction.assumptions_checked.update(assumptions)
        return prediction

    inverse = check_invertible(op, grid)
    assumptions["invertible"] = inverse.invertible
    if not inverse.invertible:
        raise PreconditionError("operator is not invertible: " + inverse.reason,
                                witness=inverse.to_dict())

    if cls.kind == AutomorphismKind.PARABOLIC:
        a = cls.fixed_points[0].location
        provenance = Provenance.DIRICHLET_PARABOLIC_CIRCLE if dirichlet else Provenance.PARABOLIC_CIRCLE
        return SpectrumPrediction(Circle(float(abs(op.u(a)))), provenance, assumptions)

    if cls.kind == AutomorphismKind.HYPERBOLIC:
        ua, ub = float(abs(op.u(cls.attractive))), float(abs(op.u(cls.repulsive)))
        low, high = min(ua, ub), max(ua, ub)
        extra = {"u_attractive": ua, "u_repulsive": ub}
        if dirichlet:
            extra["previous_annulus"] = dirichlet_previous_annulus(op, cls).to_dict()
            return SpectrumPrediction(Annulus(low, high, exact=False),
                                      Provenance.DIRICHLET_HYPERBOLIC_ANNULUS, assumptions, extra)
        if math.isclose(ua, ub, rel_tol=1e-12):
            return SpectrumPrediction(Circle(high), Provenance.HYPERBOLIC_EQUAL_MODULI_CIRCLE,
                                      assumptions, extra)
        return SpectrumPrediction(Annulus(low, high, exact=False), Provenance.HYPERBOLIC_ANNULUS,
                                  assumptions, extra)

    m = detect_period(op.phi, cls)
    if m is not None:
        prediction = elliptic_root_cloud(op, grid)
        prediction.assumptions_checked.update(assumptions)
        return prediction

    p = cls.fixed_points[0].location
    provenance = Provenance.DIRICHLET_ELLIPTIC_APERIODIC_CIRCLE if dirichlet \
        else Provenance.ELLIPTIC_APERIODIC_CIRCLE
    return SpectrumPrediction(Circle(float(abs(op.u(p)))), provenance, assumptions)


def dirichlet_previous_annulus(op: WeightedCompositionOp, cls: Optional[AutomorphismClass] = None) -> Annulus:
    """[min |u| mu, max |u| / mu] over the two fixed points of a hyperbolic symbol."""
    cls = cls or classify(op.phi)
    if cls.kind != AutomorphismKind.HYPERBOLIC:
        raise PreconditionError("needs a hyperbolic symbol", witness={"tag": cls.tag})
    ua, ub = abs(op.u(cls.attractive)), abs(op.u(cls.repulsive))
    mu = cls.multiplier
    return Annulus(float(min(ua, ub) * mu), float(max(ua, ub) / mu), exact=False)


@dataclass
class SpectralRadiusEstimate:
    schedule: List[int]
    sequence: List[float]
    extrapolated: float
    predicted: float
    relative_gap: float

    def to_dict(self):
        return {
            "schedule": self.schedule,
            "sequence": self.sequence,
            "extrapolated": self.extrapolated,
            "predicted": self.predicted,
            "relative_gap": self.relative_gap,
        }


def aitken(sequence: Sequence[float]) -> float:
    if len(sequence) < 3:
        return sequence[-1]
    x0, x1, x2 = sequence[-3:]
    denominator = (x2 - x1) - (x1 - x0)
    if denominator == 0:
        return x2
    return x2 - (x2 - x1) ** 2 / denominator


def predicted_radius(op: WeightedCompositionOp, grid: DiscGrid, cls: Optional[AutomorphismClass] = None) -> float:
    """Spectral radius from the fixed-point formulas."""
    cls = cls or classify(op.phi)
    u = op.u
    if cls.kind == AutomorphismKind.IDENTITY:
        return float(np.max(np.abs(u(grid.points))))
    if cls.kind == AutomorphismKind.HYPERBOLIC:
        return float(max(abs(u(cls.attractive)), abs(u(cls.repulsive))))
    if cls.kind == AutomorphismKind.ELLIPTIC and detect_period(op.phi, cls) is not None:
        logger.info("periodic elliptic symbol, radius taken from the root cloud")
        return elliptic_root_cloud(op, grid).shape.spectral_radius
    return float(abs(u(cls.fixed_points[0].location)))


def spectral_radius_estimate(op: WeightedCompositionOp, n_schedule: Sequence[int],
                             grid: DiscGrid) -> SpectralRadiusEstimate:
    if not op.is_automorphism:
        raise PreconditionError("spectral radius estimate needs a disc automorphism symbol")
    if not n_schedule:
        raise DomainError("empty schedule")

    cls = classify(op.phi)
    schedule = [int(n) for n in n_schedule]
    sequence = [cocycle_sup_root(op.u, op.phi, n, grid) for n in schedule]
    predicted = predicted_radius(op, grid, cls)
    gap = abs(sequence[-1] - predicted) / predicted if predicted else abs(sequence[-1])

    return SpectralRadiusEstimate(schedule, sequence, aitken(sequence), predicted, gap)


def truncation_eigenvalues(matrix: TruncationMatrix) -> np.ndarray:
    if matrix.size > settings.MAX_TRUNCATION:
        raise DomainError("truncation size out of range", witness={"size": matrix.size})
    try:
        return scipy.linalg.eigvals(matrix.entries)
    except (np.linalg.LinAlgError, ValueError) as e:
        logger.error("eigenvalue solve failed for %dx%d truncation", matrix.size, matrix.size)
        raise NumericalError("eigenvalue solve did not converge",
                             witness={"size": matrix.size,
                                      "norm": float(np.linalg.norm(matrix.entries))}) from e


def resolvent_norm(matrix: TruncationMatrix, lam: complex) -> float:
    shifted = lam * np.eye(matrix.size) - matrix.entries
    smallest = scipy.linalg.svdvals(shifted)[-1]
    return math.inf if smallest == 0 else float(1.0 / smallest)


def conjecture_probe(op: WeightedCompositionOp, samples: int, grid: DiscGrid,
                     sizes: Optional[Sequence[int]] = None, lambdas: Optional[Sequence[complex]] = None,
                     rng: Optional[np.random.Generator] = None) -> Dict:
    """
    Resolvent norms of truncations for points of the hyperbolic annulus.

    Exploratory: nothing here passes or fails.
    """
    cls = classify(op.phi)
    if cls.kind != AutomorphismKind.HYPERBOLIC:
        raise PreconditionError("probe needs a hyperbolic symbol", witness={"tag": cls.tag})
    ua, ub = float(abs(op.u(cls.attractive))), float(abs(op.u(cls.repulsive)))
    if math.isclose(ua, ub, rel_tol=1e-12):
        raise PreconditionError("probe needs |u(a)| != |u(b)|", witness={"u_a": ua, "u_b": ub})

    low, high = min(ua, ub), max(ua, ub)
    sizes = list(sizes or settings.TRUNCATION_SIZES)
    rng = rng or np.random.default_rng(settings.SEED)

    if lambdas is None:
        radii = rng.uniform(low, high, size=samples)
        angles = rng.uniform(-np.pi, np.pi, size=samples)
        lambdas = list(radii * np.exp(1j * angles)) + [high, high + 0.5]

    matrices = [taylor_truncation(op, n) for n in sizes]
    entries = []
    for lam in lambdas:
        lam = complex(lam)
        if lam == 0:
            raise DomainError("0 lies in the resolvent set of an invertible operator")
        norms = [resolvent_norm(m, lam) for m in matrices]
        modulus = abs(lam)
        if modulus > high + 1e-12:
            region = "outside"
        elif math.isclose(modulus, high) or math.isclose(modulus, low):
            region = "boundary"
        else:
            region = "annulus"
        entries.append({
            "lambda": [lam.real, lam.imag],
            "region": region,
            "sizes": sizes,
            "resolvent_norms": norms,
            "growth": norms[-1] / norms[0] if norms[0] else math.inf,
        })

    return {"exploratory": True, "annulus": [low, high], "samples": entries,
            "grid": grid.descriptor}


def central_binomial_growth(n: int) -> float:
    """C(2n, n)^(1/(2n)), tending to 2."""
    if n < 1:
        raise DomainError("n must be positive")
    return float(math.exp((gammaln(2 * n + 1) - 2 * gammaln(n + 1)) / (2 * n)))

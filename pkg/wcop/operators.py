import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from scipy.special import binom

import settings
from nlab.exception import DomainError, PreconditionError
from wcop import series
from wcop.moebius import MoebiusTransform, checked_automorphism, iterate, orbit_distance
from wcop.norms import (DiscGrid, NormEstimate, QuadratureRule, bloch_norm, check_selfmap,
                        condition_suprema, dirichlet_norm, multiplier_suprema, sup_norm)
from wcop.symbols import (BlaschkeProduct, LogWeightFunction, RationalSymbol, cocycle_orbit,
                          cocycle_sup_root, compose_with_moebius, inf_modulus)

logger = logging.getLogger(__name__)


class Space(Enum):
    BLOCH = "Bloch"
    DIRICHLET = "Dirichlet"


class Verdict(Enum):
    BOUNDED = "Bounded"
    UNBOUNDED_EVIDENCE = "Unbounded-evidence"
    INCONCLUSIVE = "Inconclusive"


class ComposedFunction:
    """z -> f(phi(z)) with its derivative."""

    def __init__(self, f, phi):
        self.f = f
        self.phi = phi

    def evaluate(self, z):
        return self.f(self.phi(z))

    __call__ = evaluate

    def derivative(self, z):
        return self.f.derivative(self.phi(z)) * self.phi.derivative(z)


class WeightedCompositionOp:
    """
    f -> u * (f o phi) on the Bloch or the Dirichlet space.

    phi is a MoebiusTransform, a BlaschkeProduct or a rational selfmap; it is
    checked to map the interior sample points into the disc.
    """

    def __init__(self, u, phi, space=Space.BLOCH, grid: Optional[DiscGrid] = None):
        self.u = u
        self.phi = phi
        self.space = Space(space)
        self.certificates: Dict[str, object] = {}

        grid = grid or DiscGrid(radial_levels=8, boundary_layer=False)
        check_selfmap(phi, grid.interior_points)

    @property
    def is_automorphism(self):
        return isinstance(self.phi, MoebiusTransform) and self.phi.automorphism

    def __call__(self, f, z):
        return wcomp_apply(self, f, z)

    def to_dict(self):
        phi = self.phi.to_dict() if hasattr(self.phi, "to_dict") else repr(self.phi)
        u = self.u.to_dict() if hasattr(self.u, "to_dict") else repr(self.u)
        return {"u": u, "phi": phi, "space": self.space.value}


class WeightedImage:
    """(uC_phi f) as an evaluable function with derivative."""

    def __init__(self, op: WeightedCompositionOp, f):
        self.op = op
        self.f = f

    def evaluate(self, z):
        return wcomp_apply(self.op, self.f, z)

    __call__ = evaluate

    def derivative(self, z):
        u, phi = self.op.u, self.op.phi
        w = phi(z)
        return u.derivative(z) * self.f(w) + u(z) * self.f.derivative(w) * phi.derivative(z)


def wcomp_apply(op: WeightedCompositionOp, f, z):
    return op.u(z) * f(op.phi(z))


def power_apply(op: WeightedCompositionOp, m: int, f, z):
    """(uC_phi)^m f (z) = u_(m)(z) f(phi_m(z))"""
    if m < 0:
        raise DomainError("power must be nonnegative")
    weight, w = cocycle_orbit(op.u, op.phi, m, z)
    return weight * f(w)


def binomial_identity_residual(op: WeightedCompositionOp, lam: complex, m: int, f, z: complex) -> float:
    """
    |A - B| / (1 + |A|) where A = ((lam - uC_phi)^m f)(z) by repeated application
    and B is its binomial expansion through the cocycles.
    """
    if m > settings.MAX_BINOMIAL_POWER:
        raise DomainError("binomial overflow regime", witness={"m": m})
    if m < 0:
        raise DomainError("power must be nonnegative")

    orbit = [complex(z)]
    for _ in range(m):
        orbit.append(complex(op.phi(orbit[-1])))
    weights = [complex(op.u(p)) for p in orbit]
    values = [complex(f(p)) for p in orbit]

    # g_{j+1}(z_k) = lam g_j(z_k) - u(z_k) g_j(z_{k+1})
    g = values
    for _ in range(m):
        g = [lam * g[k] - weights[k] * g[k + 1] for k in range(len(g) - 1)]
    direct = g[0]

    expanded = 0j
    cocycle = 1 + 0j
    for k in range(m + 1):
        expanded += binom(m, k) * lam ** (m - k) * (-1) ** k * cocycle * values[k]
        cocycle *= weights[k]

    return abs(direct - expanded) / (1 + abs(direct))


@dataclass
class BoundednessVerdict:
    verdict: Verdict
    witnesses: Dict[str, NormEstimate] = field(default_factory=dict)
    history: Dict[str, List[float]] = field(default_factory=dict)
    note: str = ""

    @property
    def bounded(self):
        return self.verdict == Verdict.BOUNDED

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "witnesses": {k: v.to_dict() for k, v in self.witnesses.items()},
            "history": self.history,
            "note": self.note,
        }


def _judge(witnesses: Dict[str, NormEstimate], history: Dict[str, List[float]], note="") -> BoundednessVerdict:
    stability = settings.REFINEMENT_STABILITY

    for name, values in history.items():
        if not all(math.isfinite(v) for v in values):
            return BoundednessVerdict(Verdict.UNBOUNDED_EVIDENCE, witnesses, history,
                                      "%s is not finite on the grid" % name)
        steps = np.diff(values)
        growing = all(b > a * (1 + stability) for a, b in zip(values, values[1:]))
        # a resolved supremum stops growing; a divergent one keeps its increments
        if len(values) >= 4 and growing and steps[-1] >= 0.5 * steps[-2]:
            return BoundednessVerdict(Verdict.UNBOUNDED_EVIDENCE, witnesses, history,
                                      "%s grows across %d doublings" % (name, len(values) - 1))

    unstable = [name for name, w in witnesses.items() if w.relative_delta >= stability]
    if unstable:
        logger.info("inconclusive verdict, unstable witnesses: %s", ", ".join(unstable))
        return BoundednessVerdict(Verdict.INCONCLUSIVE, witnesses, history,
                                  "not stable under refinement: " + ", ".join(unstable))

    return BoundednessVerdict(Verdict.BOUNDED, witnesses, history, note)


def _as_symbol(u):
    if isinstance(u, BlaschkeProduct):
        return u.to_rational()
    if isinstance(u, MoebiusTransform):
        return RationalSymbol.from_moebius(u)
    return u


def check_bounded(op: WeightedCompositionOp, grid: DiscGrid) -> BoundednessVerdict:
    if op.space == Space.DIRICHLET:
        check_selfmap(op.phi, grid.interior_points)
        if isinstance(op.u, RationalSymbol) and op.is_automorphism:
            witnesses = {"sup_u": sup_norm(op.u, grid), "sup_du": sup_norm(op.u.derivative, grid)}
            verdict = BoundednessVerdict(Verdict.BOUNDED, witnesses,
                                         note="pole-free weight with univalent symbol")
        else:
            logger.info("Dirichlet boundedness outside the rational automorphism class")
            verdict = BoundednessVerdict(Verdict.INCONCLUSIVE,
                                         note="outside the rational automorphism class")
    else:
        ladder = [condition_suprema(op.u, op.phi, g) for g in grid.ladder()]
        final = ladder[-1]
        verdict = _judge(
            {"c24": final.c24, "c25": final.c25},
            {"c24": [s.c24.value for s in ladder], "c25": [s.c25.value for s in ladder]},
        )

    if verdict.bounded:
        op.certificates["bounded"] = verdict
    return verdict


def check_multiplier(u, space, grid: DiscGrid) -> BoundednessVerdict:
    space = Space(space)
    u = _as_symbol(u)

    if space == Space.DIRICHLET:
        if not isinstance(u, RationalSymbol):
            return BoundednessVerdict(Verdict.INCONCLUSIVE, note="weight outside the rational class")
        return BoundednessVerdict(
            Verdict.BOUNDED,
            {"sup_u": sup_norm(u, grid), "sup_du": sup_norm(u.derivative, grid)},
            note="bounded weight with bounded derivative",
        )

    ladder = [multiplier_suprema(u, g) for g in grid.ladder()]
    c26, sup_u = ladder[-1]
    return _judge(
        {"c26": c26, "sup_u": sup_u},
        {"c26": [c.value for c, _ in ladder], "sup_u": [s.value for _, s in ladder]},
    )


@dataclass
class InvertibilityResult:
    invertible: bool
    inverse: Optional[WeightedCompositionOp] = None
    witnesses: Dict = field(default_factory=dict)
    reason: str = ""

    def to_dict(self):
        return {
            "invertible": self.invertible,
            "inverse": self.inverse.to_dict() if self.inverse else None,
            "witnesses": self.witnesses,
            "reason": self.reason,
        }


def inverse_operator(op: WeightedCompositionOp) -> WeightedCompositionOp:
    """(uC_phi)^-1 = (1 / (u o phi^-1)) C_{phi^-1}"""
    psi = checked_automorphism(op.phi).inverse()
    weight = compose_with_moebius(_as_symbol(op.u), psi).reciprocal()
    return WeightedCompositionOp(weight, psi, op.space)


def check_invertible(op: WeightedCompositionOp, grid: DiscGrid, threshold=None) -> InvertibilityResult:
    threshold = settings.BOUNDED_AWAY_THRESHOLD if threshold is None else threshold

    bounded = op.certificates.get("bounded") or check_bounded(op, grid)
    if not bounded.bounded:
        raise PreconditionError("operator is not certified bounded", witness=bounded.to_dict())

    multiplier = check_multiplier(op.u, op.space, grid)
    lowest = inf_modulus(op.u, grid)
    witnesses = {
        "multiplier": multiplier.verdict.value,
        "inf_modulus": lowest,
        "threshold": threshold,
        "automorphism": op.is_automorphism,
    }

    if not multiplier.bounded:
        return InvertibilityResult(False, witnesses=witnesses, reason="weight is not a multiplier")
    if lowest <= threshold:
        return InvertibilityResult(False, witnesses=witnesses, reason="weight is not bounded away from zero")
    if not op.is_automorphism:
        return InvertibilityResult(False, witnesses=witnesses, reason="symbol is not an automorphism")

    return InvertibilityResult(True, inverse_operator(op), witnesses)


def composition_norm_bound(phi: MoebiusTransform, n: int, space) -> float:
    """
    Upper bound of ||C_{phi_n}||.

    Bloch: 1 + rho(phi_n(0), 0), itself at most 1 + n rho(phi(0), 0).
    Dirichlet: sqrt(2) (1 + rho(phi(0), 0) n)^(1/2).
    """
    if n < 0:
        raise DomainError("iterate count must be nonnegative")
    if Space(space) == Space.BLOCH:
        return 1.0 + orbit_distance(phi, n)
    return math.sqrt(2.0) * math.sqrt(1.0 + orbit_distance(phi, 1) * n)


def _monomial_bloch_norm(k):
    """sup (1 - r^2) k r^(k-1), attained at r^2 = (k-1)/(k+1)."""
    if k == 1:
        return 1.0
    return k * (2.0 / (k + 1)) * ((k - 1) / (k + 1)) ** ((k - 1) / 2)


@dataclass
class LowerBound:
    value: float
    test_function: str


def composition_lower_bound(phi: MoebiusTransform, n: int, space, grid: Optional[DiscGrid] = None,
                            rule: Optional[QuadratureRule] = None, degrees=range(1, 9)) -> LowerBound:
    """Best ||C_{phi_n} f|| / ||f|| over monomials and the functions f_a with a near phi_n(0)."""
    phi_n = iterate(checked_automorphism(phi), n)
    origin = complex(phi_n(0j))
    best = LowerBound(1.0, "1")

    if Space(space) == Space.BLOCH:
        grid = grid or DiscGrid()
        for k in degrees:
            f = RationalSymbol.from_polynomial([0] * k + [1])
            ratio = bloch_norm(ComposedFunction(f, phi_n), grid).value / _monomial_bloch_norm(k)
            if ratio > best.value:
                best = LowerBound(ratio, "z^%d" % k)
        for a in (origin, 0.5 * origin):
            if abs(a) >= 1 - 1e-12:
                continue
            fa = LogWeightFunction(a)
            ratio = bloch_norm(ComposedFunction(fa, phi_n), grid).value / fa.bloch_norm
            if ratio > best.value:
                best = LowerBound(ratio, "f_a(a=%.6g%+.6gj)" % (a.real, a.imag))
        return best

    rule = rule or QuadratureRule()
    candidates = [("z^%d" % k, RationalSymbol.from_polynomial([0] * k + [1]), math.sqrt(k))
                  for k in degrees]
    for a in (origin, 0.98 * origin, 0.9 * origin, 0.5 * origin):
        if 0 < abs(a) < 1 - 1e-12:
            fa = LogWeightFunction(a)
            candidates.append(("f_a(a=%.6g%+.6gj)" % (a.real, a.imag), fa, fa.dirichlet_norm))

    for tag, f, norm in candidates:
        image = _resolved_dirichlet_norm(ComposedFunction(f, phi_n), rule)
        if image is None:
            continue
        ratio = image / norm
        if ratio > best.value:
            best = LowerBound(ratio, tag)
    return best


def _resolved_dirichlet_norm(f, rule: QuadratureRule) -> Optional[float]:
    """
    ||f||_D, or None when halving the rule moves the Dirichlet integral by more
    than REFINEMENT_STABILITY.

    Images under high iterates concentrate near the boundary, where the
    trapezoid rule in angle overshoots.
    """
    estimate = dirichlet_norm(f, rule)
    f0 = abs(complex(f(0j)))
    fine = estimate.value ** 2 - f0 ** 2
    coarse = (estimate.value - estimate.refinement_delta) ** 2 - f0 ** 2
    if not math.isfinite(fine) or abs(fine - coarse) > settings.REFINEMENT_STABILITY * max(fine, 1e-300):
        logger.debug("quadrature does not resolve the image: %.6g vs %.6g", fine, coarse)
        return None
    return estimate.value


@dataclass
class ContractiveMultiplierResult:
    holds: bool
    sup_phi: NormEstimate
    multiplier: BoundednessVerdict

    def to_dict(self):
        return {"holds": self.holds, "sup_phi": self.sup_phi.to_dict(),
                "multiplier": self.multiplier.to_dict()}


def check_contractive_multiplier(phi, grid: DiscGrid, margin=1e-3) -> ContractiveMultiplierResult:
    """||phi||_inf < 1 and phi in M(B): then every Bloch weight gives a bounded operator."""
    symbol = _as_symbol(phi)
    sup_phi = sup_norm(symbol, grid)
    multiplier = check_multiplier(symbol, Space.BLOCH, grid)
    return ContractiveMultiplierResult(sup_phi.value < 1 - margin and multiplier.bounded, sup_phi, multiplier)


def multiplier_derivative_norm(u, space, grid: DiscGrid, alpha=None) -> float:
    """Bound of ||M_{u'}||: into the weighted space for Bloch, into the Bergman space for Dirichlet."""
    u = _as_symbol(u)
    if Space(space) == Space.BLOCH:
        alpha = settings.BLOCH_GROWTH_ALPHA if alpha is None else alpha
        c26, _ = multiplier_suprema(u, grid)
        return alpha * c26.value
    return sup_norm(u.derivative, grid).value


def power_norm_bound(op: WeightedCompositionOp, n: int, grid: DiscGrid, root=False) -> float:
    """
    Upper estimate of ||M_{u_(n)}||:
    [K ||1/u|| + 2] n (1 + rho(psi(0), 0) n)^p ||u_(n)||, p = 1 (Bloch) or 1/2 (Dirichlet).
    """
    if n < 1:
        raise DomainError("power must be positive")
    psi = checked_automorphism(op.phi).inverse()
    k = multiplier_derivative_norm(op.u, op.space, grid)
    lowest = inf_modulus(op.u, grid)
    if lowest <= 0:
        raise PreconditionError("weight vanishes on the grid", witness={"inf_modulus": lowest})

    rho = orbit_distance(psi, 1)
    if op.space == Space.BLOCH:
        front = (k / lowest + 2) * n * (1 + rho * n)
    else:
        front = (math.sqrt(2) * k / lowest + 2) * n * math.sqrt(1 + rho * n)

    log_bound = math.log(front) + n * math.log(cocycle_sup_root(op.u, op.phi, n, grid))
    return math.exp(log_bound / n) if root else math.exp(log_bound)


@dataclass
class TruncationMatrix:
    size: int
    entries: np.ndarray

    def to_dict(self):
        return {"size": self.size,
                "diagonal": [[c.real, c.imag] for c in np.diag(self.entries)]}


def _rational_coefficients(f):
    if isinstance(f, MoebiusTransform):
        return [f.b, f.a], [f.d, f.c]
    f = _as_symbol(f)
    return f.numerator.coef, f.denominator.coef


def taylor_truncation(op: WeightedCompositionOp, size: int) -> TruncationMatrix:
    """Column k holds the first `size` Taylor coefficients of u * phi^k."""
    if not 1 <= size <= settings.MAX_TRUNCATION:
        raise DomainError("truncation size out of range", witness={"size": size})

    u_num, u_den = _rational_coefficients(op.u)
    phi_num, phi_den = _rational_coefficients(op.phi)
    u_series = series.rational_series(u_num, u_den, size)
    phi_series = series.rational_series(phi_num, phi_den, size)

    columns = series.powers(phi_series, size, size, first=u_series)
    return TruncationMatrix(size, columns.T.copy())

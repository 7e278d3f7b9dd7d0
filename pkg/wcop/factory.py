import math

import settings
from nlab.conf import parse_complex
from nlab.exception import ConfigError
from wcop.config import ExperimentConfig
from wcop.moebius import (MoebiusTransform, build_canonical_hyperbolic, build_disc_automorphism,
                          build_parabolic_cayley, build_rotation, checked_automorphism)
from wcop.norms import DiscGrid, QuadratureRule
from wcop.operators import Space, WeightedCompositionOp
from wcop.symbols import BlaschkeProduct, RationalSymbol


def apply_tolerances(config: ExperimentConfig):
    """Process-wide knobs read by the numerical modules at call time."""
    tolerances = config.tolerances
    settings.PARABOLIC_TOLERANCE = tolerances.parabolic
    settings.BOUNDED_AWAY_THRESHOLD = tolerances.bounded_away
    settings.REFINEMENT_STABILITY = tolerances.refinement_stability
    settings.BLOCH_GROWTH_ALPHA = tolerances.alpha
    settings.INTERPOLATION_CONSTANT = tolerances.interpolation_constant
    settings.SEED = config.seed


class ExperimentFactory:
    """
    Builds numerical objects from an ExperimentConfig
    """
    def __init__(self, config: ExperimentConfig):
        self.config = config

    def create_symbol(self, spec=None) -> RationalSymbol:
        spec = spec or self.config.operator.u
        return RationalSymbol(spec["numerator"], spec.get("denominator", [1]))

    def create_selfmap(self, spec=None):
        spec = spec or self.config.operator.phi
        kind = spec["kind"]
        params = spec.get("params", {})

        if kind == "rotation":
            return self._create_rotation(params)
        if kind == "disc_automorphism":
            return build_disc_automorphism(params.get("theta", 0.0), parse_complex(params.get("p", 0)))
        if kind == "moebius":
            return self._create_moebius(params)
        if kind == "canonical_hyperbolic":
            return build_canonical_hyperbolic(params["mu"])
        if kind == "parabolic_cayley":
            return build_parabolic_cayley(params.get("t", 1.0))
        if kind == "blaschke":
            return BlaschkeProduct(params.get("zeros", []), params.get("unimodular_factor", 1))
        if kind == "rational":
            return RationalSymbol(params["numerator"], params.get("denominator", [1]))
        raise ConfigError("Unknown selfmap kind: %s" % kind)

    def _create_rotation(self, params):
        if "turns" in params and "theta" in params:
            raise ConfigError("rotation takes either theta or turns")
        if "turns" in params:
            return build_rotation(2 * math.pi * params["turns"])
        return build_rotation(params.get("theta", 0.0))

    def _create_moebius(self, params):
        missing = {"a", "b", "c", "d"} - set(params)
        if missing:
            raise ConfigError("moebius needs coefficients: " + ", ".join(sorted(missing)))
        phi = MoebiusTransform.from_coefficients(*(parse_complex(params[k]) for k in "abcd"))
        return checked_automorphism(phi)

    def create_grid(self, radial_levels=None) -> DiscGrid:
        grid = self.config.grid
        return DiscGrid(radial_levels or grid.radial_levels, grid.beta, grid.boundary_layer,
                        grid.angular_factor)

    def create_rule(self) -> QuadratureRule:
        return QuadratureRule(self.config.grid.quadrature_order, self.config.grid.quadrature_angular)

    def create_operator(self) -> WeightedCompositionOp:
        return WeightedCompositionOp(self.create_symbol(), self.create_selfmap(),
                                     Space(self.config.operator.space))

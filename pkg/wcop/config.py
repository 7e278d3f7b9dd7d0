import hashlib
import json
import os
from dataclasses import dataclass, field, replace
from typing import Dict, List

import settings
from nlab.conf import conf_attr, parse_bool, parse_complex
from nlab.exception import ConfigError, NLabInvalidArgumentType, NLabMissedArgument, NLabUnknownKey

PHI_KINDS = {
    "rotation": {"theta", "turns"},
    "disc_automorphism": {"theta", "p"},
    "moebius": {"a", "b", "c", "d"},
    "canonical_hyperbolic": {"mu"},
    "parabolic_cayley": {"t"},
    "blaschke": {"zeros", "unimodular_factor"},
    "rational": {"numerator", "denominator"},
}

# parameters without a default in the factory
REQUIRED_PARAMS = {
    "moebius": ("a", "b", "c", "d"),
    "canonical_hyperbolic": ("mu",),
    "rational": ("numerator",),
}

SPACES = ("Bloch", "Dirichlet")

# default tolerance per verification check
CHECK_TOLERANCES = {
    "dw_limit_hyperbolic": 1e-2,
    "dw_limit_parabolic": 5e-2,
    "radius_hyperbolic": 0.02,
    "radius_parabolic": 0.05,
    "parabolic_circle": 1e-12,
    "root_cloud_moduli": 1e-9,
    "root_cloud_symmetry": 0.0,
    "binomial_identity": 1e-9,
    "orbit_distance_chain": 1e-10,
    "composition_sandwich": 1e-10,
    "inverse_round_trip": 1e-9,
    "spectrum_duality": 1e-9,
    "blaschke_constant": 1e-9,
    "dirichlet_monomials": 1e-8,
    "dirichlet_composition_bound": 1e-10,
    "unit_weight_radius": 0.0,
    "unit_weight_conditions": 1e-9,
    "bloch_growth": 0.0,
    "multiplier_reciprocal": 0.0,
    "central_binomial": 1e-2,
    "contractive_multiplier_symbol": 0.0,
    "blaschke_symbol_bounded": 0.0,
    "multiplier_diagnostic": 0.0,
}


def _check_keys(section, data, allowed):
    if not isinstance(data, dict):
        raise ConfigError("Section '%s' must be an object" % section)
    unknown = set(data) - set(allowed)
    if unknown:
        raise NLabUnknownKey(section, unknown)


def _complex_list(values):
    return [[c.real, c.imag] for c in (parse_complex(v) for v in values)]


def _int_list(name, values):
    try:
        if not isinstance(values, (list, tuple)):
            raise TypeError("not a list")
        out = [int(v) for v in values]
        if any(float(v) != n for v, n in zip(values, out)):
            raise ValueError("not an integer")
    except (TypeError, ValueError) as e:
        raise NLabInvalidArgumentType(name, values) from e
    return out


def _normalize_params(kind, params):
    """Complex parameters as [re, im] pairs, reals as floats."""
    out = {}
    for key, value in params.items():
        if key in ("zeros", "numerator", "denominator"):
            out[key] = _complex_list(value)
        elif key in ("p", "a", "b", "c", "d", "unimodular_factor"):
            c = parse_complex(value)
            out[key] = [c.real, c.imag]
        else:
            out[key] = float(value)
    return out


@dataclass
class OperatorSpec:
    u: Dict = field(default_factory=lambda: {"numerator": [[2.0, 0.0], [1.0, 0.0]],
                                             "denominator": [[1.0, 0.0]]})
    phi: Dict = field(default_factory=lambda: {"kind": "canonical_hyperbolic",
                                               "params": {"mu": 0.5}})
    space: str = "Bloch"

    @classmethod
    def from_dict(cls, data):
        _check_keys("operator", data, {"u", "phi", "space"})
        default = cls()

        u = data.get("u", default.u)
        _check_keys("operator.u", u, {"numerator", "denominator"})
        if "numerator" not in u:
            raise NLabMissedArgument("operator.u.numerator")
        try:
            u = {"numerator": _complex_list(u["numerator"]),
                 "denominator": _complex_list(u.get("denominator", [1]))}
        except (TypeError, ValueError) as e:
            raise ConfigError("Invalid weight coefficients: %s" % e) from e

        phi = data.get("phi", default.phi)
        _check_keys("operator.phi", phi, {"kind", "params"})
        kind = phi.get("kind")
        if kind not in PHI_KINDS:
            raise ConfigError("Unknown selfmap kind: %s" % kind)
        params = phi.get("params", {})
        _check_keys("operator.phi.params", params, PHI_KINDS[kind])
        for key in REQUIRED_PARAMS.get(kind, ()):
            if key not in params:
                raise NLabMissedArgument("operator.phi.params." + key)
        try:
            params = _normalize_params(kind, params)
        except (TypeError, ValueError) as e:
            raise ConfigError("Invalid selfmap parameters: %s" % e) from e

        space = conf_attr(data, path="space", env="WCOP_SPACE", default=default.space)
        if space not in SPACES:
            raise ConfigError("Unknown space: %s" % space)

        return cls(u=u, phi={"kind": kind, "params": params}, space=space)

    def to_dict(self):
        return {"u": self.u, "phi": self.phi, "space": self.space}


@dataclass
class GridSpec:
    radial_levels: int = settings.GRID_RADIAL_LEVELS
    beta: float = settings.GRID_BETA
    boundary_layer: bool = settings.GRID_BOUNDARY_LAYER
    angular_factor: int = settings.GRID_ANGULAR_FACTOR
    quadrature_order: int = settings.QUADRATURE_ORDER
    quadrature_angular: int = settings.QUADRATURE_ANGULAR

    @classmethod
    def from_dict(cls, data):
        _check_keys("grid", data, {"radial_levels", "beta", "boundary_layer", "angular_factor",
                                   "quadrature_order", "quadrature_angular"})
        spec = cls(
            radial_levels=conf_attr(data, path="radial_levels", parse_value=int, env="WCOP_GRID_LEVELS",
                                    default=settings.GRID_RADIAL_LEVELS),
            beta=conf_attr(data, path="beta", parse_value=float, default=settings.GRID_BETA),
            boundary_layer=conf_attr(data, path="boundary_layer", parse_value=parse_bool,
                                     default=settings.GRID_BOUNDARY_LAYER),
            angular_factor=conf_attr(data, path="angular_factor", parse_value=int,
                                     default=settings.GRID_ANGULAR_FACTOR),
            quadrature_order=conf_attr(data, path="quadrature_order", parse_value=int,
                                       default=settings.QUADRATURE_ORDER),
            quadrature_angular=conf_attr(data, path="quadrature_angular", parse_value=int,
                                         default=settings.QUADRATURE_ANGULAR),
        )
        if spec.radial_levels < 1 or spec.beta <= 0 or spec.angular_factor < 1:
            raise ConfigError("Grid parameters out of range", witness=spec.__dict__)
        return spec

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class Tolerances:
    parabolic: float = settings.PARABOLIC_TOLERANCE
    bounded_away: float = settings.BOUNDED_AWAY_THRESHOLD
    refinement_stability: float = settings.REFINEMENT_STABILITY
    alpha: float = settings.BLOCH_GROWTH_ALPHA
    interpolation_constant: float = settings.INTERPOLATION_CONSTANT
    checks: Dict[str, float] = field(default_factory=lambda: dict(CHECK_TOLERANCES))

    @classmethod
    def from_dict(cls, data):
        _check_keys("tolerances", data, {"parabolic", "bounded_away", "refinement_stability",
                                         "alpha", "interpolation_constant", "checks"})
        checks = data.get("checks", {})
        _check_keys("tolerances.checks", checks, CHECK_TOLERANCES)
        merged = dict(CHECK_TOLERANCES)
        try:
            merged.update({k: float(v) for k, v in checks.items()})
        except (TypeError, ValueError) as e:
            raise NLabInvalidArgumentType("tolerances.checks", checks) from e

        return cls(
            parabolic=conf_attr(data, path="parabolic", parse_value=float,
                                default=settings.PARABOLIC_TOLERANCE),
            bounded_away=conf_attr(data, path="bounded_away", parse_value=float,
                                   default=settings.BOUNDED_AWAY_THRESHOLD),
            refinement_stability=conf_attr(data, path="refinement_stability", parse_value=float,
                                           default=settings.REFINEMENT_STABILITY),
            alpha=conf_attr(data, path="alpha", parse_value=float,
                            default=settings.BLOCH_GROWTH_ALPHA),
            interpolation_constant=conf_attr(data, path="interpolation_constant", parse_value=float,
                                             default=settings.INTERPOLATION_CONSTANT),
            checks=merged,
        )

    def to_dict(self):
        data = dict(self.__dict__)
        data["checks"] = dict(sorted(self.checks.items()))
        return data


@dataclass
class ExperimentConfig:
    operator: OperatorSpec = field(default_factory=OperatorSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    n_schedule: List[int] = field(default_factory=lambda: list(settings.N_SCHEDULE))
    truncation_sizes: List[int] = field(default_factory=lambda: list(settings.TRUNCATION_SIZES))
    probe_samples: int = 8
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_dir: str = settings.OUTPUT_DIR
    seed: int = settings.SEED
    schema_version: int = settings.CONFIG_SCHEMA_VERSION

    @classmethod
    def from_dict(cls, data):
        _check_keys("config", data, {"schema_version", "operator", "grid", "schedules",
                                     "tolerances", "probe_samples", "output_dir", "seed"})
        version = data.get("schema_version", settings.CONFIG_SCHEMA_VERSION)
        if version != settings.CONFIG_SCHEMA_VERSION:
            raise ConfigError("Unsupported schema version: %s" % version)

        schedules = data.get("schedules", {})
        _check_keys("schedules", schedules, {"n", "truncation"})
        n_schedule = _int_list("schedules.n", schedules.get("n", settings.N_SCHEDULE))
        sizes = _int_list("schedules.truncation", schedules.get("truncation", settings.TRUNCATION_SIZES))
        if not n_schedule or min(n_schedule) < 1:
            raise ConfigError("Cocycle schedule must hold positive integers")
        if not sizes or min(sizes) < 1 or max(sizes) > settings.MAX_TRUNCATION:
            raise ConfigError("Truncation sizes must lie in [1, %d]" % settings.MAX_TRUNCATION)

        return cls(
            operator=OperatorSpec.from_dict(data.get("operator", {})),
            grid=GridSpec.from_dict(data.get("grid", {})),
            n_schedule=n_schedule,
            truncation_sizes=sizes,
            probe_samples=conf_attr(data, path="probe_samples", parse_value=int, default=8),
            tolerances=Tolerances.from_dict(data.get("tolerances", {})),
            output_dir=conf_attr(data, path="output_dir", env="WCOP_OUTPUT_DIR",
                                 default=settings.OUTPUT_DIR),
            seed=conf_attr(data, path="seed", parse_value=int, env="WCOP_SEED", default=settings.SEED),
            schema_version=version,
        )

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "operator": self.operator.to_dict(),
            "grid": self.grid.to_dict(),
            "schedules": {"n": list(self.n_schedule), "truncation": list(self.truncation_sizes)},
            "probe_samples": self.probe_samples,
            "tolerances": self.tolerances.to_dict(),
            "output_dir": self.output_dir,
            "seed": self.seed,
        }

    def with_overrides(self, *, seed=None, grid_levels=None, output_dir=None):
        config = self
        if seed is not None:
            config = replace(config, seed=int(seed))
        if grid_levels is not None:
            if grid_levels < 1:
                raise ConfigError("--grid-levels must be positive")
            config = replace(config, grid=replace(config.grid, radial_levels=int(grid_levels)))
        if output_dir is not None:
            config = replace(config, output_dir=str(output_dir))
        return config

    def canonical_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def config_hash(self):
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def load_config(path) -> ExperimentConfig:
    if not os.path.isfile(path):
        raise ConfigError("Config file not found: %s" % path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("Config is not valid JSON: %s" % e) from e
    return ExperimentConfig.from_dict(data)

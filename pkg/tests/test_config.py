import json
from pathlib import Path

import numpy as np
import pytest

import settings
from nlab.exception import (ConfigError, DomainError, NLabInvalidArgumentType, NLabInvEnvValue,
                            NLabMissedArgument, NLabUnknownKey)
from wcop.config import CHECK_TOLERANCES, ExperimentConfig, load_config
from wcop.factory import ExperimentFactory, apply_tolerances
from wcop.moebius import MoebiusTransform
from wcop.operators import Space
from wcop.symbols import BlaschkeProduct

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _config(phi=None, **sections):
    data = dict(sections)
    if phi is not None:
        data["operator"] = {"phi": phi}
    return ExperimentConfig.from_dict(data)


def test_defaults_round_trip():
    config = ExperimentConfig.from_dict({})
    again = ExperimentConfig.from_dict(json.loads(config.canonical_json()))
    assert again == config
    assert again.config_hash == config.config_hash


def test_default_file_matches_builtin_defaults():
    assert load_config(CONFIGS / "default.json").config_hash == ExperimentConfig.from_dict({}).config_hash


def test_hash_follows_content():
    base = ExperimentConfig.from_dict({})
    assert base.with_overrides(seed=1).config_hash != base.config_hash


@pytest.mark.parametrize("data", [
    {"extra": 1},
    {"grid": {"levels": 3}},
    {"operator": {"phi": {"kind": "rotation", "params": {"mu": 0.5}}}},
    {"tolerances": {"checks": {"no_such_check": 0.1}}},
])
def test_unknown_keys(data):
    with pytest.raises(NLabUnknownKey):
        ExperimentConfig.from_dict(data)


@pytest.mark.parametrize("data", [
    {"schema_version": 2},
    {"operator": {"phi": {"kind": "spiral"}}},
    {"operator": {"space": "Hardy"}},
    {"operator": {"u": {"denominator": [1]}}},
    {"grid": {"radial_levels": 0}},
    {"grid": {"radial_levels": "many"}},
    {"schedules": {"n": [0, 10]}},
    {"schedules": {"truncation": [1024]}},
])
def test_invalid_config(data):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data)


@pytest.mark.parametrize("phi,missing", [
    ({"kind": "canonical_hyperbolic"}, "mu"),
    ({"kind": "canonical_hyperbolic", "params": {}}, "mu"),
    ({"kind": "rational", "params": {"denominator": [1]}}, "numerator"),
    ({"kind": "moebius", "params": {"a": 1, "b": 0, "d": 1}}, "c"),
])
def test_missing_selfmap_parameter(phi, missing):
    with pytest.raises(NLabMissedArgument, match="operator.phi.params." + missing):
        _config(phi)


@pytest.mark.parametrize("data", [
    {"schedules": {"n": ["ten"]}},
    {"schedules": {"n": 10}},
    {"schedules": {"n": [2.5]}},
    {"schedules": {"truncation": [None]}},
    {"tolerances": {"checks": {"radius_hyperbolic": "tight"}}},
])
def test_badly_typed_values(data):
    with pytest.raises(NLabInvalidArgumentType):
        ExperimentConfig.from_dict(data)


def test_integral_schedule_values_are_accepted():
    config = ExperimentConfig.from_dict({"schedules": {"n": [10.0, "25"]}})
    assert config.n_schedule == [10, 25]


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.json")


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"schema_version\": 1,")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(path)


def test_check_tolerance_override():
    config = load_config(CONFIGS / "tight_radius.json")
    assert config.tolerances.checks["radius_hyperbolic"] == 1e-12
    assert config.tolerances.checks["radius_parabolic"] == CHECK_TOLERANCES["radius_parabolic"]
    assert not config.grid.boundary_layer


def test_overrides():
    config = ExperimentConfig.from_dict({}).with_overrides(seed=7, grid_levels=5, output_dir="out")
    assert (config.seed, config.grid.radial_levels, config.output_dir) == (7, 5, "out")
    with pytest.raises(ConfigError):
        config.with_overrides(grid_levels=0)


def test_environment_overrides_file(monkeypatch):
    monkeypatch.setenv("WCOP_SPACE", "Dirichlet")
    monkeypatch.setenv("WCOP_SEED", "11")
    config = ExperimentConfig.from_dict({"seed": 3})
    assert config.operator.space == "Dirichlet"
    assert config.seed == 11


def test_invalid_environment_value(monkeypatch):
    monkeypatch.setenv("WCOP_GRID_LEVELS", "twelve")
    with pytest.raises(NLabInvEnvValue):
        ExperimentConfig.from_dict({})


def test_apply_tolerances():
    config = ExperimentConfig.from_dict({"tolerances": {"alpha": 2.5, "parabolic": 1e-8}, "seed": 4})
    apply_tolerances(config)
    assert settings.BLOCH_GROWTH_ALPHA == 2.5
    assert settings.PARABOLIC_TOLERANCE == 1e-8
    assert settings.SEED == 4


def test_factory_builds_the_default_operator():
    factory = ExperimentFactory(ExperimentConfig.from_dict({}))
    op = factory.create_operator()
    assert op.is_automorphism
    assert op.space == Space.BLOCH
    assert op.u(1.0) == pytest.approx(3.0)
    assert factory.create_grid().radial_levels == factory.config.grid.radial_levels
    assert factory.create_grid(4).radial_levels == 4


def test_half_turn_from_turns():
    phi = ExperimentFactory(load_config(CONFIGS / "half_turn.json")).create_selfmap()
    z = np.array([0.3 + 0.1j, -0.5j])
    np.testing.assert_allclose(phi(z), -z, atol=1e-15)


def test_rotation_takes_one_angle():
    factory = ExperimentFactory(_config({"kind": "rotation", "params": {"theta": 1.0, "turns": 0.5}}))
    with pytest.raises(ConfigError):
        factory.create_selfmap()


def test_moebius_kind():
    factory = ExperimentFactory(ExperimentConfig.from_dict({}))
    phi = factory.create_selfmap({"kind": "moebius", "params": {"a": 1, "b": 0.5, "c": 0.5, "d": 1}})
    assert isinstance(phi, MoebiusTransform)
    assert phi.automorphism

    with pytest.raises(DomainError, match="not a disc automorphism"):
        factory.create_selfmap({"kind": "moebius", "params": {"a": 2, "b": 0, "c": 0, "d": 1}})
    with pytest.raises(ConfigError, match="coefficients"):
        factory.create_selfmap({"kind": "moebius", "params": {"a": 1, "b": 0}})


def test_blaschke_kind():
    config = _config({"kind": "blaschke", "params": {"zeros": [[0.3, 0.0], [0.0, -0.2]]}})
    phi = ExperimentFactory(config).create_selfmap()
    assert isinstance(phi, BlaschkeProduct)
    assert phi.degree == 2


def test_unknown_kind_in_factory():
    with pytest.raises(ConfigError):
        ExperimentFactory(ExperimentConfig.from_dict({})).create_selfmap({"kind": "spiral"})

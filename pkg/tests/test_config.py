#!/usr/bin/env python
# encoding: utf-8

import json
import logging
import warnings

from unittest import TestCase

import pytest

from radpressure.config import load_config, parse_config
from radpressure.exceptions import ConfigError


def test_default_configuration():
    config = load_config()

    TestCase().assertEqual(config.system.mode_cutoff, 3)
    TestCase().assertEqual(config.system.fock_cap, 3)
    TestCase().assertEqual(config.system.total_cap, 6)
    TestCase().assertAlmostEqual(config.system.coupling_strength, 0.05)
    TestCase().assertEqual(config.requested_coupling, 0.05)
    TestCase().assertEqual(config.flags.label, "linear")
    TestCase().assertEqual(config.output.output_format, "csv")
    TestCase().assertEqual(config.sweep_axes, ())


def test_alternative_keys_warn():
    with warnings.catch_warnings(record=True) as captured_warnings:
        warnings.simplefilter("always")
        config = parse_config({"system": {"K": 2, "Omega": 0.5}})

    TestCase().assertEqual(len(captured_warnings), 2)
    TestCase().assertTrue(
        all(issubclass(warning.category, DeprecationWarning) for warning in captured_warnings)
    )
    TestCase().assertEqual(config.system.mode_cutoff, 2)
    TestCase().assertEqual(config.system.mechanical_frequency, 0.5)


def test_alternative_keys_are_logged(caplog):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with caplog.at_level(logging.WARNING, logger="radpressure.config"):
            parse_config({"system": {"modes": 1}})

    TestCase().assertIn("'modes' is deprecated, use 'mode_cutoff'", caplog.text)


def test_mass_instead_of_coupling():
    config = parse_config({"system": {"mass": 2.0}})

    TestCase().assertEqual(config.system.mass, 2.0)
    TestCase().assertIsNone(config.requested_coupling)


@pytest.mark.parametrize(
    "document",
    [
        {"plots": {}},
        {"system": {"modes_count": 2}},
        {"system": {"mass": 1.0, "coupling": 0.05}},
        {"system": {"fock_cap": 2.5}},
        {"system": {"cavity_length": -1.0}},
        {"system": []},
        {"model": {"linear": "yes"}},
        {"solver": {"method": "lanczos"}},
        {"solver": {"n_eigen": 1}},
        {"solver": {"dense_limit": -1}},
        {"output": {"format": "xlsx"}},
        {"output": {"precision": 0}},
        {"audit": {"faults": ["drop_hbar"]}},
        {"sweep": {"axes": [{"name": "coupling", "min": 0.01, "max": 0.1}]}},
        {"sweep": {"axes": [{"name": "temperature", "min": 0.0, "max": 1.0, "count": 2}]}},
    ],
)
def test_invalid_documents_raise(document):
    with pytest.raises(ConfigError):
        parse_config(document)


def test_null_total_cap_switches_the_cap_off():
    TestCase().assertIsNone(parse_config({"system": {"total_cap": None}}).system.total_cap)


def test_lambda_axis_is_the_coupling_axis():
    config = parse_config(
        {
            "sweep": {
                "axes": [
                    {"name": "lambda", "min": 0.01, "max": 0.1, "count": 3, "spacing": "log"},
                    {"name": "fock_cap", "min": 2, "max": 3, "count": 2},
                ]
            }
        }
    )

    TestCase().assertEqual([axis.name for axis in config.sweep_axes], ["coupling", "fock_cap"])
    TestCase().assertEqual(config.sweep_axes[0].spacing, "log")


def test_load_config_reports_json_position(tmp_path):
    config_path = tmp_path / "broken.json"
    config_path.write_text('{"system": {"K": 2,}}')

    with pytest.raises(ConfigError) as error:
        load_config(str(config_path))
    TestCase().assertIn("line 1 column", str(error.value))


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "missing.json"))


def test_load_config_from_file(tmp_path):
    config_path = tmp_path / "run.json"
    config_path.write_text(
        json.dumps({"system": {"mode_cutoff": 2}, "model": {"quadratic_f1": True}})
    )
    config = load_config(str(config_path))

    TestCase().assertEqual(config.system.mode_cutoff, 2)
    TestCase().assertEqual(config.flags.label, "linear+quadratic_f1")


def test_overrides_keep_the_coupling_fixed():
    config = load_config().with_overrides(mode_cutoff=4, fock_cap=2, total_cap=5)

    TestCase().assertEqual(config.system.mode_cutoff, 4)
    TestCase().assertEqual(config.system.fock_cap, 2)
    TestCase().assertEqual(config.system.total_cap, 5)
    TestCase().assertAlmostEqual(config.system.coupling_strength, 0.05)


def test_overrides_validate_their_values():
    config = load_config()
    with pytest.raises(ConfigError):
        config.with_overrides(mode_cutoff=0)
    with pytest.raises(ConfigError):
        config.with_overrides(output_format="xlsx")
    with pytest.raises(ConfigError):
        config.with_overrides(faults=["drop_hbar"])

    seeded = config.with_overrides(faults=["flip_gauge_sign"])
    TestCase().assertEqual(seeded.audit.faults, ("flip_gauge_sign",))


def test_sha_ignores_the_output_path():
    config = load_config()

    TestCase().assertEqual(config.with_overrides(path="run.csv").sha, config.sha)
    TestCase().assertNotEqual(config.with_overrides(fock_cap=2).sha, config.sha)
    TestCase().assertNotEqual(config.with_overrides(output_format="json").sha, config.sha)

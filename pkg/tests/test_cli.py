#!/usr/bin/env python
# encoding: utf-8

import csv
import json

from unittest import TestCase

import pytest

from radpressure.cli import (
    EXIT_AUDIT_FAILED,
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    build_parser,
    main,
)
from radpressure.exceptions import ConvergenceError

SMALL_SYSTEM = {
    "mechanical_frequency": 0.3,
    "mode_cutoff": 2,
    "fock_cap": 2,
    "total_cap": 4,
    "mirror_cap": 4,
}


def _write_config(tmp_path, document, name="run.json"):
    config_path = tmp_path / name
    config_path.write_text(json.dumps(document))
    return str(config_path)


def _read_csv(path):
    with open(path, encoding="utf-8", newline="") as csv_file:
        lines = [line for line in csv_file if not line.startswith("#")]
    return list(csv.DictReader(lines))


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_coefficients_command(tmp_path):
    out = str(tmp_path / "coefficients.csv")
    exit_code = main(["coefficients", "--modes", "2", "--quiet", "--out", out])
    rows = _read_csv(out)

    TestCase().assertEqual(exit_code, EXIT_OK)
    TestCase().assertEqual(
        [(row["j"], row["k"]) for row in rows], [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")]
    )
    TestCase().assertEqual(rows[1]["g_jk_exact"], "-4/3")
    TestCase().assertAlmostEqual(float(rows[1]["g_jk"]), -4.0 / 3.0)


def test_audit_command_passes(tmp_path):
    out = str(tmp_path / "audit.json")
    arguments = ["audit", "--modes", "2", "--fock", "2", "--quiet", "--format", "json"]
    exit_code = main(arguments + ["--out", out])
    with open(out, encoding="utf-8") as json_file:
        document = json.load(json_file)

    TestCase().assertEqual(exit_code, EXIT_OK)
    TestCase().assertEqual(document["meta"]["command"], "audit")
    TestCase().assertEqual(document["meta"]["identities"], document["meta"]["identities_passed"])


def test_audit_command_with_seeded_fault_fails():
    exit_code = main(
        ["audit", "--modes", "2", "--fock", "2", "--quiet", "--seed-faults", "flip_gauge_sign"]
    )

    TestCase().assertEqual(exit_code, EXIT_AUDIT_FAILED)


def test_malformed_config_is_a_configuration_error(tmp_path):
    config_path = tmp_path / "broken.json"
    config_path.write_text('{"system": {"mode_cutoff": 2,,}}')

    TestCase().assertEqual(main(["spectrum", "--config", str(config_path)]), EXIT_CONFIG)


def test_unknown_key_is_a_configuration_error(tmp_path):
    config_path = _write_config(tmp_path, {"system": {"modes_count": 2}})

    TestCase().assertEqual(main(["spectrum", "--config", config_path]), EXIT_CONFIG)


def test_sweep_without_axes_is_a_configuration_error(tmp_path):
    config_path = _write_config(tmp_path, {"system": SMALL_SYSTEM})

    TestCase().assertEqual(main(["sweep", "--config", config_path, "--quiet"]), EXIT_CONFIG)


def test_spectrum_command(tmp_path):
    config_path = _write_config(
        tmp_path, {"system": SMALL_SYSTEM, "solver": {"n_eigen": 4, "method": "dense"}}
    )
    out = str(tmp_path / "spectrum.json")
    exit_code = main(["spectrum", "--config", config_path, "--out", out, "--format", "json"])
    with open(out, encoding="utf-8") as json_file:
        document = json.load(json_file)

    TestCase().assertEqual(exit_code, EXIT_OK)
    TestCase().assertEqual(len(document["rows"]), 4)
    TestCase().assertEqual(document["rows"][0]["excitation"], 0.0)
    TestCase().assertAlmostEqual(document["meta"]["mechanical_gap"], 0.3, delta=1e-2)
    TestCase().assertAlmostEqual(document["meta"]["coupling_lambda"], 0.05)
    TestCase().assertIn("ground_energy_difference_F1", document["meta"])


def test_spectrum_command_honours_dense_limit(tmp_path):
    config_path = _write_config(
        tmp_path, {"system": SMALL_SYSTEM, "solver": {"n_eigen": 4, "dense_limit": 10}}
    )
    out = str(tmp_path / "spectrum.json")
    exit_code = main(["spectrum", "--config", config_path, "--out", out, "--format", "json"])
    with open(out, encoding="utf-8") as json_file:
        document = json.load(json_file)

    TestCase().assertEqual(exit_code, EXIT_OK)
    TestCase().assertEqual(document["meta"]["solver"], "iterative")
    TestCase().assertLess(document["meta"]["eigen_residual"], 1e-8)


def test_convergence_failure_is_a_numerical_error(tmp_path, monkeypatch):
    def _not_converging(*args, **kwargs):
        raise ConvergenceError("no convergence", diagnostics={"converged": 0, "requested": 4})

    monkeypatch.setattr("radpressure.cli.solve_spectrum", _not_converging)
    config_path = _write_config(tmp_path, {"system": SMALL_SYSTEM})

    TestCase().assertEqual(main(["spectrum", "--config", config_path]), EXIT_NUMERICAL)


def test_sweep_output_is_byte_identical(tmp_path):
    config_path = _write_config(
        tmp_path,
        {
            "system": SMALL_SYSTEM,
            "solver": {"n_eigen": 4},
            "sweep": {
                "axes": [
                    {"name": "lambda", "min": 0.01, "max": 0.04, "count": 3, "spacing": "log"}
                ]
            },
        },
    )
    outputs = [str(tmp_path / "first.csv"), str(tmp_path / "second.csv")]
    for out in outputs:
        TestCase().assertEqual(main(["sweep", "--config", config_path, "--out", out]), EXIT_OK)

    with open(outputs[0], "rb") as first, open(outputs[1], "rb") as second:
        content = first.read()
        TestCase().assertEqual(content, second.read())

    rows = _read_csv(outputs[0])
    TestCase().assertEqual([row["status"] for row in rows], ["ok", "ok", "ok"])
    TestCase().assertIn(b"# lambda_exponent: ", content)


def test_output_path_from_environment(tmp_path, monkeypatch):
    out = tmp_path / "from_environment.csv"
    monkeypatch.setenv("RADPRESSURE_OUTPUT", str(out))

    TestCase().assertEqual(main(["coefficients", "--modes", "1", "--quiet"]), EXIT_OK)
    TestCase().assertTrue(out.exists())

#!/usr/bin/env python
# encoding: utf-8

import logging
import warnings

from unittest import TestCase

import pytest

from radpressure.misc_utils import get_with_alts, initialise_logger, key_variants


def test_get_with_alts_with_primary_key():
    value = get_with_alts({"mode_cutoff": 4}, "mode_cutoff")
    TestCase().assertEqual(value, 4)


def test_get_with_alts_with_alt_key():
    with warnings.catch_warnings(record=True) as captured_warnings:
        warnings.simplefilter("always")
        value = get_with_alts({"K": 4}, "mode_cutoff", alternatives=["modes", "K"])

    TestCase().assertEqual(len(captured_warnings), 1)
    TestCase().assertTrue(issubclass(captured_warnings[0].category, DeprecationWarning))
    TestCase().assertEqual(
        str(captured_warnings[0].message),
        "as of version 2026.10.1 'K' is replaced with 'mode_cutoff'",
    )
    TestCase().assertEqual(value, 4)


def test_get_with_alts_prefers_the_primary_key():
    with warnings.catch_warnings(record=True) as captured_warnings:
        warnings.simplefilter("always")
        value = get_with_alts({"K": 4, "mode_cutoff": 5}, "mode_cutoff", alternatives=["K"])

    TestCase().assertEqual(captured_warnings, [])
    TestCase().assertEqual(value, 5)


def test_get_with_alts_with_absent_key():
    with pytest.raises(KeyError):
        _ = get_with_alts({"K": 4}, "fock_cap")
    TestCase().assertIsNone(get_with_alts({}, "fock_cap", default_value=None, allow_default=True))


def test_key_variants():
    TestCase().assertEqual(
        key_variants("Cavity Length", ["d"]),
        ["d", "Cavity Length", "Cavity Length", "cavity length", "cavity_length"],
    )


def test_initialise_logger_rejects_bad_modes():
    with pytest.raises(ValueError):
        initialise_logger(mode="everywhere")
    with pytest.raises(ValueError):
        initialise_logger(mode="file only")


def test_initialise_logging(caplog, tmp_path):
    logfile_path = tmp_path / "test_misc_utils.log"
    initialise_logger(str(logfile_path), mode="both")

    logging.info("Test message")
    for handler in logging.getLogger().handlers:
        handler.flush()

    TestCase().assertIn("Test message", caplog.text)
    TestCase().assertTrue(logfile_path.exists())
    TestCase().assertIn("Test message", logfile_path.read_text())

    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, logging.FileHandler):
            root.removeHandler(handler)
            handler.close()

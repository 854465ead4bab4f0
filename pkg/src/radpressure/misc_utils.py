#!/usr/bin/env python
# encoding: utf-8

import logging

from typing import Any, List, Optional
from warnings import warn

LOG_MODES = ("both", "file only", "console only")


# Logging to file and console simultaneously
# https://aykutakin.wordpress.com/2013/08/06/logging-to-console-and-file-in-python/
def initialise_logger(
    output_file: Optional[str] = None,
    mode: str = "both",
    force: bool = False,
    handler_mode: str = "w",
    verbose: bool = False,
):
    if mode not in LOG_MODES:
        raise ValueError(f"Logging mode must be one of {LOG_MODES}, got {mode!r}")
    if mode != "console only" and output_file is None:
        raise ValueError(f"Logging mode {mode!r} needs an output_file")

    if verbose:
        formatter = logging.Formatter("%(asctime)s|%(module)s|%(funcName)s|%(lineno)d|%(message)s")
    else:
        formatter = logging.Formatter("%(message)s")
    logger = logging.getLogger()

    logger.setLevel(logging.INFO)
    # This removes previously defined handlers before adding out own
    if force:
        logger.handlers.clear()

    if mode in ("both", "console only"):
        # We infer that if there are any log handlers then there must be a StreamHandler
        # which we don't want to duplicate
        if len(logger.handlers) == 0:
            handler = logging.StreamHandler()
            handler.setLevel(logging.INFO)
            handler.setFormatter(formatter)
            logger.addHandler(handler)

    if mode in ("both", "file only"):
        handler = logging.FileHandler(output_file, handler_mode, encoding=None, delay="true")
        handler.setLevel(logging.INFO)
        handler.setFormatter(formatter)
        logger.addHandler(handler)


def key_variants(primary_key: str, alternatives: Optional[List[str]] = None) -> List[str]:
    variants = list(alternatives or [])
    variants.extend(
        [
            primary_key,
            primary_key.title(),
            primary_key.lower(),
            primary_key.lower().replace(" ", "_"),
        ]
    )
    return variants


def get_with_alts(
    dictionary: dict,
    primary_key: str,
    default_value: Any = "",
    allow_default: bool = False,
    alternatives: Optional[List] = None,
    deprecated_from_version: str = "2026.10.1",
) -> Any:
    """
    Looks up primary_key, falling back on alternative spellings with a DeprecationWarning.
    A missing key returns default_value when allow_default is set, otherwise raises KeyError.
    """
    successful_key = ""
    value = None
    # primary spelling wins over any alternative
    for key in [primary_key] + key_variants(primary_key, alternatives):
        if key in dictionary.keys():
            value = dictionary[key]
            successful_key = key
            break

    if successful_key == "":
        if not allow_default:
            raise KeyError(
                f"Requested key {primary_key} not available and allow_default set to false"
            )
        return default_value

    if successful_key != primary_key:
        warn(
            f"as of version {deprecated_from_version} '{successful_key}' "
            f"is replaced with '{primary_key}'",
            DeprecationWarning,
            stacklevel=2,
        )

    return value

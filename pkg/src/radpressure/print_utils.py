#!/usr/bin/env python
# encoding: utf-8

from typing import Any, Dict, List, Optional, Sequence

COLOUR_PREFIXES = {
    "red": "\033[91m",
    "green": "\033[92m",
    "yellow": "\033[93m",
    "blue": "\033[94m",
    "grey": "\033[90m",
}
RESET = "\033[0m"


def _cell(value: Any, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def _line(fields: Sequence[str], cells: Sequence[str], widths: Dict[str, int]) -> str:
    return "".join(f"|{cell:<{widths[f]}.{widths[f]}}" for f, cell in zip(fields, cells)) + "|"


def print_table_from_list_of_dicts(
    column_data_rows: Sequence[Dict[str, Any]],
    excluded_fields: Optional[List[str]] = None,
    included_fields: Optional[List[str]] = None,
    truncate_width: int = 40,
    digits: int = 6,
) -> None:
    """Console table of a list of row dictionaries, floats to `digits` significant figures"""
    if len(column_data_rows) == 0:
        return

    excluded_fields = excluded_fields or []
    if included_fields is None:
        included_fields = list(column_data_rows[0])
    fields = [field for field in included_fields if field not in excluded_fields]

    widths = {}
    for field in fields:
        longest = max(len(_cell(row.get(field), digits)) for row in column_data_rows)
        widths[field] = min(max(longest, len(field)) + 1, truncate_width)

    total_width = sum(widths.values()) + len(widths) + 1
    print("-" * total_width, flush=True)
    print(_line(fields, fields, widths), flush=True)
    print("-" * total_width, flush=True)
    for row in column_data_rows:
        cells = [_cell(row.get(field), digits) for field in fields]
        print(_line(fields, cells, widths), flush=True)
    print("-" * total_width, flush=True)


def colour_text(text: str, colour: Optional[str] = "red") -> str:
    """
    Decorate a text string with ANSI escape codes for coloured text in bash-like shells

    Args:
        text (str): the text to decorate

    Keyword arguments:
        colour (str): one of red, green, yellow, blue, grey

    Returns:
        coloured_text (str): the decorated text
    """
    if colour not in COLOUR_PREFIXES:
        raise ValueError(f"Unsupported colour {colour!r}")
    return f"{COLOUR_PREFIXES[colour]}{text}{RESET}"


def status_text(status: str) -> str:
    colours = {"pass": "green", "fail": "red", "info": "yellow"}
    return colour_text(status.upper(), colours.get(status, "grey"))

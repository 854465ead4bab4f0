#!/usr/bin/env python
# encoding: utf-8

import csv
import hashlib
import io
import json
import logging
import math
import os

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import boto3
from botocore.client import Config

logger = logging.getLogger(__name__)

config = Config(connect_timeout=900, read_timeout=900, retries={"max_attempts": 3})

OUTPUT_FORMATS = ("csv", "json")
DEFAULT_PRECISION = 15


def create_s3_client(
    profile_name: Optional[str] = None,
    s3_session: Optional[boto3.session.Session] = None,
) -> boto3.session.Session.client:
    if os.getenv("AWS_PROFILE") not in ["", None] and profile_name is None:
        profile_name = os.getenv("AWS_PROFILE")
    if profile_name is not None:
        session = boto3.Session(profile_name=profile_name)
    elif s3_session is not None:
        session = s3_session
    else:
        session = boto3.Session()

    client = session.client("s3", config=config)
    return client


def is_s3(file_uri: str) -> bool:
    return file_uri.lower().startswith("s3://")


def split_uri(full_uri: str) -> Tuple[str, str, str]:
    bucket = ""
    key = ""
    filename = ""
    if is_s3(full_uri):
        full_uri = full_uri.replace("s3://", "")
        parts = full_uri.split("/")
        bucket = parts[0]
        if len(parts) >= 2:
            filename = parts[-1]
            key = "/".join(parts[1:])
        bucket = "s3://" + bucket
    else:
        bucket = str(Path(full_uri).parents[0])
        filename = Path(full_uri).name

    return bucket, key, filename


def write_to_file(
    file_uri: str,
    content: str,
    aws_profile: Optional[str] = None,
    s3_session: Optional[boto3.session.Session] = None,
) -> str:
    if is_s3(file_uri):
        s3_bucket, key, _ = split_uri(file_uri)
        status = _write_file_to_s3(
            key, s3_bucket, content, aws_profile=aws_profile, s3_session=s3_session
        )
    else:
        status = _write_file_to_local(file_uri, content)

    logger.info(status)
    return status


def _write_file_to_local(filepath: str, content: str, encoding: str = "utf-8") -> str:
    if os.path.isfile(filepath):
        status = f"Deleting existing {filepath}, before creating new file"
        os.remove(filepath)
    else:
        status = f"Creating new file: {filepath}"

    # newline="" keeps the bytes identical across platforms
    with open(filepath, "w", encoding=encoding, newline="") as output_file:
        output_file.write(content)

    return status


def _write_file_to_s3(
    key: str,
    s3_bucket: str,
    content: str,
    aws_profile: Optional[str] = None,
    s3_session: Optional[boto3.session.Session] = None,
) -> str:
    s3_bucket = s3_bucket.replace("s3://", "")
    s3_client = create_s3_client(profile_name=aws_profile, s3_session=s3_session)
    objs = s3_client.list_objects(Bucket=s3_bucket, Prefix=key)
    filepath = f"s3://{s3_bucket}/{key}"
    if "Contents" in objs:
        status = f"Deleting existing {filepath}, before creating new file"
        s3_client.delete_object(Bucket=s3_bucket, Key=key)
    else:
        status = f"Creating new file: {filepath}"

    s3_client.put_object(Bucket=s3_bucket, Key=key, Body=content.encode("utf-8"))

    return status


def round_float(value: float, precision: int = DEFAULT_PRECISION) -> Optional[float]:
    if math.isnan(value):
        return None
    if math.isinf(value):
        return value
    return float(f"{value:.{precision}g}")


def format_value(value: Any, precision: int = DEFAULT_PRECISION) -> str:
    """Text for one CSV cell: shortest round-trip form of the value rounded to precision digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        rounded = round_float(value, precision)
        return "nan" if rounded is None else repr(rounded)
    if isinstance(value, complex):
        return f"{format_value(value.real, precision)}{format_value(value.imag, precision):+}j"
    return str(value)


def _json_value(value: Any, precision: int) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        # JSON has no NaN or infinity
        return round_float(value, precision) if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(key): _json_value(item, precision) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(item, precision) for item in value]
    if hasattr(value, "item"):
        # numpy scalars
        return _json_value(value.item(), precision)
    return str(value)


def config_sha(configuration: Dict[str, Any]) -> str:
    canonical = json.dumps(configuration, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha1(canonical.encode("utf-8")).hexdigest()


def _fieldnames(rows: Sequence[Dict[str, Any]]) -> List[str]:
    # union of keys in first-seen order
    names: Dict[str, None] = {}
    for row in rows:
        for key in row:
            names.setdefault(key, None)
    return list(names)


def render_csv(
    rows: Sequence[Dict[str, Any]],
    metadata: Dict[str, Any],
    precision: int = DEFAULT_PRECISION,
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    fieldnames = _fieldnames(rows)
    if fieldnames:
        writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([format_value(row.get(name), precision) for name in fieldnames])
    for key, value in metadata.items():
        buffer.write(f"# {key}: {format_value(value, precision)}\n")
    return buffer.getvalue()


def render_json(
    rows: Sequence[Dict[str, Any]],
    metadata: Dict[str, Any],
    precision: int = DEFAULT_PRECISION,
) -> str:
    document = {
        "meta": _json_value(dict(metadata), precision),
        "rows": [_json_value(dict(row), precision) for row in rows],
    }
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def write_rows(
    file_uri: str,
    rows: Sequence[Dict[str, Any]],
    metadata: Dict[str, Any],
    output_format: str = "csv",
    precision: int = DEFAULT_PRECISION,
    aws_profile: Optional[str] = None,
    s3_session: Optional[boto3.session.Session] = None,
) -> str:
    """
    Writes a table as CSV (header, rows, then "# key: value" metadata lines) or as a JSON
    object with "meta" and "rows", locally or to an s3:// URI. Nothing time-dependent is
    written, so the same rows and metadata always give the same bytes.
    """
    if output_format not in OUTPUT_FORMATS:
        raise ValueError(f"output_format must be one of {OUTPUT_FORMATS}, got {output_format!r}")
    if output_format == "csv":
        content = render_csv(rows, metadata, precision)
    else:
        content = render_json(rows, metadata, precision)
    return write_to_file(file_uri, content, aws_profile=aws_profile, s3_session=s3_session)

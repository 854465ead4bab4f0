#!/usr/bin/env python
# encoding: utf-8

import math
import os

import boto3
import pytest

from radpressure.mode_mixing import ModeGrid
from radpressure.operators import SystemParams

os.environ["AWS_ACCESS_KEY_ID"] = "testing"
os.environ["AWS_SECRET_ACCESS_KEY"] = "testing"
os.environ["AWS_SECURITY_TOKEN"] = "testing"
os.environ["AWS_SESSION_TOKEN"] = "testing"
os.environ["AWS_DEFAULT_REGION"] = "eu-west-2"


@pytest.fixture()
def make_s3_bucket():
    """Creates a bucket inside the calling test's mock_s3 context."""

    def _make_s3_bucket(bucket_name):
        s3_client = boto3.client("s3")
        bucket_name = bucket_name.replace("s3://", "")
        s3_client.create_bucket(
            Bucket=bucket_name, CreateBucketConfiguration={"LocationConstraint": "eu-west-2"}
        )
        return s3_client

    return _make_s3_bucket


@pytest.fixture()
def small_grid():
    return ModeGrid(math.pi, 3)


@pytest.fixture()
def small_params():
    """K=2 field modes on a cavity of length pi, with lambda = 0.01."""
    params = SystemParams(
        mass=1.0,
        mechanical_frequency=1.0,
        cavity_length=math.pi,
        mode_cutoff=2,
        fock_cap=3,
        total_cap=6,
        mirror_cap=4,
    )
    return params.with_coupling(0.01)

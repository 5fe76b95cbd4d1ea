"""Tests for the custom payload fields.

:Module: starlab.tests.experiments.test_fields
"""
import math

import pytest
from marshmallow import Schema, ValidationError

from starlab.experiments.base_payload_schemas import IntegerSequence, NormField
from starlab.experiments.plugins.beck.experiment import PatternField


class FieldSchema(Schema):
    """Wraps the fields for loading."""

    scales = IntegerSequence(data_key="Scale")
    norm = NormField(data_key="Norm")
    pattern = PatternField(data_key="Pattern")


@pytest.mark.parametrize(
    "value, expected",
    [(3, [3]), ([1, "2", 5], [1, 2, 5]), ("2,3,5", [2, 3, 5]), ("4..7", [4, 5, 6, 7]), (" 1 .. 1 ", [1]), ("6,", [6])],
)
def test_integer_sequence(value, expected) -> None:
    """Integers, lists, comma-separated strings and inclusive ranges."""
    assert FieldSchema().load({"Scale": value})["scales"] == expected


@pytest.mark.parametrize("value", ["5..2", "a,b", 1.5, [1, "x"], True])
def test_integer_sequence_errors(value) -> None:
    """Empty ranges and non-integers are rejected."""
    with pytest.raises(ValidationError):
        FieldSchema().load({"Scale": value})


@pytest.mark.parametrize(
    "value, expected",
    [("L2", ("l2", None)), ("sup", ("sup", None)), ("lp:4", ("lp", 4.0)), ("exp:2", ("exp", 2.0)), ("llogl:0.5", ("llogl", 0.5))],
)
def test_norm_field(value, expected) -> None:
    """Norm names load as (kind, parameter)."""
    assert FieldSchema().load({"Norm": value})["norm"] == expected


def test_norm_field_infinite_p() -> None:
    """lp:inf is the sup norm by sampling."""
    kind, parameter = FieldSchema().load({"Norm": "lp:inf"})["norm"]
    assert kind == "lp" and math.isinf(parameter)


@pytest.mark.parametrize("value", ["l3", "lp", "lp:0.5", "lp:x", "exp:", "exp:-1", "median:2"])
def test_norm_field_errors(value) -> None:
    """Unknown norms, p below 1 and bad Orlicz parameters are rejected."""
    with pytest.raises(ValidationError):
        FieldSchema().load({"Norm": value})


def test_pattern_field() -> None:
    """Coincidence strings and triples load the same."""
    assert FieldSchema().load({"Pattern": "0-1:0, 1-2:2"})["pattern"] == [(0, 1, 0), (1, 2, 2)]
    assert FieldSchema().load({"Pattern": [[0, 1, 0], [1, 2, 2]]})["pattern"] == [(0, 1, 0), (1, 2, 2)]

    with pytest.raises(ValidationError):
        FieldSchema().load({"Pattern": "0:1-2"})
    with pytest.raises(ValidationError):
        FieldSchema().load({"Pattern": [["a", 1, 0]]})

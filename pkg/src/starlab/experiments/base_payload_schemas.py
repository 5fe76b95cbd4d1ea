"""Experiment base payload schemas

This defines the base payload schemas that experiments need to use. A payload is the merged `--config` file and command-line flags
of one run: UpperCamelCase keys on the way in (the same keys a config file uses), snake_case in Python.

:Module: starlab.experiments.base_payload_schemas
"""
import math
import re
from typing import Any, Dict, List, Optional, Tuple, TypeVar

from marshmallow import Schema, fields, INCLUDE, validate, validates_schema, ValidationError

from starlab.hyperbolic import InvalidOrliczSpecError, OrliczSpec
from starlab.point_sets.generators import MAX_VDC_BITS

MAX_SEED = 2**64 - 1
OUTPUT_FORMATS = ("jsonl", "csv")
POINT_SET_SOURCES = ("vdc", "vdc-shifted", "random", "file")
RANGE_PATTERN = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$")


class IntegerSequence(fields.Field):
    """A list of integers, given as a list, a comma-separated string ("2,3,5") or an inclusive range ("4..10")."""

    def _deserialize(self, value: Any, attr: Optional[str], data: Any, **kwargs) -> List[int]:
        if isinstance(value, int) and not isinstance(value, bool):
            return [value]
        if isinstance(value, (list, tuple)):
            try:
                return [int(item) for item in value]
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"Not a list of integers: {value!r}") from exc
        if isinstance(value, str):
            matched = RANGE_PATTERN.match(value)
            if matched:
                start, stop = int(matched.group(1)), int(matched.group(2))
                if stop < start:
                    raise ValidationError(f"Empty range: {value!r}")
                return list(range(start, stop + 1))
            try:
                return [int(item) for item in value.split(",") if item.strip()]
            except ValueError as exc:
                raise ValidationError(f"Expected integers like '2,3,5' or a range like '4..10', got {value!r}") from exc
        raise ValidationError(f"Not a list of integers: {value!r}")


class NormField(fields.Field):
    """A norm of D_N: l1, l2, sup, lp:<p>, exp:<q> or llogl:<b>. Loads as (kind, parameter)."""

    def _deserialize(self, value: Any, attr: Optional[str], data: Any, **kwargs) -> Tuple[str, Optional[float]]:
        text = str(value).strip().lower()
        if text in ("l1", "l2", "sup"):
            return text, None

        kind, _, parameter = text.partition(":")
        if kind not in ("lp", "exp", "llogl") or not parameter:
            raise ValidationError(f"Unknown norm {value!r}. Use l1, l2, sup, lp:<p>, exp:<q> or llogl:<b>")
        try:
            number = float(parameter)
        except ValueError as exc:
            raise ValidationError(f"The parameter of {value!r} is not a number") from exc

        if kind == "lp" and not (number >= 1 or math.isinf(number)):
            raise ValidationError(f"L^p norms need p >= 1, got {value!r}")
        if kind != "lp":
            try:
                OrliczSpec.parse(f"{kind}:{parameter}")
            except InvalidOrliczSpecError as exc:
                raise ValidationError(str(exc)) from exc
        return kind, number


class ExperimentPayloadBaseTemplate(Schema):
    """
    This is the base experiment payload template schema. All payload schemas will need to be subclasses of this.

    These are the fields common to every subcommand; the CLI adds the matching `--seed`, `--out`, `--json`, `--threads` and `--format`
    flags to every command.
    """

    seed = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=0, max=MAX_SEED), data_key="Seed")
    out = fields.String(required=False, load_default=None, allow_none=True, data_key="Out")
    json_output = fields.Boolean(required=False, load_default=False, data_key="Json")
    threads = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=1), data_key="Threads")
    output_format = fields.String(required=False, load_default="jsonl", validate=validate.OneOf(OUTPUT_FORMATS), data_key="Format")

    class Meta:
        """By default, we will include unknown values without raising an error."""

        unknown = INCLUDE


ExperimentPayloadBaseTemplateInstance = TypeVar("ExperimentPayloadBaseTemplateInstance", bound=ExperimentPayloadBaseTemplate)


class SeededPayloadTemplate(ExperimentPayloadBaseTemplate):
    """A payload for stochastic experiments: the seed is mandatory."""

    seed = fields.Integer(required=True, validate=validate.Range(min=0, max=MAX_SEED), data_key="Seed")


class PointSetPayloadTemplate(ExperimentPayloadBaseTemplate):
    """
    This is a payload template for experiments that run on a point set.

    A valid payload for a van der Corput set looks like this:
        Set: vdc
        K: 6

    For a shifted set, either the shift mask or a best-of search (over the exact L2 norm) is given:
        Set: vdc-shifted
        K: 6
        BestOf: 16
        Seed: 7

    Random sets need their size, dimension and a seed; file sets a path:
        Set: random
        Points: 64
        Dimension: 3
        Seed: 11
    """

    point_set = fields.String(required=False, load_default="vdc", validate=validate.OneOf(POINT_SET_SOURCES), data_key="Set")
    k = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=0, max=MAX_VDC_BITS), data_key="K")
    n_points = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=1), data_key="Points")
    dimension = fields.Integer(required=False, load_default=2, validate=validate.Range(min=1), data_key="Dimension")
    shift = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=0), data_key="Shift")
    best_of = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=1), data_key="BestOf")
    points_file = fields.String(required=False, load_default=None, allow_none=True, data_key="File")

    @validates_schema()
    def validate_source(self, data: Dict[str, Any], **kwargs) -> None:  # pylint: disable=unused-argument  # noqa
        """Checks that the chosen point-set source has what it needs."""
        errors = {}
        source = data.get("point_set", "vdc")

        if source in ("vdc", "vdc-shifted"):
            if data.get("k") is None:
                errors["K"] = [f"`K` is required for `Set: {source}`."]
            if data.get("dimension", 2) != 2:
                errors["Dimension"] = ["Van der Corput sets are planar."]

        if source == "vdc-shifted":
            if data.get("shift") is None and data.get("best_of") is None:
                errors["Shift"] = ["Either a `Shift` mask or a `BestOf` count is required for `Set: vdc-shifted`."]
            elif data.get("shift") is not None and data.get("k") is not None and data["shift"] >= 2 ** data["k"]:
                errors["Shift"] = [f"The shift mask must be below 2^K = {2 ** data['k']}."]
            if data.get("best_of") is not None and data.get("shift") is None and data.get("seed") is None:
                errors["Seed"] = ["A `Seed` is required to draw the shift masks for `BestOf`."]

        if source == "random":
            if data.get("n_points") is None:
                errors["Points"] = ["`Points` is required for `Set: random`."]
            if data.get("seed") is None:
                errors["Seed"] = ["A `Seed` is required for `Set: random`."]

        if source == "file" and not data.get("points_file"):
            errors["File"] = ["`File` is required for `Set: file`."]

        if errors:
            raise ValidationError(errors)


PointSetPayloadTemplateInstance = TypeVar("PointSetPayloadTemplateInstance", bound=PointSetPayloadTemplate)

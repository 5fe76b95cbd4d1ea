"""Starlab's Haar coefficient tables

Tables of <D_N, h_R> for a point set. One row per shape r of each requested order |r| with the sign-optimal pairing
<D_N, f_r> = sum over R in D_r of |<D_N, h_R>| and the largest coefficient scaled by 2^|r| / N; with `--rectangles`, one row per
rectangle instead.

:Module: starlab.experiments.plugins.haar.experiment
"""
import math
from typing import Any, Dict, List

import click
import numpy as np
from click import Context
from marshmallow import ValidationError, fields, validates_schema

from starlab.discrepancy import DiscrepancyField, lemma1_rfunction
from starlab.dyadic import ShapeVector
from starlab.experiments.base_payload_schemas import IntegerSequence, PointSetPayloadTemplate
from starlab.experiments.cli_utils import StarlabExperimentCommand, point_set_options, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.experiments.resolvers import resolve_point_set
from starlab.utils.logging import LOGGER


def natural_order(n_points: int) -> int:
    """The order n with 2N <= 2^n < 4N: at this scale every rectangle of D_r, |r| = n, has volume at most 1 / (2N)."""
    return max(1, math.ceil(math.log2(2 * n_points)))


class HaarPayloadTemplate(PointSetPayloadTemplate):
    """The payload for HaarExperiment. `Orders` defaults to the natural order of the point set; `Shape` picks one shape instead."""

    orders = IntegerSequence(required=False, load_default=None, allow_none=True, data_key="Orders")
    shape = IntegerSequence(required=False, load_default=None, allow_none=True, data_key="Shape")
    rectangles = fields.Boolean(required=False, load_default=False, data_key="Rectangles")

    @validates_schema()
    def validate_orders(self, data: Dict[str, Any], **kwargs) -> None:  # pylint: disable=unused-argument  # noqa
        """Orders and shape entries are non-negative, and the shape fits the dimension."""
        if any(order < 0 for order in data.get("orders") or []):
            raise ValidationError({"Orders": ["Orders must be non-negative."]})
        shape = data.get("shape")
        if shape is not None:
            if any(entry < 0 for entry in shape):
                raise ValidationError({"Shape": ["Shape entries must be non-negative."]})
            if data.get("point_set") in ("random", "vdc", "vdc-shifted") and len(shape) != data.get("dimension", 2):
                raise ValidationError({"Shape": [f"A shape needs one entry per dimension ({data.get('dimension', 2)})."]})


class HaarExperiment(StarlabExperiment):
    """Tabulates the Haar coefficients of D_N shape by shape."""

    payload_template_class = HaarPayloadTemplate
    csv_columns = ["label", "n_points", "order", "shape", "position", "coefficient", "pairing", "max_abs", "scaled_max"]

    def shapes(self, field: DiscrepancyField) -> List[ShapeVector]:
        """The shapes of the table."""
        if self.payload["shape"] is not None:
            return [ShapeVector(tuple(self.payload["shape"]))]

        orders = self.payload["orders"] or [natural_order(field.n_points)]
        return [shape for order in orders for shape in ShapeVector.all_of_order(order, field.dimension)]

    def execute(self) -> ExperimentOutcome:
        """Builds the table."""
        pointset = resolve_point_set(self.payload)
        field = DiscrepancyField(pointset)
        base = {"label": pointset.label, "n_points": pointset.n_points}

        records = []
        for shape in self.shapes(field):
            optimal = lemma1_rfunction(field, shape)
            scale = 2.0**shape.order / field.n_points
            LOGGER.debug(f"[🧮] Shape {shape.entries}: <D_N, f_r> = {optimal.pairing:.6g}")

            if self.payload["rectangles"]:
                for position in shape.positions():
                    coefficient = float(optimal.coefficients[position])
                    records.append({**base, "order": shape.order, "shape": list(shape.entries), "position": list(position), "coefficient": coefficient})
                continue

            max_abs = float(np.max(np.abs(optimal.coefficients)))
            records.append(
                {**base, "order": shape.order, "shape": list(shape.entries), "pairing": optimal.pairing, "max_abs": max_abs, "scaled_max": max_abs * scale}
            )

        LOGGER.info(f"[✅] Tabulated the Haar coefficients of D_N for {pointset.label} ({len(records)} rows)")
        return ExperimentOutcome(records=records)


@click.command(cls=StarlabExperimentCommand, experiment_class=HaarExperiment)
@point_set_options
@click.option("--n", "orders", type=str, default=None, help="Orders |r| to tabulate: '6', '6,7' or '6..12' (default: ceil(log2 2N))")
@click.option("--shape", type=str, default=None, help="A single shape instead, e.g. '3,4'")
@click.option("--rectangles", is_flag=True, default=False, help="One row per rectangle with its coefficient")
@click.pass_context
def haar(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument
    """Haar coefficient tables of D_N."""
    run_experiment(ctx)

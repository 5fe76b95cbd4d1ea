"""Starlab's discrepancy norms

Norms of D_N for one point set. The L2 norm (closed form) and the sup norm (critical-grid sweep) are exact unless `--sampled` is
given; L1 and L^p are sampled, L1 with the exact cell-average lower bound next to it; exp(L^q) and L(log L)^b are evaluated on a
dyadic grid fine enough to separate the coordinates.

:Module: starlab.experiments.plugins.disc.experiment
"""
from typing import Any, Dict

import click
from click import Context
from marshmallow import fields, validate, validates_schema, ValidationError

from starlab.discrepancy import (
    DiscrepancyField,
    evaluation_levels,
    l2_norm_exact,
    lp_norm_sampled,
    orlicz_norm_sampled,
    star_discrepancy_exact,
    superlevel_measure,
)
from starlab.experiments.base_payload_schemas import NormField, PointSetPayloadTemplate
from starlab.experiments.cli_utils import StarlabExperimentCommand, point_set_options, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.experiments.resolvers import resolve_point_set
from starlab.hyperbolic import OrliczSpec
from starlab.utils.logging import LOGGER

SAMPLED_EXPONENTS = {"l1": 1.0, "l2": 2.0, "sup": float("inf")}


def norm_label(norm) -> str:
    """`l2`, `lp:4`, `exp:2`, ..."""
    kind, parameter = norm
    return kind if parameter is None else f"{kind}:{parameter:g}"


class DiscPayloadTemplate(PointSetPayloadTemplate):
    """The payload for DiscExperiment."""

    norm = NormField(required=False, load_default=("l2", None), data_key="Norm")
    sampled = fields.Boolean(required=False, load_default=False, data_key="Sampled")
    resolution = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=1), data_key="Resolution")
    samples = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=2), data_key="Samples")
    evaluation = fields.String(required=False, load_default="midpoint", validate=validate.OneOf(["midpoint", "average"]), data_key="Evaluation")
    threshold = fields.Float(required=False, load_default=None, allow_none=True, data_key="Threshold")

    @validates_schema()
    def validate_sampling_seed(self, data: Dict[str, Any], **kwargs) -> None:  # pylint: disable=unused-argument  # noqa
        """Sampled norms are stochastic and need a seed."""
        kind, _ = data.get("norm", ("l2", None))
        stochastic = kind in ("l1", "lp") or (kind in ("l2", "sup") and data.get("sampled")) or data.get("threshold") is not None
        if stochastic and data.get("seed") is None:
            raise ValidationError({"Seed": ["A `Seed` is required for sampled norms and superlevel measures."]})


class DiscExperiment(StarlabExperiment):
    """Computes one norm of the discrepancy function of a point set."""

    payload_template_class = DiscPayloadTemplate
    csv_columns = ["label", "n_points", "dimension", "norm", "method", "value", "stderr", "lower_bound", "exact"]

    def execute(self) -> ExperimentOutcome:
        """Evaluates the requested norm."""
        payload = self.payload
        pointset = resolve_point_set(payload)
        field = DiscrepancyField(pointset)
        kind, parameter = payload["norm"]

        record = {"label": pointset.label, "n_points": pointset.n_points, "dimension": pointset.dimension, "norm": norm_label(payload["norm"])}
        LOGGER.info(f"[📏] Computing the {record['norm']} norm of D_N for {pointset.label}...")

        if kind == "l2" and not payload["sampled"]:
            record.update(method="closed_form", value=l2_norm_exact(field), exact=True)

        elif kind == "sup" and not payload["sampled"]:
            result = star_discrepancy_exact(field)
            record.update(method="critical_grid", value=result.value, witness=list(result.witness), closed=result.closed, exact=True)

        elif kind in ("exp", "llogl"):
            spec = OrliczSpec(kind, parameter)
            levels = evaluation_levels(field, payload["resolution"])
            value = orlicz_norm_sampled(field, spec, resolution=levels[0], evaluation=payload["evaluation"])
            record.update(method=f"grid_{payload['evaluation']}", value=value, levels=list(levels), exact=False)
            if payload["evaluation"] == "average":
                record["lower_bound"] = value

        else:
            p = parameter if kind == "lp" else SAMPLED_EXPONENTS[kind]
            estimate = lp_norm_sampled(field, p, resolution=payload["resolution"], samples=payload["samples"], seed=payload["seed"])
            record.update(method="sampled", value=estimate.value, stderr=estimate.error, samples=estimate.samples, exact=False)
            if kind == "l1":
                record["lower_bound"] = field.l1_lower_bound(evaluation_levels(field, payload["resolution"]))

        if payload["threshold"] is not None:
            measure = superlevel_measure(field, payload["threshold"], resolution=payload["resolution"], seed=payload["seed"])
            record.update(threshold=payload["threshold"], superlevel=measure.value, superlevel_stderr=measure.error)

        LOGGER.info(f"[✅] {record['norm']} norm of D_N for {pointset.label}: {record['value']:.17g}")
        return ExperimentOutcome(records=[record])


@click.command(cls=StarlabExperimentCommand, experiment_class=DiscExperiment)
@point_set_options
@click.option("--norm", type=str, default=None, help="l1 | l2 | lp:<p> | sup | exp:<q> | llogl:<b> (default l2)")
@click.option("--sampled", is_flag=True, default=False, help="Sample the L2 or sup norm instead of computing it exactly")
@click.option("--resolution", type=int, default=None, help="Per-axis dyadic level of the sampling or evaluation grid")
@click.option("--samples", type=int, default=None, help="Use this many i.i.d. uniform samples instead of stratified ones")
@click.option("--evaluation", type=click.Choice(["midpoint", "average"]), default=None, help="Grid values for exp/llogl norms (average is a lower bound)")
@click.option("--threshold", type=float, default=None, help="Also estimate the measure of {D_N >= threshold}")
@click.pass_context
def disc(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument
    """Norms of the discrepancy function D_N of a point set."""
    run_experiment(ctx)

"""Starlab's random-coefficient estimates

E ||sum alpha_R h_R||_inf for i.i.d. random signs (or gaussians) at each scale, with a power-law fit over the scales when there are at
least three. With `--density`, sparse signed sums are drawn instead and checked against their L2 and Riesz floors.

:Module: starlab.experiments.plugins.mc.experiment
"""
from typing import Any, Dict

import click
from click import Context
from marshmallow import ValidationError, fields, validate, validates_schema

from starlab.experiments.base_payload_schemas import IntegerSequence, SeededPayloadTemplate
from starlab.experiments.cli_utils import StarlabExperimentCommand, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.smallball import COEFFICIENT_MODELS, exponent_fit, mc_expectation, signed_sparse_sup
from starlab.utils.logging import LOGGER


class McPayloadTemplate(SeededPayloadTemplate):
    """
    The payload for McExperiment. This looks like:
        Seed: 2024
        Dimension: 2
        Scale: 4..10
        Trials: 200
    """

    dimension = fields.Integer(required=False, load_default=2, validate=validate.Range(min=1), data_key="Dimension")
    scales = IntegerSequence(required=True, data_key="Scale")
    trials = fields.Integer(required=False, load_default=200, validate=validate.Range(min=1), data_key="Trials")
    model = fields.String(required=False, load_default="signs", validate=validate.OneOf(COEFFICIENT_MODELS), data_key="Model")
    density = fields.Float(
        required=False, load_default=None, allow_none=True, validate=validate.Range(min=0, max=1, min_inclusive=False), data_key="Density"
    )

    @validates_schema()
    def validate_scales(self, data: Dict[str, Any], **kwargs) -> None:  # pylint: disable=unused-argument  # noqa
        """Scales are non-negative."""
        if any(scale < 0 for scale in data.get("scales", [])):
            raise ValidationError({"Scale": ["Scales must be non-negative."]})


class McExperiment(StarlabExperiment):
    """Estimates the expected sup norm of random hyperbolic sums."""

    payload_template_class = McPayloadTemplate
    csv_columns = ["n", "d", "model", "trials", "value", "stderr", "normalized", "certificate", "holds"]

    def execute(self) -> ExperimentOutcome:
        """Runs the estimates, then the fit."""
        payload = self.payload
        d = payload["dimension"]
        records = []

        for n in payload["scales"]:
            if payload["density"] is not None:
                sample = signed_sparse_sup(n, d, payload["density"], seed=payload["seed"], trials=payload["trials"])
                record = sample.to_dict()
                record.update(model="sparse", value=sample.mean, trials=payload["trials"])
            else:
                result = mc_expectation(n, d, payload["trials"], seed=payload["seed"], model=payload["model"])
                record = result.to_dict()
                record["holds"] = result.certificate is None or result.value >= result.certificate
            LOGGER.info(f"[🎲] n={n}, d={d}: mean sup {record['value']:.6g}")
            records.append(record)

        positive = [record for record in records if record["n"] > 0 and record["value"] > 0]
        if len(positive) >= 3:
            fit = exponent_fit([record["n"] for record in positive], [record["value"] for record in positive])
            records.append({"fit": "value ~ C n^exponent", "d": d, "conjectured": d / 2, **fit.to_dict()})
            LOGGER.info(f"[📈] Fitted exponent {fit.exponent:.4g} (r^2 {fit.r_squared:.4g}) against the conjectured {d / 2:g}")

        failed = [record for record in records if record.get("holds") is False]
        if failed:
            return ExperimentOutcome(records=records, passed=False, summary=f"[❌] {len(failed)} estimate(s) fell below the certified floor")
        return ExperimentOutcome(records=records)


@click.command(cls=StarlabExperimentCommand, experiment_class=McExperiment)
@click.option("--d", "dimension", type=int, default=None, help="Dimension (default 2)")
@click.option("--n", "scales", type=str, default=None, help="Scales: '6', '4,6,8' or '4..10'")
@click.option("--trials", type=int, default=None, help="Draws per scale (default 200)")
@click.option("--model", type=click.Choice(COEFFICIENT_MODELS), default=None, help="Coefficient distribution (default signs)")
@click.option("--density", type=float, default=None, help="Draw sparse signed sums with this fraction of nonzero coefficients")
@click.pass_context
def mc(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument,invalid-name
    """Random-sign expectation of the sup norm."""
    run_experiment(ctx)

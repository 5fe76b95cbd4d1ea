"""Starlab's Roth chain report

Evaluates ||D_N||_2 >= <D_N, F_d> / ||F_d||_2 with the sign-optimal dual function F_d, for one point set or a sweep of van der Corput
sizes. A sweep also fits ||D_N||_2 against sqrt(log2 N).

:Module: starlab.experiments.plugins.chain.experiment
"""
import math
from typing import Any, Dict

import click
from click import Context
from marshmallow import ValidationError, validates_schema

from starlab.certificates import chain_verify
from starlab.discrepancy import DiscrepancyField
from starlab.experiments.base_payload_schemas import IntegerSequence, PointSetPayloadTemplate
from starlab.experiments.cli_utils import StarlabExperimentCommand, point_set_options, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.experiments.resolvers import resolve_point_set
from starlab.smallball import DegenerateFitError, linear_fit
from starlab.utils.logging import LOGGER


class ChainPayloadTemplate(PointSetPayloadTemplate):
    """The payload for ChainExperiment. `Sweep` lists van der Corput exponents k to use in place of `K`."""

    scales = IntegerSequence(required=False, load_default=None, allow_none=True, data_key="Scale")
    sweep = IntegerSequence(required=False, load_default=None, allow_none=True, data_key="Sweep")

    @validates_schema()
    def validate_source(self, data: Dict[str, Any], **kwargs) -> None:
        """A sweep stands in for `K` and runs on van der Corput sets only."""
        sweep = data.get("sweep")
        if not sweep:
            super().validate_source(data, **kwargs)
            return

        if data.get("point_set", "vdc") not in ("vdc", "vdc-shifted"):
            raise ValidationError({"Sweep": ["A sweep runs over van der Corput sets (`Set: vdc` or `Set: vdc-shifted`)."]})
        if min(sweep) < 1:
            raise ValidationError({"Sweep": ["Sweep exponents must be positive."]})
        super().validate_source({**data, "k": min(sweep)}, **kwargs)


class ChainExperiment(StarlabExperiment):
    """Reports the L2 chain and whether the certified bound stays below the exact norm."""

    payload_template_class = ChainPayloadTemplate
    csv_columns = ["label", "n_points", "d", "n", "pairing", "dual_l2", "lower_bound", "exact_l2", "holds"]

    def execute(self) -> ExperimentOutcome:
        """Runs the chain at every requested scale of every point set."""
        payload = self.payload
        sweep = payload["sweep"] or [payload["k"]]

        records = []
        for k in sweep:
            pointset = resolve_point_set({**payload, "k": k})
            field = DiscrepancyField(pointset)
            for n in payload["scales"] or [None]:
                report = chain_verify(field, n, raise_on_violation=False)
                records.append({"label": pointset.label, **report.to_dict()})
                LOGGER.debug(f"[⛓️] {pointset.label}: {report.lower_bound:.6g} <= {report.exact_l2:.6g}")

        passed = all(record["holds"] for record in records)
        if payload["sweep"] and len(payload["sweep"]) >= 3:
            try:
                trend = linear_fit([math.sqrt(math.log2(record["n_points"])) for record in records], [record["exact_l2"] for record in records])
                records.append({"label": "trend", "fit": "exact_l2 ~ sqrt(log2 N)", **trend.to_dict()})
            except DegenerateFitError as exc:
                LOGGER.warning(f"[⚠️] No trend fit: {exc}")

        if not passed:
            LOGGER.error("[❌] The L2 chain failed on at least one point set")
            return ExperimentOutcome(records=records, passed=False, summary="[❌] The certified L2 bound exceeded the exact norm")

        LOGGER.info(f"[✅] The L2 chain holds on all {len(sweep)} point set(s)")
        return ExperimentOutcome(records=records)


@click.command(cls=StarlabExperimentCommand, experiment_class=ChainExperiment)
@point_set_options
@click.option("--n", "scales", type=str, default=None, help="Dual-function scales (default ceil(1 + log2 N))")
@click.option("--sweep", type=str, default=None, help="Van der Corput exponents to sweep instead of --k, e.g. '3..10'")
@click.pass_context
def chain(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument
    """The Roth L2 chain report."""
    run_experiment(ctx)

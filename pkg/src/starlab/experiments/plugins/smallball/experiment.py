"""Starlab's small-ball search

min over eps in {-1, 1}^M of ||sum eps_R h_R||_inf at each scale n, by exhaustive scan, branch and bound, local search or Monte Carlo.
Every value is checked against the certified lower bound (the L2 floor, and n + 1 in the plane), and the sequence over the scales is
flagged when it is not nondecreasing.

:Module: starlab.experiments.plugins.smallball.experiment
"""
from typing import Any, Dict, List

import click
from click import Context
from marshmallow import ValidationError, fields, validate, validates_schema

from starlab.experiments.base_payload_schemas import ExperimentPayloadBaseTemplate, IntegerSequence
from starlab.experiments.cli_utils import StarlabExperimentCommand, run_experiment
from starlab.experiments.experiment_schematics import ExperimentOutcome, StarlabExperiment
from starlab.smallball import (
    SEARCH_METHODS,
    FloorViolationError,
    SearchResult,
    branch_and_bound,
    exhaustive_min,
    local_search,
    mc_expectation,
    sign_expectation_exact,
)
from starlab.utils.logging import LOGGER

STOCHASTIC_METHODS = ("local_search", "monte_carlo")


class SmallballPayloadTemplate(ExperimentPayloadBaseTemplate):
    """
    The payload for SmallballExperiment. This looks like:
        Dimension: 3
        Scale: 1..2
        Method: branch_and_bound
        BudgetSeconds: 60
    """

    dimension = fields.Integer(required=False, load_default=2, validate=validate.Range(min=1), data_key="Dimension")
    scales = IntegerSequence(required=True, data_key="Scale")
    method = fields.String(required=False, load_default="exhaustive", validate=validate.OneOf(SEARCH_METHODS), data_key="Method")
    budget_seconds = fields.Float(
        required=False, load_default=None, allow_none=True, validate=validate.Range(min=0, min_inclusive=False), data_key="BudgetSeconds"
    )
    node_limit = fields.Integer(required=False, load_default=None, allow_none=True, validate=validate.Range(min=1), data_key="NodeLimit")
    split_depth = fields.Integer(required=False, load_default=0, validate=validate.Range(min=0), data_key="SplitDepth")
    restarts = fields.Integer(required=False, load_default=8, validate=validate.Range(min=1), data_key="Restarts")
    trials = fields.Integer(required=False, load_default=200, validate=validate.Range(min=1), data_key="Trials")
    expectation = fields.Boolean(required=False, load_default=False, data_key="Expectation")

    @validates_schema()
    def validate_search(self, data: Dict[str, Any], **kwargs) -> None:  # pylint: disable=unused-argument  # noqa
        """Scales are non-negative, and stochastic methods need a seed."""
        errors = {}
        if any(scale < 0 for scale in data.get("scales", [])):
            errors["Scale"] = ["Scales must be non-negative."]
        if data.get("method") in STOCHASTIC_METHODS and data.get("seed") is None:
            errors["Seed"] = [f"A `Seed` is required for `Method: {data.get('method')}`."]

        if errors:
            raise ValidationError(errors)


class SmallballExperiment(StarlabExperiment):
    """Searches for the smallest sup norm of a signed hyperbolic sum."""

    payload_template_class = SmallballPayloadTemplate
    csv_columns = ["n", "d", "method", "value", "status", "proved", "certificate", "stderr", "evaluations", "assignment", "holds"]

    def search(self, n: int) -> SearchResult:
        """One search at scale n."""
        payload = self.payload
        d = payload["dimension"]
        method = payload["method"]

        if method == "exhaustive":
            return exhaustive_min(n, d)
        if method == "branch_and_bound":
            return branch_and_bound(n, d, budget_seconds=payload["budget_seconds"], node_limit=payload["node_limit"], split_depth=payload["split_depth"])
        if method == "local_search":
            return local_search(n, d, restarts=payload["restarts"], seed=payload["seed"])
        return mc_expectation(n, d, payload["trials"], seed=payload["seed"])

    def execute(self) -> ExperimentOutcome:
        """Searches every scale and checks the results against the certified lower bound."""
        payload = self.payload
        records: List[Dict[str, Any]] = []
        failures = []

        for n in payload["scales"]:
            LOGGER.info(f"[🔎] {payload['method']} at n={n}, d={payload['dimension']}...")
            try:
                result = self.search(n)
            except FloorViolationError as exc:
                LOGGER.error(str(exc))
                failures.append(str(exc))
                continue

            record = result.to_dict()
            record["holds"] = result.certificate is None or result.value >= result.certificate
            if not record["holds"]:
                failures.append(f"[❌] {result.method} at n={n}: {result.value} is below the certified lower bound {result.certificate}")
            if payload["expectation"]:
                record["expectation"] = sign_expectation_exact(n, payload["dimension"])
            records.append(record)

        values = [record["value"] for record in records]
        monotone = all(earlier <= later for earlier, later in zip(values, values[1:]))
        if not monotone:
            LOGGER.warning(f"[⚠️] The {payload['method']} values are not nondecreasing in n: {values}")
        for record in records:
            record["monotone"] = monotone

        if failures:
            return ExperimentOutcome(records=records, passed=False, summary="\n".join(failures))

        LOGGER.info(f"[✅] {len(records)} search(es) at or above the certified lower bound")
        return ExperimentOutcome(records=records)


@click.command(cls=StarlabExperimentCommand, experiment_class=SmallballExperiment)
@click.option("--d", "dimension", type=int, default=None, help="Dimension (default 2)")
@click.option("--n", "scales", type=str, default=None, help="Scales: '3', '1,2' or '1..4'")
@click.option("--method", type=click.Choice(SEARCH_METHODS), default=None, help="Search method (default exhaustive)")
@click.option("--budget-seconds", "budget_seconds", type=float, default=None, help="Wall-clock budget of branch_and_bound")
@click.option("--node-limit", "node_limit", type=int, default=None, help="Node budget of branch_and_bound")
@click.option("--split-depth", "split_depth", type=int, default=None, help="Solve the subtrees below this many signs in parallel")
@click.option("--restarts", type=int, default=None, help="Random starts of local_search (default 8)")
@click.option("--trials", type=int, default=None, help="Draws of monte_carlo (default 200)")
@click.option("--expectation", is_flag=True, default=False, help="Also compute E||sum eps_R h_R||_inf exactly by enumeration")
@click.pass_context
def smallball(ctx: Context, **kwargs) -> None:  # noqa # pylint: disable=unused-argument
    """Extremal sign assignments of hyperbolic sums."""
    run_experiment(ctx)

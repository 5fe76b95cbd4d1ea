"""Resolvers that turn payload fields into the objects experiments run on.

:Module: starlab.experiments.resolvers
"""
from typing import Any, Dict

from starlab.discrepancy import DiscrepancyField, l2_norm_exact
from starlab.point_sets import PointSet, best_shift, from_file, random_uniform, shifted_van_der_corput, van_der_corput
from starlab.utils.logging import LOGGER


def resolve_point_set(payload: Dict[str, Any]) -> PointSet:
    """The point set described by a loaded PointSetPayloadTemplate payload."""
    source = payload["point_set"]

    if source == "vdc":
        return van_der_corput(payload["k"])

    if source == "vdc-shifted":
        shift = payload.get("shift")
        if shift is None:
            shift, value = best_shift(payload["k"], lambda pointset: l2_norm_exact(DiscrepancyField(pointset)), count=payload["best_of"], seed=payload["seed"])
            LOGGER.info(f"[🔀] Best of {payload['best_of']} shifts at k={payload['k']}: mask {shift} with ||D_N||_2 = {value:.6g}")
        return shifted_van_der_corput(payload["k"], shift)

    if source == "random":
        return random_uniform(payload["n_points"], payload["dimension"], payload["seed"])

    return from_file(payload["points_file"])

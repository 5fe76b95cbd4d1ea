"""Roth's dual function and the L2 proof chain

F_d = sum over |r| = n of f_r. With the sign-optimal r-functions of a point set, <D_N, F_d> is the sum of all |<D_N, h_R>| at scale
n, the f_r are orthogonal so ||F_d||_2 = sqrt(#shapes), and Cauchy-Schwarz turns the two into a lower bound for ||D_N||_2.

:Module: starlab.certificates.roth
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np

from starlab.discrepancy import DiscrepancyField, l2_norm_exact, lemma1_rfunction
from starlab.dyadic import ShapeVector
from starlab.hyperbolic import HaarExpansion, InvalidExpansionError
from starlab.utils.logging import LOGGER

ROUNDING_SLACK = 1e-9

SignSource = Union[DiscrepancyField, HaarExpansion, Mapping[ShapeVector, np.ndarray], int]


class CertificateViolationError(Exception):
    """Raised when a certified inequality or identity fails beyond rounding."""


def halasz_scale(n_points: int) -> int:
    """n = ceil(1 + log2 N), the scale of the dual functions built for a set of N points."""
    return int(math.ceil(1 + math.log2(n_points)))


def roth_dual(source: SignSource, n: int, d: Optional[int] = None) -> HaarExpansion:
    """F_d = sum of f_r over the shapes of order n.

    The signs come from a discrepancy field (sign-optimal: eps_R = sgn <D_N, h_R>), an expansion (its signs), a mapping from shape to
    sign array, or one sign for every rectangle.
    """
    if isinstance(source, DiscrepancyField):
        d = source.dimension if d is None else d
        if d != source.dimension:
            raise InvalidExpansionError(f"A {source.dimension}-dimensional point set cannot source a {d}-dimensional dual function")
        arrays = {shape: lemma1_rfunction(source, shape).rfunction.signs for shape in ShapeVector.all_of_order(n, d)}
        return HaarExpansion.from_shape_arrays(d, n, arrays)

    if isinstance(source, HaarExpansion):
        return HaarExpansion.from_shape_arrays(source.d, n, {shape: _signs_of(source.coefficients(shape)) for shape in ShapeVector.all_of_order(n, source.d)})

    if d is None:
        raise InvalidExpansionError("The dimension is needed when the signs are given explicitly")

    if isinstance(source, Mapping):
        arrays = {}
        for shape in ShapeVector.all_of_order(n, d):
            if shape not in source:
                raise InvalidExpansionError(f"No signs given for shape {shape.entries}")
            arrays[shape] = _signs_of(np.asarray(source[shape]))
        return HaarExpansion.from_shape_arrays(d, n, arrays)

    if int(source) not in (-1, 1):
        raise InvalidExpansionError(f"A uniform sign must be +1 or -1, got {source}")
    return HaarExpansion.constant_signs(n, d, int(source))


def _signs_of(values: np.ndarray) -> np.ndarray:
    signs = np.sign(values).astype(np.int8)
    signs[signs == 0] = 1
    return signs


@dataclass
class ChainReport:
    """One evaluation of the L2 chain ||D_N||_2 >= <D_N, F_d> / ||F_d||_2."""

    n_points: int
    d: int
    n: int
    pairing: float
    dual_l2: float
    lower_bound: float
    exact_l2: float

    @property
    def holds(self) -> bool:
        """The lower bound does not exceed the exact norm (up to rounding)."""
        return self.lower_bound <= self.exact_l2 * (1 + ROUNDING_SLACK) + ROUNDING_SLACK

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready record."""
        record = asdict(self)
        record["holds"] = self.holds
        return record


def chain_verify(field: DiscrepancyField, n: Optional[int] = None, raise_on_violation: bool = True) -> ChainReport:
    """Evaluates the chain at scale n (default ceil(1 + log2 N)) and checks the lower bound against the exact ||D_N||_2."""
    n = halasz_scale(field.n_points) if n is None else n
    shapes = ShapeVector.all_of_order(n, field.dimension)

    pairing = math.fsum(lemma1_rfunction(field, shape).pairing for shape in shapes)
    dual_l2 = math.sqrt(len(shapes))
    report = ChainReport(field.n_points, field.dimension, n, pairing, dual_l2, pairing / dual_l2, l2_norm_exact(field))

    LOGGER.debug(f"[⛓️] {field!r} at n={n}: <D_N, F> = {pairing:.6g}, bound {report.lower_bound:.6g} <= {report.exact_l2:.6g}")
    if not report.holds and raise_on_violation:
        raise CertificateViolationError(f"[💥] The L2 chain fails for {field!r} at n={n}: {report.lower_bound!r} > {report.exact_l2!r}")

    return report

"""Point configurations in [0,1)^d: generators and text files.

:Module: starlab.point_sets
"""
from starlab.point_sets.point_set import (
    CoordinateOutOfRangeError,
    DimensionInconsistencyError,
    PointSet,
    PointSetError,
    PointSetParseError,
    PointSetSizeError,
)
from starlab.point_sets.generators import best_shift, random_uniform, shifted_van_der_corput, van_der_corput
from starlab.point_sets.files import format_points, from_file, parse_points, to_file

__all__ = [
    "CoordinateOutOfRangeError",
    "DimensionInconsistencyError",
    "PointSet",
    "PointSetError",
    "PointSetParseError",
    "PointSetSizeError",
    "best_shift",
    "random_uniform",
    "shifted_van_der_corput",
    "van_der_corput",
    "format_points",
    "from_file",
    "parse_points",
    "to_file",
]

"""Point-set text files

One point per line, d whitespace-separated decimal coordinates, d taken from the first line. Blank lines are skipped and
coordinates must lie in [0,1). Files are written with 17 significant digits so that reading them back gives the same doubles.

:Module: starlab.point_sets.files
"""
import os
from typing import List, Union

from starlab.point_sets.point_set import CoordinateOutOfRangeError, DimensionInconsistencyError, PointSet, PointSetError, PointSetParseError
from starlab.utils.logging import LOGGER


def parse_points(text: str, label: str = "points") -> PointSet:
    """Parses the text of a point-set file."""
    rows: List[List[float]] = []
    dimension = None
    for line_number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue

        try:
            coordinates = [float(token) for token in tokens]
        except ValueError as exc:
            raise PointSetParseError(f"cannot parse {line.strip()!r} as decimal coordinates", line=line_number) from exc

        if dimension is None:
            dimension = len(coordinates)
        elif len(coordinates) != dimension:
            raise DimensionInconsistencyError(f"expected {dimension} coordinates, found {len(coordinates)}", line=line_number)

        for coordinate in coordinates:
            if not 0.0 <= coordinate < 1.0:
                raise CoordinateOutOfRangeError(f"coordinate {coordinate!r} is outside of [0,1)", line=line_number)

        rows.append(coordinates)

    if not rows:
        raise PointSetError("The point set is empty")

    return PointSet(rows, label=label)


def from_file(path: Union[str, os.PathLike]) -> PointSet:
    """Reads a point-set file."""
    LOGGER.debug(f"[📂] Reading points from {path}...")
    with open(path, "r", encoding="utf-8") as stream:
        return parse_points(stream.read(), label=os.path.basename(str(path)))


def format_points(pointset: PointSet) -> str:
    """The file text of a point set."""
    return "".join(" ".join(f"{coordinate:.17g}" for coordinate in point) + "\n" for point in pointset.points)


def to_file(pointset: PointSet, path: Union[str, os.PathLike]) -> None:
    """Writes a point set so that `from_file` reads back the same doubles."""
    with open(path, "w", encoding="utf-8") as stream:
        stream.write(format_points(pointset))
    LOGGER.debug(f"[💾] Wrote {pointset.n_points} points to {path}")

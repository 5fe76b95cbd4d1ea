"""Tests for the point sets: generators, files and validation.

:Module: starlab.tests.point_sets.test_point_sets
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from starlab.dyadic import ShapeVector
from starlab.point_sets import (
    CoordinateOutOfRangeError,
    DimensionInconsistencyError,
    PointSet,
    PointSetError,
    PointSetParseError,
    PointSetSizeError,
    best_shift,
    format_points,
    from_file,
    parse_points,
    random_uniform,
    shifted_van_der_corput,
    to_file,
    van_der_corput,
)


def test_van_der_corput_small() -> None:
    """The first coordinate is i/N, the second the bit-reversed index."""
    pointset = van_der_corput(2)
    assert pointset.points.tolist() == [[0.0, 0.0], [0.25, 0.5], [0.5, 0.25], [0.75, 0.75]]
    assert pointset.label == "vdc(k=2)"
    assert van_der_corput(0).points.tolist() == [[0.0, 0.0]]

    shifted = shifted_van_der_corput(2, 3)
    assert shifted.label == "vdc(k=2,shift=3)"
    assert shifted.points[:, 1].tolist() == [0.75, 0.25, 0.5, 0.0]


@given(st.integers(min_value=1, max_value=8), st.data())
@settings(max_examples=40, deadline=None)
def test_van_der_corput_is_a_net(k: int, data: st.DataObject) -> None:
    """Every dyadic rectangle of volume 2^-k holds exactly one point, for every digit shift."""
    shift = data.draw(st.integers(min_value=0, max_value=2**k - 1))
    points = shifted_van_der_corput(k, shift).points
    for shape in ShapeVector.all_of_order(k, 2):
        cells = np.floor(points * np.array(shape.grid_shape)).astype(int)
        counts = np.zeros(shape.grid_shape, dtype=int)
        np.add.at(counts, (cells[:, 0], cells[:, 1]), 1)
        assert np.all(counts == 1)


def test_generator_arguments() -> None:
    """Out-of-range sizes and masks are refused."""
    with pytest.raises(PointSetSizeError):
        van_der_corput(21)
    with pytest.raises(PointSetError):
        shifted_van_der_corput(3, 8)
    with pytest.raises(PointSetError):
        random_uniform(0, 2)


def test_random_uniform_is_seeded() -> None:
    """Same seed, same points."""
    first = random_uniform(50, 3, seed=7)
    assert first == random_uniform(50, 3, seed=7)
    assert first != random_uniform(50, 3, seed=8)
    assert first.dimension == 3
    assert len(first) == 50
    assert hash(first) == hash(random_uniform(50, 3, seed=7))


def test_point_set_validation() -> None:
    """Coordinates must lie in [0,1), and arrays must be non-empty."""
    with pytest.raises(CoordinateOutOfRangeError):
        PointSet([[0.5, 1.0]])
    with pytest.raises(CoordinateOutOfRangeError):
        PointSet([[-0.0001, 0.5]])
    with pytest.raises(PointSetError):
        PointSet(np.zeros((0, 2)))

    pointset = PointSet([[0.5, 0.1], [0.2, 0.9]])
    assert pointset.as_sorted().tolist() == [[0.2, 0.9], [0.5, 0.1]]
    with pytest.raises(ValueError):
        pointset.points[0, 0] = 0.3


def test_parse_points_errors() -> None:
    """Malformed files name the offending line."""
    assert parse_points("0.1 0.2\n\n0.3 0.4\n").n_points == 2

    with pytest.raises(PointSetParseError) as exc:
        parse_points("0.1 0.2\n0.3 zero\n")
    assert exc.value.line == 2

    with pytest.raises(DimensionInconsistencyError) as exc:
        parse_points("0.1 0.2\n0.3 0.4\n0.5\n")
    assert exc.value.line == 3

    with pytest.raises(CoordinateOutOfRangeError) as exc:
        parse_points("0.1 1.0\n")
    assert str(exc.value).startswith("line 1:")

    with pytest.raises(PointSetError):
        parse_points("\n   \n")


def test_point_files_keep_every_double(tmp_path) -> None:
    """Files are written with 17 significant digits, so the doubles come back unchanged."""
    pointset = random_uniform(20, 3, seed=11)
    path = tmp_path / "points.txt"
    to_file(pointset, path)

    loaded = from_file(path)
    assert loaded == pointset
    assert loaded.label == "points.txt"
    assert format_points(van_der_corput(1)) == "0 0\n0.5 0.5\n"


def test_best_shift_prefers_smaller_masks_on_ties() -> None:
    """The minimizer is returned with its value; ties go to the smaller mask."""
    mask, value = best_shift(3, lambda pointset: float(pointset.points[:, 1].sum() > 0), masks=[5, 2, 7])
    assert (mask, value) == (2, 1.0)

    mask, value = best_shift(3, lambda pointset: pointset.points[0, 1])
    assert (mask, value) == (0, 0.0)

    with pytest.raises(PointSetError):
        best_shift(3, lambda pointset: 0.0, masks=[])

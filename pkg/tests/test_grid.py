import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from sife.grid import (
    BoundaryPolicy, GridError, Image2D, Signal1D, extend_mirrored, interior, range_stats,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_single_element_mirror():
    assert extend_mirrored(Signal1D([5]), 1).tolist() == [5, 5, 5]


def test_mirror_rule_halo_two():
    # u[-1] = u[0], u[-2] = u[1] and symmetrically at the far end
    assert extend_mirrored(Signal1D([1, 2, 3]), 2).tolist() == [2, 1, 1, 2, 3, 3, 2]


def test_mirror_2d_per_axis():
    img = Image2D(np.arange(12.0).reshape(3, 4))
    ext = extend_mirrored(img, 2)
    assert ext.shape == (7, 8)
    np.testing.assert_array_equal(ext[2:-2, 2:-2], img.values)
    np.testing.assert_array_equal(ext[1, 2:-2], img.values[0])
    np.testing.assert_array_equal(ext[0, 2:-2], img.values[1])
    np.testing.assert_array_equal(ext[2:-2, -1], img.values[:, -2])


@pytest.mark.parametrize("halo", [1, 2])
def test_constant_stays_constant(halo):
    ext = extend_mirrored(Image2D(np.full((3, 5), 7.0)), halo)
    assert np.all(ext == 7.0)


def test_halo_larger_than_array():
    with pytest.raises(GridError):
        extend_mirrored(Signal1D([5]), 2)
    with pytest.raises(GridError):
        extend_mirrored(Signal1D([1, 2]), 3)


def test_input_unmodified():
    s = Signal1D([1.0, 2.0, 3.0])
    ext = extend_mirrored(s, 2)
    ext[:] = 0
    assert s.values.tolist() == [1, 2, 3]
    assert not s.values.flags.writeable


@pytest.mark.parametrize("values, expected", [
    ([0, 1, 0], (0, 1)),
    ([7, 7, 7, 7], (7, 7)),
    ([-3, 2, 5], (-3, 5)),
])
def test_range_stats(values, expected):
    assert range_stats(Signal1D(values)) == expected


def test_container_invariants():
    with pytest.raises(GridError):
        Signal1D([])
    with pytest.raises(GridError):
        Signal1D([1.0, np.nan])
    with pytest.raises(GridError):
        Signal1D([1.0], h=0)
    with pytest.raises(GridError):
        Image2D.from_flat(3, 2, range(5))
    img = Image2D.from_flat(3, 2, range(6))
    assert (img.width, img.height) == (3, 2)
    assert img.values[1].tolist() == [3, 4, 5]
    with pytest.raises(GridError):
        BoundaryPolicy(halo=3)


@given(arrays(np.float64, st.tuples(st.integers(2, 9), st.integers(2, 9)), elements=finite),
       st.sampled_from([1, 2]))
def test_interior_roundtrip_and_range(values, halo):
    img = Image2D(values)
    ext = extend_mirrored(img, halo)
    np.testing.assert_array_equal(interior(ext, halo, 2), values)
    assert range_stats(ext) == range_stats(img)

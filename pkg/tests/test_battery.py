"""Seeded bump-field batteries used by the verification commands."""

import numpy as np
import pytest

from singtool import make_grid
from singtool.battery import (battery, index_to_point, make_bump_field,
                              sample_near_centers)

SPEC = make_grid(2, 8.0, 128)


def test_same_seed_same_field():
    a = make_bump_field(SPEC, 42)
    b = make_bump_field(SPEC, 42)
    assert np.array_equal(a.field.values, b.field.values)
    assert np.array_equal(a.centers, b.centers)


def test_fields_are_mean_zero_unit_l1():
    for bf in battery(SPEC, 7, 4):
        v = bf.field.values
        assert abs(v.sum()) < 1e-10 * np.abs(v).max() * v.size
        assert np.isclose(np.abs(v).sum() * SPEC.cell_volume, 1.0, rtol=1e-12)


def test_battery_seeds_differ():
    fields = battery(SPEC, 0, 3)
    assert [bf.seed for bf in fields] == [0, 1, 2]
    assert not np.array_equal(fields[0].field.values, fields[1].field.values)


def test_samples_land_near_centers():
    bf = make_bump_field(SPEC, 5)
    rng = np.random.default_rng(99)
    pts = sample_near_centers(bf, rng, 50, maxdist=1.5)
    assert len(pts) == 50
    h = SPEC.step
    for ix in pts:
        x = np.asarray(index_to_point(SPEC, ix))
        near = np.abs(bf.centers - x[None, :]).max(axis=1).min()
        assert near <= 1.5 + h  # within the per-axis window of some center


def test_accept_filter_is_honored():
    bf = make_bump_field(SPEC, 5)
    rng = np.random.default_rng(1)
    pts = sample_near_centers(bf, rng, 20, accept=lambda ix: ix[0] % 2 == 0)
    assert all(ix[0] % 2 == 0 for ix in pts)
    with pytest.raises(RuntimeError, match="acceptable sample points"):
        sample_near_centers(bf, rng, 5, accept=lambda ix: False)


def test_index_roundtrip():
    ix = (3, 100)
    pt = index_to_point(SPEC, ix)
    assert SPEC.index_of(pt) == ix

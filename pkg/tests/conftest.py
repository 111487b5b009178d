"""Shared fixtures: the session-scoped fields that are expensive to build."""

import numpy as np
import pytest

from singtool import make_grid, sample_averaged
from singtool.potentials import h_field


@pytest.fixture(scope="session")
def spec256():
    return make_grid(2, 8.0, 256)


@pytest.fixture(scope="session")
def chi_disc(spec256):
    """Unit-disc indicator, cell-mean sampled (midpoint sampling of the jump
    would dominate every error budget downstream)."""

    def chi(x, y):
        return (x * x + y * y < 1.0).astype(float)

    return sample_averaged(chi, spec256, 4)


@pytest.fixture(scope="session")
def h256(spec256):
    # triggers the dim-2 gamma calibration once per session
    return h_field(spec256)

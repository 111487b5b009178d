"""Deterministic test-field batteries shared by the verification commands and
the test suite.

A battery field is a handful of Gaussian bumps with random centers, widths
and signed amplitudes, mean-subtracted and normalized to unit discrete L1
norm.  Normalizing matters: the periodic-box operators carry an image-tail
bias proportional to ||f||_1, and unnormalized fields would let that bias
scale with the draw instead of staying a fixed small floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, GridSpec

BUMPS_PER_FIELD = 6
CENTER_RANGE = 3.0
WIDTH_RANGE = (0.3, 1.2)
AMP_RANGE = (0.5, 1.5)


@dataclass(frozen=True)
class BatteryField:
    field: Field
    centers: np.ndarray  # (BUMPS_PER_FIELD, dim)
    seed: int


def make_bump_field(spec: GridSpec, seed: int) -> BatteryField:
    """One seeded battery field; reproducible for a fixed (spec, seed)."""
    rng = np.random.default_rng(seed)
    meshes = spec.meshes()
    vals = np.zeros(spec.shape)
    centers = np.empty((BUMPS_PER_FIELD, spec.dim))
    for k in range(BUMPS_PER_FIELD):
        c = rng.uniform(-CENTER_RANGE, CENTER_RANGE, size=spec.dim)
        w = rng.uniform(*WIDTH_RANGE)
        a = rng.uniform(*AMP_RANGE) * rng.choice([-1.0, 1.0])
        r2 = sum((m - ci) ** 2 for m, ci in zip(meshes, c))
        vals += a * np.exp(-r2 / w ** 2)
        centers[k] = c
    vals -= vals.mean()
    vals /= np.abs(vals).sum() * spec.cell_volume
    return BatteryField(Field(spec, vals), centers, seed)


def battery(spec: GridSpec, base_seed: int, count: int) -> list[BatteryField]:
    return [make_bump_field(spec, base_seed + k) for k in range(count)]


def sample_near_centers(bf: BatteryField, rng: np.random.Generator, count: int,
                        maxdist: float = 1.5, accept=None,
                        max_tries_per_point: int = 60) -> list[tuple[int, ...]]:
    """Grid indices of points within maxdist (per axis) of a random bump
    center, optionally filtered by accept(index); used to sample where the
    transforms are live rather than in the far-field noise floor."""
    spec = bf.field.spec
    N = spec.points_per_axis
    h = spec.step
    out = []
    tries = 0
    while len(out) < count and tries < count * max_tries_per_point:
        tries += 1
        c = bf.centers[rng.integers(0, len(bf.centers))]
        z = c + rng.uniform(-maxdist, maxdist, size=spec.dim)
        ix = tuple(int(round((zi + spec.half_width) / h)) % N for zi in z)
        if accept is not None and not accept(ix):
            continue
        out.append(ix)
    if len(out) < count:
        raise RuntimeError(
            f"could not find {count} acceptable sample points (got {len(out)})")
    return out


def index_to_point(spec: GridSpec, ix) -> tuple[float, ...]:
    ax = spec.axis()
    return tuple(float(ax[i]) for i in ix)

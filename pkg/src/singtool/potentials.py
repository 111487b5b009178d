"""Auxiliary potentials: the field h whose Riesz transforms reproduce the
exterior Riesz kernel, and the single-layer potential p of the unit sphere
with its logarithmic near-sphere behavior.

h is built spectrally from the identity it must satisfy.  Writing
g_i = chi_{|x|>1} * x_i/|x|^(n+1), the vector field (g_1,...,g_n) is a
gradient, so sum_i R_i(g_i) has Fourier symbol -i*gamma|xi| times the radial
factor of g-hat; applying R_j to h = -(1/gamma^2) sum_i R_i(g_i) then returns
exactly g_j.  The decomposition h = b + c0*p near the sphere is *verified* by
fitting c0 and bounding the remainder, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, GridSpec, sample_averaged
from .spectral import apply_multiplier, MultiplierSpec, calibrate_riesz_constant

_BOUNDARY_KERNEL_TOL = 0.05  # max tolerated |K_i| at the box boundary
_SUBCELL = 4                 # subcell-average factor per axis for sampling g_i


@dataclass(frozen=True)
class SpherePotentialSpec:
    """Surface quadrature for the unit sphere: equally spaced circle nodes at
    n = 2, a Gauss-Legendre (polar) x uniform (azimuth) product rule at n = 3."""

    dim: int
    quadrature_nodes: int

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("sphere potential implemented for dim 2 and 3")
        if self.quadrature_nodes < 8:
            raise ValueError("need at least 8 quadrature nodes")

    def nodes_and_weights(self) -> tuple[np.ndarray, np.ndarray]:
        if self.dim == 2:
            th = 2.0 * np.pi * np.arange(self.quadrature_nodes) / self.quadrature_nodes
            pts = np.stack([np.cos(th), np.sin(th)], axis=1)
            w = np.full(self.quadrature_nodes, 2.0 * np.pi / self.quadrature_nodes)
            return pts, w
        # n = 3: split the node budget ~ evenly between polar and azimuth
        q = max(4, int(np.sqrt(self.quadrature_nodes)))
        mu, gw = np.polynomial.legendre.leggauss(q)  # mu = cos(theta)
        phi = 2.0 * np.pi * np.arange(2 * q) / (2 * q)
        st = np.sqrt(1.0 - mu ** 2)
        pts = np.stack([
            np.outer(st, np.cos(phi)).ravel(),
            np.outer(st, np.sin(phi)).ravel(),
            np.outer(mu, np.ones_like(phi)).ravel(),
        ], axis=1)
        w = np.outer(gw, np.full_like(phi, np.pi / q)).ravel()
        return pts, w


def sphere_distance(x) -> float:
    """d(x) = | |x| - 1 |, the distance to the unit sphere."""
    return abs(float(np.linalg.norm(np.atleast_1d(x))) - 1.0)


def recommended_nodes(d: float) -> int:
    """Node count resolving the near-singularity at sphere distance d."""
    return max(64, int(np.ceil(16.0 / d)))


def p_eval(x, spec: SpherePotentialSpec | None = None) -> float:
    """Single-layer potential of the unit sphere: integral over |y| = 1 of
    |x-y|^(1-n) dsigma(y), by surface quadrature.

    With spec=None the node count follows recommended_nodes(d(x)).  A node
    spacing coarser than d(x)/2 cannot resolve the near-singular integrand
    and raises instead of returning garbage.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    dim = x.size
    d = sphere_distance(x)
    if d <= 0:
        raise ValueError("p is evaluated off the sphere only (d(x) > 0)")
    if spec is None:
        spec = SpherePotentialSpec(dim, recommended_nodes(d))
    elif spec.dim != dim:
        raise ValueError(f"point has dim {dim}, spec has dim {spec.dim}")
    spacing = 2.0 * np.pi / spec.quadrature_nodes if dim == 2 else \
        np.pi / max(4, int(np.sqrt(spec.quadrature_nodes)))
    if spacing > d / 2.0:
        raise ValueError(
            f"node spacing {spacing:.3g} exceeds d(x)/2 = {d / 2:.3g}; "
            f"use at least {recommended_nodes(d)} nodes")
    pts, w = spec.nodes_and_weights()
    dist = np.linalg.norm(pts - x[None, :], axis=1)
    return float(np.sum(w * dist ** (1 - dim)))


# ---------------------------------------------------------------------------

def exterior_kernel_field(spec: GridSpec, axis: int) -> Field:
    """chi_{|x|>1} * x_axis/|x|^(n+1), sampled by cell means (the field jumps
    at the unit sphere, where midpoint sampling would dominate the residual)."""
    n = spec.dim

    def masked_kernel(*pts):
        r = np.sqrt(sum(p * p for p in pts))
        rpow = np.where(r > 0, r, 1.0) ** (n + 1)
        return np.where(r > 1.0, pts[axis - 1] / rpow, 0.0)

    return sample_averaged(masked_kernel, spec, _SUBCELL)


def h_field(spec: GridSpec, gamma: float | None = None) -> Field:
    """The function h with riesz(h, j) = exterior Riesz kernel on axis j."""
    if spec.dim not in (2, 3):
        raise ValueError("h_field requires dim 2 or 3")
    boundary_kernel = spec.half_width ** (-spec.dim)
    if boundary_kernel > _BOUNDARY_KERNEL_TOL:
        raise ValueError(
            f"box too small: |K| ~ {boundary_kernel:.3g} at the boundary "
            f"(tolerance {_BOUNDARY_KERNEL_TOL}); enlarge half_width")
    if gamma is None:
        gamma = calibrate_riesz_constant(spec.dim)
    acc = np.zeros(spec.shape, dtype=complex)
    for j in range(1, spec.dim + 1):
        g = exterior_kernel_field(spec, j)
        m = MultiplierSpec(spec.dim, "riesz", axis=j, normalization=gamma)
        acc += apply_multiplier(g, m).values
    return Field(spec, (-acc / gamma ** 2).real)


def decay_product(h: Field, r_lo: float = 2.0, r_hi: float | None = None) -> float:
    """max of |h(x)| * |x|^(n+1) over the annulus r_lo <= |x| <= r_hi."""
    spec = h.spec
    if r_hi is None:
        r_hi = spec.half_width / 2.0
    r = spec.radius()
    sel = (r >= r_lo) & (r <= r_hi)
    if not np.any(sel):
        raise ValueError("empty annulus")
    return float((np.abs(h.values) * r ** (spec.dim + 1))[sel].max())


def fit_c0_and_bound_b(h: Field, d_max: float = 0.3) -> tuple[float, float]:
    """Fit h = c0*p + (bounded) near the sphere; return (c0, sup|h - c0*p|).

    Least squares over grid points with d(x) in [2 cells, d_max], with an
    intercept column so the bounded part does not bias c0; the returned
    b_sup is measured on the same window without the intercept.
    """
    spec = h.spec
    if spec.dim != 2:
        raise ValueError("c0 fit implemented for dim 2")
    r = spec.radius()
    d = np.abs(r - 1.0)
    sel = (d >= 2 * spec.step) & (d <= d_max)
    rho = r[sel]
    hv = h.values[sel].real
    p = np.array([p_eval((x, 0.0)) for x in rho])
    if p.std() < 1e-6 * abs(p.mean()):
        raise ValueError("p nearly constant on the fit window; fit ill-conditioned")
    A = np.stack([p, np.ones_like(p)], axis=1)
    coef, *_ = np.linalg.lstsq(A, hv, rcond=None)
    c0 = float(coef[0])
    b_sup = float(np.abs(hv - c0 * p).max())
    return c0, b_sup

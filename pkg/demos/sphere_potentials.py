#!/usr/bin/env python3
"""Surface potentials of the unit sphere and the bounded field h.

p(x) integrates |x - y|^(-n+...) type kernels over the sphere; on the
radial line both the planar and spatial cases reduce to closed forms
(a complete elliptic integral in 2-D, a logarithm in 3-D), which makes
them a sharp end-to-end check of the quadrature.  The second half
evaluates the combined field h, its far-field decay, and the constant
split h = c0 + b near the sphere.
"""
import math

import numpy as np

from singtool import (SpherePotentialSpec, decay_product, fit_c0_and_bound_b,
                      h_field, make_grid, p_eval)


def ellipk_agm(k):
    # complete elliptic integral K(k) by the arithmetic-geometric mean
    a, b = 1.0, math.sqrt(1.0 - k * k)
    for _ in range(60):
        if a == b:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def p2d_closed(r):
    return 4.0 / (r + 1.0) * ellipk_agm(2.0 * math.sqrt(r) / (r + 1.0))


def p3d_closed(r):
    return (2.0 * math.pi / r) * math.log((r + 1.0) / (r - 1.0))


def main():
    print("2-D circle potential on the radial line (vs elliptic closed form)")
    for r in (0.6, 1.5, 3.0):
        got = p_eval((r, 0.0))
        want = p2d_closed(r)
        print(f"  R={r:3.1f}: p={got:.12f}  closed={want:.12f}  "
              f"rel={abs(got - want) / want:.2e}")

    print("\n3-D sphere potential (vs logarithmic closed form, exterior only)")
    spec3 = SpherePotentialSpec(dim=3, quadrature_nodes=512)
    for r in (1.5, 2.0, 4.0):
        got = p_eval((r, 0.0, 0.0), spec3)
        want = p3d_closed(r)
        print(f"  R={r:3.1f}: p={got:.10f}  closed={want:.10f}  "
              f"rel={abs(got - want) / want:.2e}")

    print("\nbounded field h on a 512^2 grid")
    h = h_field(make_grid(2, 8.0, 512))
    c0, b_sup = fit_c0_and_bound_b(h)
    print(f"  sup |h| * |x|^3 over 2 <= |x| <= L/2: {decay_product(h):.6f}")
    print(f"  constant part c0 near the sphere:     {c0:.6f}")
    print(f"  sup of the bounded remainder b:       {b_sup:.6f}")


if __name__ == "__main__":
    main()

"""The growth experiment: source construction, sweep records, and the fit."""

import math

import numpy as np
import pytest

from singtool import DipoleSource, build_f_eps, fit_log_growth, make_grid, run_sweep
from singtool.counterexample import SweepRecord, default_sweep_ladder


def test_source_validation():
    spec = make_grid(2, 8.0, 512)
    src = DipoleSource(0.125, spec)
    assert src.a == (-1.0, 0.0) and src.b == (1.0, 0.0)
    with pytest.raises(ValueError):
        DipoleSource(1.5, spec)
    with pytest.raises(ValueError, match="half_width"):
        DipoleSource(0.125, make_grid(2, 2.0, 128))


def test_build_f_eps_is_a_field():
    spec = make_grid(2, 8.0, 512)
    f = build_f_eps(DipoleSource(0.125, spec))
    assert f.spec == spec
    assert abs(np.asarray(f.values).sum()) * spec.cell_volume < 1e-8


def test_default_ladder_covers_endpoint_band():
    lad = default_sweep_ladder(0.1)
    assert lad.radii[0] == 0.2  # 2*eps
    assert lad.radii[-1] < 6.8
    # the union keeps every gap in [3.5, 6.8) at eps/2 or finer
    radii = np.asarray(lad.radii)
    band = radii[(radii >= 3.5) & (radii < 6.8)]
    assert len(band) >= 66
    assert np.all(np.diff(band) <= 0.05 + 1e-12)


def test_sweep_skips_unresolvable_eps():
    recs = run_sweep([0.01], max_points_per_axis=1024)
    assert len(recs) == 1 and not recs[0].usable
    assert "points per axis" in recs[0].skip_reason
    with pytest.raises(ValueError, match="usable"):
        fit_log_growth(recs)


def test_sweep_record_frozen_at_eps_02():
    """One resolved point of the experiment, pinned: both engines, the exact
    budget, and the self-skip of the pointwise window at this scale."""
    recs = run_sweep([0.2])
    r = recs[0]
    assert r.grid_points == 320
    assert np.isclose(r.l1_of_R1f, 2.0, atol=1e-9)
    assert np.isclose(r.weak_quasinorm_of_R1star, 0.7694314404845536, rtol=1e-9)
    assert np.isclose(r.max_rstar, 0.18561547984068766, rtol=1e-9)
    assert "argmax refinement" in r.lambda_note
    assert "exclusion discs" in r.eval_note
    assert r.spot_check is not None and "skipped" in r.spot_check
    # numpy fallback engine must agree bit for bit
    r2 = run_sweep([0.2], use_numba=False)[0]
    assert r2.weak_quasinorm_of_R1star == r.weak_quasinorm_of_R1star
    assert r2.max_rstar == r.max_rstar


def test_sweep_progress_callback():
    seen = []
    run_sweep([0.2], progress=seen.append)
    assert len(seen) == 1 and seen[0].usable


def _fake_records(slope, intercept, eps_list):
    out = []
    for eps in eps_list:
        out.append(SweepRecord(
            eps=eps, grid_points=0, l1_of_R1f=2.0,
            weak_quasinorm_of_R1star=slope * math.log(1 / eps) + intercept,
            sup_lambda=0.0, max_rstar=0.0, ladder_note="", lambda_note="",
            eval_note="", runtime_s=0.0))
    return out


def test_fit_recovers_exact_log_data():
    recs = _fake_records(0.3, 0.7, [0.125, 0.0625, 0.03125, 0.015625])
    a, b, r2 = fit_log_growth(recs)
    assert np.isclose(a, 0.3, rtol=1e-12)
    assert np.isclose(b, 0.7, rtol=1e-12)
    assert r2 > 1.0 - 1e-12


def test_fit_needs_four_points():
    with pytest.raises(ValueError, match="at least 4"):
        fit_log_growth(_fake_records(0.3, 0.7, [0.125, 0.0625, 0.03125]))


def test_fit_rejects_degenerate_data():
    with pytest.raises(ValueError, match="degenerate"):
        fit_log_growth(_fake_records(0.0, 1.0, [0.125, 0.0625, 0.03125, 0.015625]))

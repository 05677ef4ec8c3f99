import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_asymptotic.errors import BranchAmbiguous, IllConditioned, NonHyperbolic, StepUnderflow
from clifford_asymptotic.flow import (Branch, IntegratorOptions, LiftedCurve, branch_slope,
                                      extrapolate_to_zero, integrate_line, poincare1, poincare2,
                                      quad_coeff_extract, richardson_quad_coeff, translation_number)
from clifford_asymptotic.surface import zero_h

TWO_PI = 2 * math.pi
QUAD = -12 * math.pi


def test_branch_slope_clifford():
    assert branch_slope(0.0, 1.0, 0.0, Branch.FIRST) == 0.0
    assert branch_slope(0.0, 1.0, 0.0, Branch.SECOND) == 0.0


def test_branch_slope_diagonal_point():
    m = branch_slope(0.4, 0.6, 0.4, Branch.FIRST)
    assert m == pytest.approx(-0.4 / (0.6 + math.sqrt(0.2)), rel=1e-15)
    assert m == pytest.approx(-0.381966, abs=1e-6)


@settings(max_examples=300, deadline=None)
@given(st.floats(-0.5, 0.5), st.floats(0.2, 3.0) | st.floats(-3.0, -0.2), st.floats(-0.5, 0.5))
def test_root_residual(e, f, g):
    if f * f - e * g <= 0:
        return
    m = branch_slope(e, f, g, Branch.FIRST)
    assert abs(g * m * m + 2 * f * m + e) <= 1e-10 * (abs(e) + abs(f * m) + abs(g * m * m) + 1e-300)
    n = branch_slope(e, f, g, Branch.SECOND)
    assert abs(e * n * n + 2 * f * n + g) <= 1e-10 * (abs(g) + abs(f * n) + abs(e * n * n) + 1e-300)


def test_branch_slope_errors():
    with pytest.raises(NonHyperbolic):
        branch_slope(1.0, 0.5, 1.0, Branch.FIRST)
    with pytest.raises(BranchAmbiguous):
        branch_slope(1.0, 0.0, -1.0, Branch.FIRST)


@pytest.mark.parametrize("branch", [Branch.FIRST, Branch.SECOND])
def test_unperturbed_lines_close(h, branch):
    w0 = 0.7
    u0, v0 = (0.0, w0) if branch is Branch.FIRST else (w0, 0.0)
    c = integrate_line(u0, v0, branch, 0.0, h, TWO_PI)
    assert c.final == w0
    assert np.all(np.diff(c.t) > 0)


def test_poincare_identity_at_zero(h):
    assert poincare1(1.3, 0.0, h) == 1.3
    assert poincare2(1.3, 0.0, h) == 1.3


def test_curve_invariants(h):
    opts = IntegratorOptions()
    c = integrate_line(0.0, 0.3, Branch.FIRST, 0.02, h, TWO_PI, opts)
    assert np.all(np.diff(c.t) > 0)
    assert np.max(np.diff(c.t)) <= opts.max_step + 1e-15
    assert c.max_branch_jump < 0.5
    assert c.t[-1] == pytest.approx(TWO_PI, abs=1e-14)


def test_drift_at_002(h):
    # higher-order terms are ~1e-3 here; bound them by a fifth of the eps^2 term
    eps = 0.02
    d = poincare1(0.3, eps, h) - 0.3
    assert abs(d - QUAD * eps**2) < 0.2 * abs(QUAD) * eps**2
    assert poincare2(0.3, eps, h) - 0.3 == pytest.approx(d, abs=1e-9)


def test_drift_per_eps2_converges(h):
    vals = [(poincare1(0.3, e, h) - 0.3) / e**2 for e in (0.02, 0.01, 0.005, 0.0025)]
    errs = [abs(x - QUAD) for x in vals]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.005 * abs(QUAD)


def test_displacement_uniform_in_v0(h):
    grid = np.linspace(0, TWO_PI, 8, endpoint=False)
    spreads = []
    for eps in (0.01, 0.005):
        d = [poincare1(v0, eps, h) - v0 for v0 in grid]
        spreads.append(np.ptp(d))
    # spread is O(eps^3), so halving eps shrinks it ~8x
    assert spreads[0] < 0.1 * abs(QUAD) * 0.01**2
    assert spreads[0] / spreads[1] > 5


def test_reversal(h):
    opts = IntegratorOptions()
    fwd = integrate_line(0.0, 0.9, Branch.FIRST, 0.03, h, TWO_PI, opts)
    back = integrate_line(TWO_PI, fwd.final, Branch.FIRST, 0.03, h, -TWO_PI, opts)
    assert abs(back.final - 0.9) < 10 * opts.rtol * 10


def test_halving_tolerance_is_consistent(h):
    opts = IntegratorOptions()
    a = poincare1(0.5, 0.02, h, opts)
    b = poincare1(0.5, 0.02, h, opts.halved())
    assert abs(a - b) < 1e-8


def test_jet_and_closed_coefficients_agree(h):
    a = poincare1(0.5, 0.02, h, IntegratorOptions(coefficients="closed"))
    b = poincare1(0.5, 0.02, h, IntegratorOptions(coefficients="jet", rtol=1e-10, atol=1e-10))
    assert abs(a - b) < 1e-8


def test_non_hyperbolic_reports_last_state(h):
    with pytest.raises(NonHyperbolic) as info:
        integrate_line(0.0, 0.3, Branch.FIRST, 0.1, h, TWO_PI)
    err = info.value
    assert err.t is not None and 0 <= err.t < TWO_PI
    assert err.curve.t[-1] == err.t


def test_step_underflow(h):
    with pytest.raises(StepUnderflow):
        integrate_line(0.0, 0.3, Branch.FIRST, 0.02, h, TWO_PI, IntegratorOptions(min_step=0.1))


def test_dense_output_and_refinement(h):
    coarse = integrate_line(0.0, 0.3, Branch.FIRST, 0.02, h, TWO_PI)
    fine = integrate_line(0.0, 0.3, Branch.FIRST, 0.02, h, TWO_PI, IntegratorOptions(interp_tol=1e-7))
    ref = integrate_line(0.0, 0.3, Branch.FIRST, 0.02, h, TWO_PI, IntegratorOptions(max_step=0.002))
    assert len(fine.t) > len(coarse.t)
    lin_coarse = np.max(np.abs(np.interp(ref.t, coarse.t, coarse.w) - ref.w))
    lin_fine = np.max(np.abs(np.interp(ref.t, fine.t, fine.w) - ref.w))
    hermite = np.max(np.abs(coarse.interpolate(ref.t) - ref.w))
    assert lin_coarse > 1e-5
    assert lin_fine < 5e-7
    assert hermite < 5e-7
    assert np.allclose(coarse.interpolate(coarse.t), coarse.w)


def test_curve_csv_round_trip(h, tmp_path):
    c = integrate_line(0.0, 0.3, Branch.FIRST, 0.02, h, TWO_PI)
    path = tmp_path / "line.csv"
    c.to_csv(path)
    assert path.read_text().splitlines()[0] == "t,w"
    t, w = LiftedCurve.read_csv(path)
    assert np.array_equal(t, c.t) and np.array_equal(w, c.w)


def test_translation_number_zero():
    est = translation_number(Branch.FIRST, 0.0, zero_h(), 3)
    assert est.value == 0.0
    assert est.error_bar == pytest.approx(TWO_PI / 3)


def test_translation_number_within_displacement_bounds(h):
    grid = np.linspace(0, math.pi / 2, 16, endpoint=False)
    d = [poincare1(v0, 0.05, h) - v0 for v0 in grid]
    rho = translation_number(Branch.FIRST, 0.05, h, 20).value
    assert min(d) - 1e-9 <= rho <= max(d) + 1e-9
    # O(eps^3) slack is large at 0.05; the small-eps ratio is what converges
    assert rho / (QUAD * 0.05**2) == pytest.approx(1.0, abs=0.35)
    small = translation_number(Branch.FIRST, 0.005, h, 10).value
    assert small / (QUAD * 0.005**2) == pytest.approx(1.0, abs=0.01)


@pytest.mark.slow
def test_translation_number_conjugacy(h):
    a = translation_number(Branch.FIRST, 0.03, h, 50)
    b = translation_number(Branch.SECOND, 0.03, h, 50)
    assert abs(a.value - b.value) < 1e-4


def test_richardson_exact_quadratic():
    eps = np.array([0.02, 0.01, 0.005])
    A, B, err = richardson_quad_coeff(eps, QUAD * eps**2)
    assert A[0] == pytest.approx(QUAD, rel=1e-13)
    assert abs(B[0]) < 1e-9 and err[0] < 1e-9


def test_richardson_cubic_model():
    eps = np.array([0.02, 0.01, 0.005])
    Bt = 55.0
    A, B, err = richardson_quad_coeff(eps, QUAD * eps**2 + Bt * eps**3)
    assert A[0] == pytest.approx(QUAD, rel=1e-12)
    assert B[0] == pytest.approx(Bt, rel=1e-9)
    # two-point Richardson (A + B eps through the finest rungs) is already exact here
    assert err[0] < 1e-9
    A2, _, err2 = richardson_quad_coeff(eps, QUAD * eps**2 + Bt * eps**3 + 4000 * eps**4)
    assert A2[0] == pytest.approx(QUAD, rel=1e-10)
    assert err2[0] == pytest.approx(4000 * 0.01 * 0.005, rel=1e-6)


def test_extrapolation_ill_conditioned():
    with pytest.raises(IllConditioned):
        extrapolate_to_zero([0.02, 0.0199999, 0.0199998], [1.0, 2.0, 3.0])
    with pytest.raises(IllConditioned):
        extrapolate_to_zero([0.02, 0.02, 0.01], [1.0, 2.0, 3.0])


def test_quad_coeff_extract_report(h):
    grid = [k * math.pi / 16 for k in range(8)]
    rep = quad_coeff_extract([0.02, 0.01, 0.005], grid, h)
    assert rep.displacements.shape == (3, 8)
    assert np.all(np.abs(rep.quad_coeff_per_v0 / QUAD - 1) < 0.01)
    assert rep.quad_coeff_err >= 0
    d = rep.to_dict()
    assert d["quad_coeff"] == pytest.approx(QUAD, rel=0.01)
    with pytest.raises(IllConditioned):
        quad_coeff_extract([0.02, 0.01], grid, h)

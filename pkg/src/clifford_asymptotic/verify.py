"""Reproduction checks for the Clifford-torus asymptotic-line results.

Each check returns a :class:`CheckResult`; :func:`run_all` runs them in
order. No unseeded randomness: sample points come from a fixed seed.
"""

import math
import tempfile
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .export import endpoint_gap, export_lines, torus_mesh
from .flow import Branch, quad_coeff_extract, translation_number
from .forms import (fundamental_forms, hyperbolicity_scan, k_ext, projective_distance,
                    second_form, second_form_closed)
from .linalg4 import normalize, wedge3
from .surface import clifford_jet, clifford_normal, paper_h, perturbed_jet, zero_h
from .variational import cross_validate, paper_family, period_defects

SEED = 20080501
LADDER = (0.02, 0.01, 0.005)
QUAD_TARGET = -12.0 * math.pi
DEFECT2_TARGET = -24.0 * math.pi


def v0_grid(n=8):
    """n starts over one period (pi/2) of the return-map displacement."""
    return [k * (math.pi / 2) / n for k in range(n)]


@dataclass
class CheckResult:
    key: str
    label: str
    passed: bool
    value: float
    target: float
    tol: float
    seconds: float
    budget: float
    detail: str = ""

    def line(self):
        status = "pass" if self.passed else "FAIL"
        head = f"{self.label} ({status})"
        return (f"{self.key:>3}  {head:<42}  value={self.value:.6g}  "
                f"target={self.target:.6g}  tol={self.tol:.3g}  {self.seconds:.2f}s/{self.budget:g}s"
                + (f"  {self.detail}" if self.detail else ""))


def _random_points(n=100):
    rng = np.random.default_rng(SEED)
    return rng.uniform(0.0, 2.0 * np.pi, size=(2, n))


def _grid(n):
    t = 2.0 * np.pi * np.arange(n) / n
    return np.meshgrid(t, t, indexing="ij")


def check_clifford_exactness(scale=1.0):
    tol = 1e-12 * scale
    u, v = _random_points()
    fp = fundamental_forms(clifford_jet(u, v))
    got = np.stack([fp.E, fp.F, fp.G, fp.e, fp.f, fp.g, k_ext(fp)])
    want = np.array([1, 0, 1, 0, 1, 0, -1.0])[:, None]
    err = float(np.max(np.abs(got - want)))
    return err <= tol, err, 0.0, tol, ""


def check_normal_formula(scale=1.0):
    tol = 1e-12 * scale
    u, v = _random_points()
    j = clifford_jet(u, v)
    err = float(np.max(np.abs(normalize(wedge3(j.p, j.p_u, j.p_v)) - clifford_normal(u, v))))
    return err <= tol, err, 0.0, tol, ""


def check_second_form_closed(scale=1.0):
    tol = 1e-8 * scale
    h = paper_h()
    U, V = _grid(32)
    worst = 0.0
    for eps in (0.01, 0.05):
        jet = np.array(second_form(perturbed_jet(U, V, eps, h)))
        closed = np.array(second_form_closed(U, V, eps, h))
        worst = max(worst, float(projective_distance(jet, closed)))
    return worst <= tol, worst, 0.0, tol, "eps in {0.01, 0.05}, 32x32"


def check_symmetry(scale=1.0):
    tol = 1e-10 * scale
    h = paper_h()
    U, V = _grid(32)
    e, f, g = second_form_closed(U, V, 0.05, h)
    eT, fT, _ = second_form_closed(V, U, 0.05, h)
    err = float(max(np.max(np.abs(e - eT)), np.max(np.abs(e - g)), np.max(np.abs(f - fT))))
    return err <= tol, err, 0.0, tol, ""


def check_defect1(scale=1.0):
    tol = 1e-8 * scale
    fam = paper_family(paper_h())
    d = [period_defects(fam, v0)[0] for v0 in v0_grid()]
    err = float(np.max(np.abs(d)))
    return err <= tol, err, 0.0, tol, "8 values of v0"


def check_defect2(scale=1.0):
    tol = 5e-3 * scale
    fam = paper_family(paper_h())
    d = np.array([period_defects(fam, v0)[1] for v0 in v0_grid()])
    rel = np.abs(d / DEFECT2_TARGET - 1.0)
    worst = float(d[np.argmax(rel)])
    return bool(np.all(rel <= tol)), worst, DEFECT2_TARGET, tol, "relative, 8 values of v0"


def check_quad_coeff(scale=1.0):
    tol = 1e-2 * scale
    rep = quad_coeff_extract(LADDER, v0_grid(), paper_h())
    rel = np.abs(rep.quad_coeff_per_v0 / QUAD_TARGET - 1.0)
    worst = float(rep.quad_coeff_per_v0[np.argmax(rel)])
    return (bool(np.all(rel <= tol)), worst, QUAD_TARGET, tol,
            f"relative, per-v0 spread={rep.spread:.3g}, residual={rep.quad_coeff_err:.3g}")


def check_oracle_slope(scale=1.0):
    tol = 0.3 * scale
    rep = cross_validate(LADDER, v0_grid(), paper_h())
    ok = abs(rep.slope - 3.0) <= tol
    return ok, rep.slope, 3.0, tol, "RMS residual over v0 grid"


def check_conjugacy(scale=1.0):
    tol = 1e-4 * scale
    h = paper_h()
    t1 = translation_number(Branch.FIRST, 0.03, h, 50)
    t2 = translation_number(Branch.SECOND, 0.03, h, 50)
    err = abs(t1.value - t2.value)
    return err <= tol, err, 0.0, tol, f"rho1={t1.value:.8g} rho2={t2.value:.8g}"


def check_monotone(scale=1.0):
    h = paper_h()
    vals = [translation_number(Branch.FIRST, eps, h, 20).value for eps in (0.02, 0.04, 0.06)]
    gaps = np.diff(vals)
    return bool(np.all(gaps < 0)), float(np.max(gaps)), 0.0, 0.0, "rho at eps=0.02,0.04,0.06: " + ", ".join(f"{x:.6g}" for x in vals)


def check_hyperbolicity(scale=1.0):
    h = paper_h()
    ok_rep = hyperbolicity_scan(0.05, h, 64)
    bad_rep = hyperbolicity_scan(0.1, h, 64)
    spacing = 2.0 * np.pi / 64
    d = abs(bad_rep.argmin_u - bad_rep.argmin_v) % (2.0 * np.pi)
    near_diag = min(d, 2.0 * np.pi - d) <= spacing
    ok = ok_rep.hyperbolic and not bad_rep.hyperbolic and near_diag
    return ok, bad_rep.min_value, 1.0 - 16 * 0.1, 0.0, f"min at eps=0.05: {ok_rep.min_value:.6g}"


def check_figures(scale=1.0):
    tol = 1e-6 * scale
    h0 = zero_h()
    with tempfile.TemporaryDirectory() as tmp:
        starts = [(0.0, k * 2 * math.pi / 6) for k in range(6)]
        lines = export_lines(0.0, h0, Branch.FIRST, starts, 2 * math.pi, Path(tmp) / "villarceau.csv")
    gap = max(endpoint_gap(x) for x in lines)
    mesh = torus_mesh(2.0 / 3.0, paper_h(), 128, allow_large_eps=True)
    finite = bool(np.all(np.isfinite(mesh.vertices)))
    return gap <= tol and finite, gap, 0.0, tol, f"eps=2/3 mesh finite={finite}"


CHECKS = [
    ("1", "clifford forms exact", check_clifford_exactness, 1.0),
    ("2", "normal formula", check_normal_formula, 1.0),
    ("3", "closed second form cross-check", check_second_form_closed, 5.0),
    ("4", "second form symmetry", check_symmetry, 2.0),
    ("5", "defect1 = 0", check_defect1, 1.0),
    ("6", "defect2 = −24π", check_defect2, 2.0),
    ("7", "quad_coeff = −12π", check_quad_coeff, 30.0),
    ("8", "oracle residual slope = 3", check_oracle_slope, 30.0),
    ("9", "rho1 = rho2 (conjugacy)", check_conjugacy, 60.0),
    ("10", "rho decreasing in eps", check_monotone, 60.0),
    ("11", "hyperbolicity boundary", check_hyperbolicity, 5.0),
    ("12", "figure export smoke", check_figures, 10.0),
]


def run_check(key, scale=1.0):
    for k, label, fn, budget in CHECKS:
        if k == key:
            t = time.perf_counter()
            passed, value, target, tol, detail = fn(scale)
            return CheckResult(k, label, bool(passed), float(value), float(target),
                               float(tol), time.perf_counter() - t, budget, detail)
    raise KeyError(key)


def run_all(scale=1.0, only=None, progress=None):
    results = []
    for key, *_ in CHECKS:
        if only and key not in only:
            continue
        res = run_check(key, scale)
        if progress:
            progress(res)
        results.append(res)
    return results


def report_dict(results):
    by_key = {r.key: r for r in results}
    out = {"checks": [asdict(r) for r in results], "pass": all(r.passed for r in results)}
    if "5" in by_key:
        out["defect1"] = by_key["5"].value
    if "6" in by_key:
        out["defect2"] = by_key["6"].value
    if "7" in by_key:
        out["quad_coeff"] = by_key["7"].value
        out["quad_coeff_target"] = QUAD_TARGET
    return out

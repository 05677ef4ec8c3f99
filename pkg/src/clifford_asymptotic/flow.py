"""Asymptotic lines as solutions of e du^2 + 2f du dv + g dv^2 = 0.

The First branch is a graph v(u) that reduces to v = const on the Clifford
torus, the Second branch a graph u(v) reducing to u = const. Dependent
coordinates are carried as lifts to R and never reduced mod 2pi.
"""

import csv
import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import RK45
from scipy.interpolate import CubicHermiteSpline

from .errors import BranchAmbiguous, IllConditioned, NonHyperbolic, StepUnderflow
from .forms import second_form, second_form_closed
from .surface import perturbed_jet

TWO_PI = 2.0 * math.pi


class Branch(enum.Enum):
    FIRST = 1
    SECOND = 2

    @classmethod
    def from_arg(cls, value):
        if isinstance(value, cls):
            return value
        return cls(int(value))


@dataclass
class IntegratorOptions:
    """Settings for the adaptive Dormand-Prince 4(5) integration.

    ``coefficients`` selects the second-form source: ``"closed"`` for the
    polynomial-in-eps expressions, ``"jet"`` for determinants of the
    analytic 2-jet.
    """

    rtol: float = 1e-10
    atol: float = 1e-10
    max_step: float = 0.05
    min_step: float = 1e-12
    interp_tol: float | None = None
    coefficients: str = "closed"

    def halved(self):
        return IntegratorOptions(self.rtol / 2, self.atol / 2, self.max_step,
                                 self.min_step, self.interp_tol, self.coefficients)


def coefficients_at(u, v, eps, h, source="closed"):
    if source == "closed":
        return second_form_closed(u, v, eps, h)
    if source == "jet":
        e, f, g = second_form(perturbed_jet(u, v, eps, h))
        return float(e), float(f), float(g)
    raise ValueError(f"unknown coefficient source {source!r}")


def branch_slope(e, f, g, branch):
    """Small root of the asymptotic quadratic for the given branch.

    First: dv/du = -e / (f + sign(f) sqrt(f^2 - eg)).
    Second: du/dv = -g / (f + sign(f) sqrt(f^2 - eg)).
    """
    disc = f * f - e * g
    if not disc > 0.0:
        raise NonHyperbolic(f"f^2 - eg = {disc:.6g} <= 0")
    if f == 0.0:
        raise BranchAmbiguous("f = 0: branch selection by sign(f) undefined")
    num = e if branch is Branch.FIRST else g
    return -num / (f + math.copysign(math.sqrt(disc), f))


def root_separation(e, f, g, branch):
    """Distance between the two roots of the branch's quadratic (inf if linear)."""
    lead = g if branch is Branch.FIRST else e
    if lead == 0.0:
        return math.inf
    return 2.0 * math.sqrt(max(f * f - e * g, 0.0)) / abs(lead)


@dataclass
class LiftedCurve:
    """Samples (t, w) of an asymptotic line; t is u for the First branch and
    v for the Second, w the other coordinate. Both are lifts.

    ``slopes`` holds dw/dt at each sample. ``max_branch_jump`` is the largest
    per-step |dm| relative to the separation between the two roots.
    """

    t: np.ndarray
    w: np.ndarray
    slopes: np.ndarray
    branch: Branch
    eps: float
    max_branch_jump: float = 0.0

    @property
    def final(self):
        return float(self.w[-1])

    def uv(self):
        if self.branch is Branch.FIRST:
            return self.t, self.w
        return self.w, self.t

    def interpolate(self, t):
        """Cubic Hermite dense output between accepted steps."""
        t0, w0, m0 = self.t, self.w, self.slopes
        if t0[-1] < t0[0]:
            t0, w0, m0 = t0[::-1], w0[::-1], m0[::-1]
        return CubicHermiteSpline(t0, w0, m0)(t)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write("t,w\n")
            for t, w in zip(self.t, self.w):
                fh.write(f"{t:.17g},{w:.17g}\n")

    @staticmethod
    def read_csv(path):
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if rows[0] != ["t", "w"]:
            raise ValueError(f"{path}: expected header 't,w'")
        data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
        return data[:, 0], data[:, 1]


def _refine(t, w, m, tol):
    ts, ws, ms = [t[:1]], [w[:1]], [m[:1]]
    spline = CubicHermiteSpline(*((t, w, m) if t[-1] > t[0] else (t[::-1], w[::-1], m[::-1])))
    for i in range(len(t) - 1):
        dt = t[i + 1] - t[i]
        # linear-interpolation error bound dt^2 max|w''| / 8 on the Hermite cubic
        curv = max(abs(spline(t[i], 2)), abs(spline(t[i + 1], 2)))
        err = dt * dt * curv / 8.0
        k = max(1, math.ceil(math.sqrt(err / tol)))
        if k > 1:
            inner = t[i] + dt * np.arange(1, k) / k
            ts.append(inner)
            ws.append(spline(inner))
            ms.append(spline(inner, 1))
        ts.append(t[i + 1:i + 2])
        ws.append(w[i + 1:i + 2])
        ms.append(m[i + 1:i + 2])
    return np.concatenate(ts), np.concatenate(ws), np.concatenate(ms)


def integrate_line(u0, v0, branch, eps, h, span, opts=None):
    """Integrate one asymptotic line starting at chart point (u0, v0).

    The independent variable runs over [t0, t0 + span] where t0 = u0 for the
    First branch and v0 for the Second. A negative span integrates backwards.

    Raises
    ------
    NonHyperbolic
        The line reached a point with f^2 - eg <= 0. ``err.t``, ``err.w``
        give the last accepted state and ``err.curve`` the partial curve.
    StepUnderflow
        The adaptive step fell below ``opts.min_step``.
    """
    opts = opts or IntegratorOptions()
    branch = Branch.from_arg(branch)
    source = opts.coefficients
    first = branch is Branch.FIRST
    t0, w0 = (u0, v0) if first else (v0, u0)

    def coeffs(t, w):
        return coefficients_at(t, w, eps, h, source) if first else coefficients_at(w, t, eps, h, source)

    def rhs(t, y):
        e, f, g = coeffs(t, y[0])
        return np.array([branch_slope(e, f, g, branch)])

    t_end = t0 + span
    ts, ws, ms = [float(t0)], [float(w0)], [float(rhs(t0, [w0])[0])]
    max_jump = 0.0

    def partial():
        return LiftedCurve(np.array(ts), np.array(ws), np.array(ms), branch, eps, max_jump)

    if span == 0:
        return partial()
    solver = RK45(rhs, t0, np.array([float(w0)]), t_end,
                  max_step=opts.max_step, rtol=opts.rtol, atol=opts.atol)
    while solver.status == "running":
        t_prev, w_prev = solver.t, float(solver.y[0])
        try:
            msg = solver.step()
        except NonHyperbolic as exc:
            raise type(exc)(str(exc), t=t_prev, w=w_prev, curve=partial()) from None
        if solver.status == "failed":
            raise StepUnderflow(msg or "step size collapsed", t=t_prev, w=w_prev)
        if solver.status == "running" and solver.step_size < opts.min_step:
            raise StepUnderflow(f"step {solver.step_size:.3g} < min_step", t=t_prev, w=w_prev)
        m = float(solver.f[0])
        e, f, g = coeffs(solver.t, solver.y[0])
        max_jump = max(max_jump, abs(m - ms[-1]) / root_separation(e, f, g, branch))
        ts.append(float(solver.t))
        ws.append(float(solver.y[0]))
        ms.append(m)

    curve = partial()
    if opts.interp_tol is not None:
        curve.t, curve.w, curve.slopes = _refine(curve.t, curve.w, curve.slopes, opts.interp_tol)
    return curve


def poincare1(v0, eps, h, opts=None):
    """Lifted first-return v(2pi, v0, eps) of the First foliation, {u=0} -> {u=2pi}."""
    return integrate_line(0.0, v0, Branch.FIRST, eps, h, TWO_PI, opts).final


def poincare2(u0, eps, h, opts=None):
    """Lifted first-return u(u0, 2pi, eps) of the Second foliation, {v=0} -> {v=2pi}."""
    return integrate_line(u0, 0.0, Branch.SECOND, eps, h, TWO_PI, opts).final


def default_starts(count=4):
    # return maps of sin^2(2v-2u) commute with shifts by pi/2; spread over that period
    return [k * (math.pi / 2) / count for k in range(count)]


@dataclass
class TranslationEstimate:
    value: float
    error_bar: float
    per_start: list
    iterations: int


def translation_number(branch, eps, h, iterations, opts=None, starts=None):
    """Average displacement per return, (F^n(w0) - w0)/n, over several w0.

    The n-fold lift F^n is obtained by one integration over n periods, which
    is the same thing since the coefficients are 2pi-periodic in t.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    branch = Branch.from_arg(branch)
    starts = default_starts() if starts is None else list(starts)
    vals = []
    for w0 in starts:
        u0, v0 = (0.0, w0) if branch is Branch.FIRST else (w0, 0.0)
        end = integrate_line(u0, v0, branch, eps, h, TWO_PI * iterations, opts).final
        vals.append((end - w0) / iterations)
    return TranslationEstimate(float(np.mean(vals)), TWO_PI / iterations, vals, iterations)


def extrapolate_to_zero(x, y, cond_max=1e6):
    """Richardson (polynomial) extrapolation of samples y(x) to x = 0.

    Fits y = c0 + c1 x + ... + c_{n-1} x^{n-1} through all n points. The error
    estimate is the change in c0 when the coarsest point is dropped.

    Returns (coefficients, error).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(np.unique(x)) != len(x):
        raise IllConditioned("ladder values must be distinct")
    scale = np.max(np.abs(x))
    V = np.vander(x / scale, increasing=True)
    cond = np.linalg.cond(V)
    if not cond < cond_max:
        raise IllConditioned(f"ladder condition number {cond:.3g} exceeds {cond_max:.3g}")
    coeffs = np.linalg.solve(V, y) / scale ** np.arange(len(x))
    if len(x) < 2:
        return coeffs, math.inf
    keep = np.argsort(np.abs(x))[:-1]
    sub = np.linalg.solve(np.vander(x[keep] / scale, increasing=True), y[keep])
    return coeffs, float(abs(coeffs[0] - sub[0]))


@dataclass
class ReturnMapReport:
    """Displacements pi1(v0) - v0 over an (eps, v0) grid and the eps^2 coefficient.

    ``translation_numbers`` are one-return estimates (mean displacement over
    the v0 grid); the true rotation number of each lift lies between
    ``displacement_bounds`` (min and max displacement).
    """

    eps_values: list
    v0_grid: list
    displacements: np.ndarray
    translation_numbers: list
    displacement_bounds: list
    quad_coeff: float
    quad_coeff_err: float
    quad_coeff_per_v0: np.ndarray
    cubic_coeff_per_v0: np.ndarray
    spread: float = field(init=False)

    def __post_init__(self):
        self.spread = float(np.ptp(self.quad_coeff_per_v0))

    def to_dict(self):
        return {
            "eps_values": list(map(float, self.eps_values)),
            "v0_grid": list(map(float, self.v0_grid)),
            "displacements": [list(map(float, row)) for row in self.displacements],
            "translation_numbers": list(map(float, self.translation_numbers)),
            "quad_coeff": self.quad_coeff,
            "quad_coeff_err": self.quad_coeff_err,
            "quad_coeff_per_v0": list(map(float, self.quad_coeff_per_v0)),
            "cubic_coeff_per_v0": list(map(float, self.cubic_coeff_per_v0)),
            "spread": self.spread,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def richardson_quad_coeff(eps_values, displacements, cond_max=1e6):
    """Per-column eps^2 coefficient from displacements[i, k] at eps_values[i]."""
    eps = np.asarray(eps_values, dtype=float)
    D = np.asarray(displacements, dtype=float)
    if D.ndim == 1:
        D = D[:, None]
    A, B, errs = [], [], []
    for col in D.T:
        c, err = extrapolate_to_zero(eps, col / eps**2, cond_max)
        A.append(c[0])
        B.append(c[1] if len(c) > 1 else 0.0)
        errs.append(err)
    return np.array(A), np.array(B), np.array(errs)


def quad_coeff_extract(eps_list, v0_grid, h, opts=None, cond_max=1e6):
    """Displacement sweep plus Richardson extraction of A in pi1(v0) - v0 = A eps^2 + ..."""
    eps_list = [float(e) for e in eps_list]
    if len(set(eps_list)) < 3:
        raise IllConditioned("need at least three distinct eps values")
    v0_grid = [float(v) for v in v0_grid]
    D = np.array([[poincare1(v0, eps, h, opts) - v0 for v0 in v0_grid] for eps in eps_list])
    A, B, errs = richardson_quad_coeff(eps_list, D, cond_max)
    return ReturnMapReport(
        eps_values=eps_list,
        v0_grid=v0_grid,
        displacements=D,
        translation_numbers=[float(row.mean()) for row in D],
        displacement_bounds=[(float(row.min()), float(row.max())) for row in D],
        quad_coeff=float(A.mean()),
        quad_coeff_err=float(errs.max()),
        quad_coeff_per_v0=A,
        cubic_coeff_per_v0=B,
    )

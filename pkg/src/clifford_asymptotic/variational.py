"""First and second variations of a one-parameter quadratic ODE family.

For a(u,v,eps) dv^2 + 2 b(u,v,eps) du dv + c(u,v,eps) du^2 = 0 with
a = c = 0, b = 1 at eps = 0, the solution v(u, v0, eps) through v0 satisfies

    v_eps(u)     = -1/2 int_0^u c_eps ds
    v_epseps(u)  = -1/2 int_0^u (c_epseps + 2 c_veps v_eps - 2 b_eps c_eps) ds

with every coefficient evaluated at (s, v0, 0). For the
perturbation h = sin^2(2v - 2u) these integrate to

    v_eps(u)    = sin(4 v0 - 4u) - sin(4 v0)
    v_epseps(u) = -12u - 4 sin(4u) - 4 sin(8 v0 - 4u)
                  - 5/2 sin(8 v0) + 13/2 sin(8 v0 - 8u)

so the period defects are 0 and -24 pi. Neither closed form is used here;
both are computed by quadrature from the family's evaluators.
"""

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import MissingThirdDerivative
from .flow import TWO_PI, IntegratorOptions, poincare1
from .forms import second_form_closed


@dataclass(frozen=True)
class QuadraticFamily:
    """Coefficients a, b, c of (u, v, eps) and the eps-partials at eps = 0
    that enter the first two variations. ``c_v_eps`` and ``a_u_eps`` may be
    None when only first variations are needed."""

    a: Callable
    b: Callable
    c: Callable
    a_eps: Callable
    b_eps: Callable
    c_eps: Callable
    c_eps_eps: Callable
    a_eps_eps: Callable
    c_v_eps: Optional[Callable] = None
    a_u_eps: Optional[Callable] = None
    name: str = "custom"

    def swapped(self):
        """Family for the twin variation u(u0, v, eps): a <-> c and u <-> v."""
        def sw3(fn):
            return lambda u, v, eps: fn(v, u, eps)

        def sw(fn):
            return None if fn is None else (lambda u, v: fn(v, u))

        return QuadraticFamily(
            a=sw3(self.c), b=sw3(self.b), c=sw3(self.a),
            a_eps=sw(self.c_eps), b_eps=sw(self.b_eps), c_eps=sw(self.a_eps),
            c_eps_eps=sw(self.a_eps_eps), a_eps_eps=sw(self.c_eps_eps),
            c_v_eps=sw(self.a_u_eps), a_u_eps=sw(self.c_v_eps),
            name=self.name + "[swapped]",
        )


def trivial_family():
    def zero3(u, v, eps):
        return np.zeros(np.broadcast(np.asarray(u), np.asarray(v)).shape)

    def one3(u, v, eps):
        return np.ones(np.broadcast(np.asarray(u), np.asarray(v)).shape)

    def zero(u, v):
        return zero3(u, v, 0.0)

    return QuadraticFamily(zero3, one3, zero3, zero, zero, zero, zero, zero, zero, zero, name="trivial")


def paper_family(h):
    """The asymptotic-line ODE of the normal graph of ``h`` as a quadratic family:
    a = g, b = f, c = e, with eps-partials read off the polynomial coefficients."""
    def coef(i):
        return lambda u, v, eps: second_form_closed(u, v, eps, h)[i]

    def four_hu_hv(u, v):
        return 4.0 * h.h_u(u, v) * h.h_v(u, v)

    return QuadraticFamily(
        a=coef(2), b=coef(1), c=coef(0),
        a_eps=h.h_vv, b_eps=h.h_uv, c_eps=h.h_uu,
        c_eps_eps=four_hu_hv, a_eps_eps=four_hu_hv,
        c_v_eps=h.h_uuv, a_u_eps=h.h_uvv,
        name=f"asymptotic[{h.name}]",
    )


@dataclass
class VariationTrace:
    u: np.ndarray
    v_eps: np.ndarray
    v_eps_eps: Optional[np.ndarray]
    v0: float
    family: str

    @property
    def defect1(self):
        return float(self.v_eps[-1] - self.v_eps[0])

    @property
    def defect2(self):
        return float(self.v_eps_eps[-1] - self.v_eps_eps[0])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write("u,v_eps,v_eps_eps\n")
            second = self.v_eps_eps if self.v_eps_eps is not None else np.full_like(self.u, np.nan)
            for row in zip(self.u, self.v_eps, second):
                fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def _panels(u_end, panels):
    if panels is None:
        panels = max(8, math.ceil(abs(u_end) / (math.pi / 32)))
    return np.linspace(0.0, u_end, panels + 1)


def _check(values):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("non-finite evaluator output in variation quadrature")
    return values


def first_variation(fam, v0, u_end=TWO_PI, panels=None, order=10):
    """v_eps along v = v0 on the panel breakpoints of [0, u_end] (composite Gauss-Legendre)."""
    grid = _panels(u_end, panels)
    x, w = np.polynomial.legendre.leggauss(order)
    lo, dx = grid[:-1, None], np.diff(grid)[:, None]
    nodes = lo + 0.5 * (x + 1.0) * dx
    inc = -0.5 * np.sum(_check(fam.c_eps(nodes, v0)) * w * 0.5 * dx, axis=1)
    return VariationTrace(grid, np.concatenate([[0.0], np.cumsum(inc)]), None, float(v0), fam.name)


def second_variation(fam, v0, u_end=TWO_PI, panels=None, order=10):
    """v_eps and v_epseps along v = v0.

    v_eps is needed at the outer quadrature nodes; it is computed there by a
    nested Gauss-Legendre rule from the panel's left breakpoint.
    """
    if fam.c_v_eps is None:
        raise MissingThirdDerivative(f"family {fam.name!r} has no c_v_eps evaluator")
    grid = _panels(u_end, panels)
    x, w = np.polynomial.legendre.leggauss(order)
    lo, dx = grid[:-1, None], np.diff(grid)[:, None]
    nodes = lo + 0.5 * (x + 1.0) * dx

    c_eps = _check(fam.c_eps(nodes, v0))
    inc1 = -0.5 * np.sum(c_eps * w * 0.5 * dx, axis=1)
    v1_breaks = np.concatenate([[0.0], np.cumsum(inc1)])

    # inner[p, j, k]: k-th node of [lo_p, nodes_pj]
    sub = (nodes - lo)[..., None]
    inner = lo[..., None] + 0.5 * (x + 1.0) * sub
    v1_nodes = v1_breaks[:-1, None] - 0.5 * np.sum(_check(fam.c_eps(inner, v0)) * w * 0.5 * sub, axis=2)

    src = (_check(fam.c_eps_eps(nodes, v0))
           + 2.0 * _check(fam.c_v_eps(nodes, v0)) * v1_nodes
           - 2.0 * _check(fam.b_eps(nodes, v0)) * c_eps)
    inc2 = -0.5 * np.sum(src * w * 0.5 * dx, axis=1)
    return VariationTrace(grid, v1_breaks, np.concatenate([[0.0], np.cumsum(inc2)]), float(v0), fam.name)


def period_defects(fam, v0, panels=None, order=10):
    tr = second_variation(fam, v0, TWO_PI, panels, order)
    return tr.defect1, tr.defect2


@dataclass
class CrossValidationReport:
    """Flow displacement pi1(v0) - v0 against eps*defect1 + eps^2/2*defect2.

    ``slope`` is the log-log slope of the RMS residual (over the v0 grid)
    against eps; ``slopes_per_v0`` the same per start point.
    """

    eps_values: list
    v0_grid: list
    defect1: np.ndarray
    defect2: np.ndarray
    displacements: np.ndarray
    predicted: np.ndarray
    residuals: np.ndarray
    rms_residuals: np.ndarray
    slope: float
    slopes_per_v0: np.ndarray

    def to_dict(self):
        def fl(a):
            return np.asarray(a, dtype=float).tolist()
        return {
            "eps_values": fl(self.eps_values), "v0_grid": fl(self.v0_grid),
            "defect1": fl(self.defect1), "defect2": fl(self.defect2),
            "residuals": fl(self.residuals), "rms_residuals": fl(self.rms_residuals),
            "slope": float(self.slope), "slopes_per_v0": fl(self.slopes_per_v0),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _loglog_slope(eps, r, floor=1e-14):
    r = np.asarray(r, dtype=float)
    if np.any(r <= floor):
        return math.nan
    return float(np.polyfit(np.log(eps), np.log(r), 1)[0])


def cross_validate(eps_ladder, v0, h, opts=None, fam=None):
    """Compare the flow's return displacement with the variational prediction."""
    opts = opts or IntegratorOptions(rtol=1e-12, atol=1e-12)
    fam = fam or paper_family(h)
    eps = np.asarray(eps_ladder, dtype=float)
    v0s = np.atleast_1d(np.asarray(v0, dtype=float))
    d = np.array([period_defects(fam, x) for x in v0s])
    d1, d2 = d[:, 0], d[:, 1]
    D = np.array([[poincare1(x, e, h, opts) - x for x in v0s] for e in eps])
    pred = eps[:, None] * d1[None, :] + 0.5 * eps[:, None] ** 2 * d2[None, :]
    res = D - pred
    rms = np.sqrt(np.mean(res**2, axis=1))
    per = np.array([_loglog_slope(eps, np.abs(res[:, k])) for k in range(len(v0s))])
    return CrossValidationReport(list(eps), list(v0s), d1, d2, D, pred, res, rms,
                                 _loglog_slope(eps, rms), per)

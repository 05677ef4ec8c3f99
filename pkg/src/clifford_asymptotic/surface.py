"""Clifford torus, its unit normal, and normal-graph perturbations.

All chart evaluations broadcast over array-valued ``u`` and ``v``; vectors
come back with the R^4 coordinates on the last axis.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateJet
from .linalg4 import dot4

#: Largest |eps| accepted by :func:`perturbed_jet` without an explicit override.
EPS_GUARD = 0.25

_S = np.sqrt(2.0) / 2.0


@dataclass(frozen=True)
class SurfaceJet2:
    """Position and first/second chart partials of an immersion into S^3."""

    p: np.ndarray
    p_u: np.ndarray
    p_v: np.ndarray
    p_uu: np.ndarray
    p_uv: np.ndarray
    p_vv: np.ndarray

    def gram(self):
        """Gram determinant EG - F^2 of the tangent pair."""
        E = dot4(self.p_u, self.p_u)
        F = dot4(self.p_u, self.p_v)
        G = dot4(self.p_v, self.p_v)
        return E * G - F * F


def _frame(u, v):
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    a = v - u
    b = u + v
    ca, sa, cb, sb = np.cos(a), np.sin(a), np.cos(b), np.sin(b)
    C = _S * np.stack([ca, sa, cb, sb], axis=-1)
    C_u = _S * np.stack([sa, -ca, -sb, cb], axis=-1)
    C_v = _S * np.stack([-sa, ca, -sb, cb], axis=-1)
    N = _S * np.stack([ca, sa, -cb, -sb], axis=-1)
    return C, C_u, C_v, N


def clifford_point(u, v):
    return _frame(u, v)[0]


def clifford_normal(u, v):
    """Unit normal (sqrt2/2)(cos(v-u), sin(v-u), -cos(u+v), -sin(u+v))."""
    return _frame(u, v)[3]


def clifford_jet(u, v):
    # C_uu = C_vv = -C and C_uv = N on this chart.
    C, C_u, C_v, N = _frame(u, v)
    return SurfaceJet2(C, C_u, C_v, -C, N, -C)


@dataclass(frozen=True)
class PerturbationField:
    """A 2pi-biperiodic height function h with caller-supplied derivatives.

    The third-order evaluators are only needed for the second variation.
    """

    h: Callable
    h_u: Callable
    h_v: Callable
    h_uu: Callable
    h_uv: Callable
    h_vv: Callable
    h_uuv: Optional[Callable] = None
    h_uvv: Optional[Callable] = None
    name: str = "custom"

    def jet(self, u, v):
        return (self.h(u, v), self.h_u(u, v), self.h_v(u, v),
                self.h_uu(u, v), self.h_uv(u, v), self.h_vv(u, v))

    @property
    def has_third(self):
        return self.h_uuv is not None and self.h_uvv is not None

    def swapped(self):
        """The field (u, v) -> h(v, u), derivatives relabelled accordingly."""
        def sw(fn):
            return None if fn is None else (lambda u, v: fn(v, u))
        return PerturbationField(
            h=sw(self.h), h_u=sw(self.h_v), h_v=sw(self.h_u),
            h_uu=sw(self.h_vv), h_uv=sw(self.h_uv), h_vv=sw(self.h_uu),
            h_uuv=sw(self.h_uvv), h_uvv=sw(self.h_uuv),
            name=self.name + "[swapped]",
        )


def paper_h():
    """h(u, v) = sin^2(2v - 2u) with closed-form derivatives through third order."""
    def h(u, v):
        return np.sin(2.0 * (v - u)) ** 2

    def h_u(u, v):
        return -2.0 * np.sin(4.0 * (v - u))

    def h_v(u, v):
        return 2.0 * np.sin(4.0 * (v - u))

    def h_uu(u, v):
        return 8.0 * np.cos(4.0 * (v - u))

    def h_uv(u, v):
        return -8.0 * np.cos(4.0 * (v - u))

    def h_uuv(u, v):
        return -32.0 * np.sin(4.0 * (v - u))

    def h_uvv(u, v):
        return 32.0 * np.sin(4.0 * (v - u))

    return PerturbationField(h, h_u, h_v, h_uu, h_uv, h_uu, h_uuv, h_uvv, name="sin^2(2v-2u)")


def zero_h():
    def z(u, v):
        return np.zeros(np.broadcast(np.asarray(u), np.asarray(v)).shape)
    return PerturbationField(z, z, z, z, z, z, z, z, name="zero")


def _check_eps(eps, allow_large_eps):
    if abs(eps) > EPS_GUARD and not allow_large_eps:
        raise ValueError(
            f"|eps| = {abs(eps):g} exceeds EPS_GUARD = {EPS_GUARD}; "
            "pass allow_large_eps=True to override"
        )


def perturbed_point(u, v, eps, h, allow_large_eps=False):
    """Position of (C + eps*h*N) / |C + eps*h*N|."""
    _check_eps(eps, allow_large_eps)
    C, _, _, N = _frame(u, v)
    w = C + eps * np.asarray(h.h(u, v), dtype=float)[..., None] * N
    return w / np.sqrt(dot4(w, w))[..., None]


def perturbed_jet(u, v, eps, h, allow_large_eps=False):
    """Analytic 2-jet of the normalized normal graph over the Clifford torus.

    Raises
    ------
    DegenerateJet
        If the Gram determinant EG - F^2 is not positive at some point.
    """
    _check_eps(eps, allow_large_eps)
    C, C_u, C_v, N = _frame(u, v)
    hs = [np.asarray(x, dtype=float)[..., None] for x in h.jet(u, v)]
    H, Hu, Hv, Huu, Huv, Hvv = (np.broadcast_to(x, C.shape[:-1] + (1,)) for x in hs)

    # derivatives of the frame: N_u = -C_v, N_v = -C_u, N_uu = N_vv = -N, N_uv = C
    w = C + eps * H * N
    w_u = C_u + eps * (Hu * N - H * C_v)
    w_v = C_v + eps * (Hv * N - H * C_u)
    w_uu = -C + eps * (Huu * N - 2.0 * Hu * C_v - H * N)
    w_uv = N + eps * (Huv * N - Hu * C_u - Hv * C_v + H * C)
    w_vv = -C + eps * (Hvv * N - 2.0 * Hv * C_u - H * N)

    r = np.sqrt(dot4(w, w))[..., None]
    a = w / r
    r_u = dot4(a, w_u)[..., None]
    r_v = dot4(a, w_v)[..., None]

    def r2(wi, wj, wij, ri, rj):
        return (dot4(wi, wj)[..., None] + dot4(w, wij)[..., None] - ri * rj) / r

    r_uu = r2(w_u, w_u, w_uu, r_u, r_u)
    r_uv = r2(w_u, w_v, w_uv, r_u, r_v)
    r_vv = r2(w_v, w_v, w_vv, r_v, r_v)

    def first(wi, ri):
        return wi / r - w * ri / r**2

    def second(wij, wi, wj, ri, rj, rij):
        return (wij / r - (wi * rj + wj * ri) / r**2
                - w * rij / r**2 + 2.0 * w * ri * rj / r**3)

    jet = SurfaceJet2(
        a,
        first(w_u, r_u),
        first(w_v, r_v),
        second(w_uu, w_u, w_u, r_u, r_u, r_uu),
        second(w_uv, w_u, w_v, r_u, r_v, r_uv),
        second(w_vv, w_v, w_v, r_v, r_v, r_vv),
    )
    if np.any(jet.gram() <= 0.0):
        raise DegenerateJet(f"chart is not an immersion at eps={eps:g}")
    return jet

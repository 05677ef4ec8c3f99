"""First and second fundamental forms of immersions into S^3."""

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DegenerateJet
from .linalg4 import dot4, wedge3
from .surface import perturbed_jet


@dataclass(frozen=True)
class FormPair:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    e: np.ndarray
    f: np.ndarray
    g: np.ndarray


def first_form(jet):
    return dot4(jet.p_u, jet.p_u), dot4(jet.p_u, jet.p_v), dot4(jet.p_v, jet.p_v)


def second_form(jet):
    """(e, f, g) as determinant quotients <p ^ p_u ^ p_v, p_xx> / sqrt(EG - F^2).

    |p ^ p_u ^ p_v| = sqrt(EG - F^2) on the unit sphere, so these are the
    second-form coefficients relative to the unit normal p ^ p_u ^ p_v / |.|.
    """
    gram = jet.gram()
    if np.any(gram <= 0.0):
        raise DegenerateJet("EG - F^2 <= 0")
    s = np.sqrt(gram)
    n = wedge3(jet.p, jet.p_u, jet.p_v)
    return dot4(n, jet.p_uu) / s, dot4(n, jet.p_uv) / s, dot4(n, jet.p_vv) / s


def fundamental_forms(jet):
    return FormPair(*first_form(jet), *second_form(jet))


def second_form_closed(u, v, eps, h, h2_coeff=2.0):
    """Polynomial-in-eps second form of the normal graph of ``h``, up to scale.

    Equal to the determinant coefficients times (1 + eps^2 h^2)^2 sqrt(EG - F^2).
    ``h2_coeff`` is the multiplier of h^2 in the eps^2 term of f; only the
    default 2 reproduces the determinant coefficients (any other value is off
    by O(eps^2 h^2) in f, which does not reach the eps^2 return-map drift).
    """
    H, Hu, Hv, Huu, Huv, Hvv = h.jet(u, v)
    e2 = eps * eps
    e3 = e2 * eps
    HH = H * H
    e = eps * Huu + 2.0 * e2 * Hu * Hv + e3 * (2.0 * H * Hu * Hu - HH * Huu)
    g = eps * Hvv + 2.0 * e2 * Hu * Hv + e3 * (2.0 * H * Hv * Hv - HH * Hvv)
    f = (1.0 + eps * Huv + e2 * (Hu * Hu + Hv * Hv - h2_coeff * HH)
         + e3 * (2.0 * H * Hu * Hv - HH * Huv) + e2 * e2 * HH * HH)
    return e, f, g


def k_ext(fp):
    """Extrinsic Gaussian curvature (eg - f^2) / (EG - F^2)."""
    return (fp.e * fp.g - fp.f ** 2) / (fp.E * fp.G - fp.F ** 2)


def projective_distance(x, y):
    """Max-abs distance between two [e:f:g] triples after scaling each by its
    largest-magnitude entry. Broadcasts over leading axes (triple on axis 0)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def scaled(t):
        idx = np.argmax(np.abs(t), axis=0)
        piv = np.take_along_axis(t, idx[None, ...], axis=0)
        return t / piv

    return np.max(np.abs(scaled(x) - scaled(y)))


@dataclass
class HyperbolicityReport:
    eps: float
    grid: int
    min_value: float
    argmin_u: float
    argmin_v: float
    hyperbolic: bool

    def to_record(self):
        return asdict(self)


def hyperbolicity_scan(eps, h, n, source="closed", allow_large_eps=False):
    """Sample f^2 - eg on the n x n grid u_i = 2 pi i / n, v_j = 2 pi j / n.

    The sign of f^2 - eg does not depend on the overall scale of (e, f, g).
    Ties for the minimum go to the lowest (u, v) in lexicographic order.
    """
    if n < 2:
        raise ValueError("grid size must be at least 2")
    t = 2.0 * np.pi * np.arange(n) / n
    U, V = np.meshgrid(t, t, indexing="ij")
    if source == "closed":
        e, f, g = second_form_closed(U, V, eps, h)
    elif source == "jet":
        e, f, g = second_form(perturbed_jet(U, V, eps, h, allow_large_eps=allow_large_eps))
    else:
        raise ValueError(f"unknown coefficient source {source!r}")
    disc = np.broadcast_to(f * f - e * g, U.shape)
    k = int(np.argmin(disc))  # first occurrence in row-major (u, v) order
    i, j = np.unravel_index(k, U.shape)
    m = float(disc[i, j])
    return HyperbolicityReport(float(eps), int(n), m, float(t[i]), float(t[j]), bool(m > 0.0))

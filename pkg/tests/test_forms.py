import numpy as np
import pytest

from clifford_asymptotic.forms import (FormPair, first_form, fundamental_forms, hyperbolicity_scan,
                                       k_ext, projective_distance, second_form, second_form_closed)
from clifford_asymptotic.surface import clifford_jet, perturbed_jet, zero_h


def grid(n):
    t = 2 * np.pi * np.arange(n) / n
    return np.meshgrid(t, t, indexing="ij")


def test_clifford_forms(rng):
    u, v = rng.uniform(0, 2 * np.pi, (2, 100))
    fp = fundamental_forms(clifford_jet(u, v))
    for got, want in zip((fp.E, fp.F, fp.G, fp.e, fp.f, fp.g), (1, 0, 1, 0, 1, 0)):
        assert np.max(np.abs(got - want)) < 1e-12
    assert np.max(np.abs(k_ext(fp) + 1)) < 1e-12


def test_first_form_eps_zero_and_cauchy_schwarz(h, rng):
    u, v = rng.uniform(0, 2 * np.pi, (2, 100))
    E, F, G = first_form(perturbed_jet(u, v, 0.0, h))
    assert np.allclose([E, F, G], [[1], [0], [1]], atol=1e-15)
    E, F, G = first_form(perturbed_jet(u, v, 0.2, h))
    assert np.all(F**2 <= E * G)


@pytest.mark.parametrize("eps", [0.01, 0.03, 0.05])
def test_diagonal_second_form(h, eps):
    # on u = v: h = h_u = h_v = 0, h_uu = h_vv = 8, h_uv = -8
    u = np.linspace(0, 2 * np.pi, 9)
    e, f, g = second_form_closed(u, u, eps, h)
    assert np.allclose(e, 8 * eps, rtol=0, atol=1e-15)
    assert np.allclose(g, 8 * eps, rtol=0, atol=1e-15)
    assert np.allclose(f, 1 - 8 * eps, rtol=0, atol=1e-15)
    jet = np.array(second_form(perturbed_jet(u, u, eps, h)))
    assert projective_distance(jet, np.array([8 * eps, 1 - 8 * eps, 8 * eps])[:, None]) < 1e-13


def test_closed_form_eps_zero(h, rng):
    u, v = rng.uniform(0, 2 * np.pi, (2, 30))
    e, f, g = second_form_closed(u, v, 0.0, h)
    assert np.all(e == 0) and np.all(g == 0) and np.all(f == 1)


@pytest.mark.parametrize("eps", [0.01, 0.05])
def test_closed_form_projectively_equals_determinants(h, eps):
    U, V = grid(32)
    jet = np.array(second_form(perturbed_jet(U, V, eps, h)))
    closed = np.array(second_form_closed(U, V, eps, h))
    assert projective_distance(jet, closed) < 1e-8


def test_closed_form_exact_scale(h, rng):
    # determinant coefficients = closed / ((1 + eps^2 h^2)^2 sqrt(EG - F^2))
    u, v = rng.uniform(0, 2 * np.pi, (2, 40))
    for eps in (0.05, 0.2):
        jet = perturbed_jet(u, v, eps, h)
        det = np.array(second_form(jet))
        closed = np.array(second_form_closed(u, v, eps, h))
        scale = (1 + eps**2 * h.h(u, v) ** 2) ** 2 * np.sqrt(jet.gram())
        assert np.allclose(det * scale, closed, atol=1e-12)


def test_single_h2_variant_differs_only_in_f(h, rng):
    u, v = rng.uniform(0, 2 * np.pi, (2, 40))
    eps = 0.05
    a = np.array(second_form_closed(u, v, eps, h))
    b = np.array(second_form_closed(u, v, eps, h, h2_coeff=1.0))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[2], b[2])
    assert np.allclose(b[1] - a[1], eps**2 * h.h(u, v) ** 2, atol=1e-15)
    jet = np.array(second_form(perturbed_jet(u, v, eps, h)))
    assert projective_distance(jet, b) > 1e-5


def test_symmetry(h):
    U, V = grid(32)
    e, f, g = second_form_closed(U, V, 0.05, h)
    eT, fT, gT = second_form_closed(V, U, 0.05, h)
    assert np.max(np.abs(e - eT)) < 1e-10
    assert np.max(np.abs(e - g)) < 1e-10
    assert np.max(np.abs(f - fT)) < 1e-10
    jet = np.array(second_form(perturbed_jet(U, V, 0.05, h)))
    jetT = np.array(second_form(perturbed_jet(V, U, 0.05, h)))
    assert np.allclose(jet[0], jetT[2], atol=1e-12)


def test_k_ext():
    assert k_ext(FormPair(1.0, 0.0, 1.0, 0.0, 1.0, 0.0)) == -1.0
    assert k_ext(FormPair(2.0, 0.5, 1.0, 0.3, 1.0, 0.4)) < 0


def test_k_ext_positive_on_diagonal(h):
    fp = fundamental_forms(perturbed_jet(0.4, 0.4, 0.1, h))
    assert k_ext(fp) > 0
    e, f, g = second_form_closed(0.4, 0.4, 0.1, h)
    assert f * f - e * g == pytest.approx(1 - 16 * 0.1)


def test_scan_unperturbed():
    rep = hyperbolicity_scan(0.0, zero_h(), 16)
    assert rep.min_value == 1.0 and rep.hyperbolic
    assert (rep.argmin_u, rep.argmin_v) == (0.0, 0.0)


@pytest.mark.parametrize("eps, hyperbolic, minimum", [(0.05, True, 0.2), (0.1, False, -0.6)])
def test_scan_paper_h(h, eps, hyperbolic, minimum):
    rep = hyperbolicity_scan(eps, h, 64)
    assert rep.hyperbolic is hyperbolic
    assert rep.min_value == pytest.approx(minimum, abs=1e-12)
    assert rep.argmin_u == rep.argmin_v


def test_scan_jet_source_agrees_in_sign(h):
    for eps in (0.05, 0.1):
        assert (hyperbolicity_scan(eps, h, 32, source="jet").hyperbolic
                == hyperbolicity_scan(eps, h, 32).hyperbolic)


def test_scan_record(h):
    rec = hyperbolicity_scan(0.05, h, 8).to_record()
    assert set(rec) == {"eps", "grid", "min_value", "argmin_u", "argmin_v", "hyperbolic"}
    with pytest.raises(ValueError):
        hyperbolicity_scan(0.05, h, 1)

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieball.errors import ParameterError
from lieball.geometry import HElement, LorentzElement, ModelParams
from lieball.intertwiners import (
    BoundaryFunction,
    CAlphaSpace,
    boundary_jacobian,
    c_alpha_inner,
    c_alpha_inner_quadrature,
    cauchy_riemann_residual,
    discrete_embedding_check,
    kappa_closed,
    kappa_funk_hecke,
    minimal_constant_closed,
    minimal_rep_check,
    minimal_rep_scan,
    sigma_alpha_apply,
    sigma_unitarity_residual,
    surface_measure_residual,
    t_nu,
    t_nu_one_series,
    tau_lambda_apply,
    tau_unitarity_residual,
    transported_spectrum,
    vacuum_norm_series,
)
from lieball.polynomials import MultiPoly, random_poly
from lieball.quadrature import sphere_rule


def unit(rng, n, count):
    b = rng.standard_normal((count, n))
    return b / np.linalg.norm(b, axis=1)[:, None]


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.floats(0.0, 0.999), st.integers(0, 10))
def test_kappa_two_routes_and_positive(n, frac, j):
    nup = 0.5 * (n - 2) + frac * 0.5 * 0.98
    a = kappa_closed(j, nup, n)
    b = kappa_funk_hecke(j, nup, n)
    assert a > 0
    assert abs(a - b) < 1e-10 * a


def test_kappa_outside_range():
    with pytest.raises(ParameterError):
        kappa_closed(0, 1.0, 3)
    with pytest.raises(ParameterError):
        CAlphaSpace(3, 0.4)


def test_vacuum_series_against_mpmath():
    for n, nu in [(3, 0.7), (4, 1.2), (5, 1.9)]:
        ref = float(mpmath.hyp2f1(nu, nu - (n - 2) / 2, n / 2, 1))
        assert abs(vacuum_norm_series(nu, n) - ref) < 1e-9 * ref
        assert abs(kappa_closed(0, nu, n) - ref) < 1e-12 * ref


def test_vacuum_norm_double_quadrature_n3():
    space = CAlphaSpace(3, 0.7 / 3)
    quad = c_alpha_inner_quadrature(1.0, 1.0, space, outer_order=4, inner_nodes=40, inner_order=4)
    assert abs(quad - vacuum_norm_series(0.7, 3)) < 1e-5


def test_c_alpha_inner_quadrature_non_constant(rng):
    space = CAlphaSpace(4, 1.3 / 4)
    f = BoundaryFunction.from_polynomial(random_poly(4, 3, rng))
    g = BoundaryFunction.from_polynomial(random_poly(4, 3, rng))
    quad = c_alpha_inner_quadrature(f, g, space, outer_order=8, inner_nodes=30, inner_order=8)
    assert abs(quad - c_alpha_inner(f, g, space)) < 1e-6


def test_boundary_function_components(rng):
    p = random_poly(3, 4, rng)
    f = BoundaryFunction.from_polynomial(p)
    b = unit(rng, 3, 6)
    np.testing.assert_allclose(f(b), p(b), atol=1e-13)
    for j, h in f.components.items():
        assert not h.laplacian() and h.degree == j
    # L2 pairing against quadrature
    rule = sphere_rule(3, 10)
    quad = rule.weights @ np.abs(f(rule.nodes)) ** 2
    assert abs(f.l2_inner(f) - quad) < 1e-13
    # different degrees are C_alpha orthogonal
    space = CAlphaSpace(3, 0.2)
    parts = [BoundaryFunction(3, {j: h}) for j, h in f.components.items()]
    for i in range(len(parts)):
        for k in range(i):
            assert c_alpha_inner(parts[i], parts[k], space) == 0


def test_t_nu_one_matches_series(rng):
    for n, nu in [(3, 0.7), (4, 1.2), (5, 1.8)]:
        p = ModelParams(n, nu)
        z = rng.standard_normal((5, n)) + 1j * rng.standard_normal((5, n))
        z *= (0.5 / np.linalg.norm(z, axis=1))[:, None]
        np.testing.assert_allclose(t_nu(1.0, p, z), t_nu_one_series(z, p), rtol=1e-8)
        assert abs(t_nu(1.0, p, np.zeros((1, n)))[0] - 1.0) < 1e-14


def test_t_nu_holomorphic():
    p = ModelParams(4, 1.2)
    z = np.array([[0.1 + 0.2j, -0.1, 0.05j, 0.2]])
    F = lambda w: t_nu(lambda b: b[..., 0] ** 2 + b[..., 1], p, w)  # noqa: E731
    assert cauchy_riemann_residual(F, z) < 1e-8


def test_boundary_jacobian_routes(rng):
    g = HElement.boost(0.9, 4)
    e1 = np.array([1.0, 0, 0, 0])
    a = boundary_jacobian(g, e1)
    b = boundary_jacobian(g, e1, method="limit")
    assert abs(a - b) < 1e-8 * a
    # closed form along the boost axis: e^{-n t}
    assert abs(a - math.exp(-4 * 0.9)) < 1e-12
    q = np.linalg.qr(rng.standard_normal((4, 4)))[0]
    rot = HElement(q * np.sign(np.linalg.det(q)))
    np.testing.assert_allclose(boundary_jacobian(rot, unit(rng, 4, 3)), 1.0, atol=1e-14)
    g = HElement.random(4, rng)
    z = unit(rng, 4, 5)
    np.testing.assert_allclose(boundary_jacobian(g, z, "limit"), boundary_jacobian(g, z), rtol=1e-8)
    # accepts Lorentz matrices too
    np.testing.assert_allclose(boundary_jacobian(g.to_lorentz(), z), boundary_jacobian(g, z), rtol=1e-12)


def test_surface_measure(rng):
    for n in (3, 4, 5):
        for _ in range(3):
            g = HElement.random(n, rng, max_rapidity=1.5)
            assert surface_measure_residual(g, lambda b: np.ones(b.shape[:-1])) < 1e-8
            assert surface_measure_residual(g, lambda b: np.exp(b[..., 0]) * b[..., -1] ** 2) < 1e-8


def test_identity_actions(rng):
    p = ModelParams(3, 2.0)
    f = lambda b: b[..., 0] + 2 * b[..., 1] ** 2  # noqa: E731
    b = unit(rng, 3, 4)
    e = HElement(np.eye(3))
    np.testing.assert_allclose(tau_lambda_apply(e, 1.1, f, b, p), f(b), atol=1e-15)
    np.testing.assert_allclose(sigma_alpha_apply(e, 0.25, f, b), f(b), atol=1e-15)
    # lambda = 0, f = 1: modulus is the Jacobian factor J^{rho/n}
    g = HElement.random(3, rng)
    vals = tau_lambda_apply(g, 0.0, 1.0, b, p)
    jac = boundary_jacobian(g.inverse(), b)
    np.testing.assert_allclose(np.abs(vals), jac ** (p.rho / 3), rtol=1e-12)
    # LorentzElement input gives the same values
    np.testing.assert_allclose(tau_lambda_apply(g.to_lorentz(), 0.7, f, b, p),
                               tau_lambda_apply(g, 0.7, f, b, p), rtol=1e-12)
    assert isinstance(g.to_lorentz(), LorentzElement)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_unitarity(n, rng):
    p = ModelParams(n, n - 1.0)
    alpha = (0.5 * (n - 2) + 0.2) / n
    space = CAlphaSpace(n, alpha)
    f = BoundaryFunction.from_polynomial(random_poly(n, 4, rng))
    for _ in range(2):
        g = HElement.random(n, rng, max_rapidity=1.5)
        assert tau_unitarity_residual(f, g, 2.1, p) < 1e-8
        assert sigma_unitarity_residual(f, g, space) < 1e-5


def test_sigma_unitarity_on_one_plus_y1(rng):
    n = 3
    space = CAlphaSpace(n, 0.7 / 3)
    f = BoundaryFunction.from_polynomial(MultiPoly.constant(3) + MultiPoly.variable(3, 0))
    g = HElement.boost(1.2, 3, axis=1)
    assert sigma_unitarity_residual(f, g, space) < 1e-5
    # the transported spectrum sums to the L2 norm of the transported function
    beta = (n - 1) / n - space.alpha
    spectrum = transported_spectrum(f, g, beta, 120)
    rule = sphere_rule(3, 30, axis=[0, -1.0, 0], axis_order=300)
    vals = sigma_alpha_apply(g, space.alpha, f, rule.nodes)
    assert abs(spectrum.sum() - rule.weights @ np.abs(vals) ** 2) < 1e-10


@pytest.mark.parametrize("n,nu", [(3, 0.7), (4, 1.2), (5, 1.9)])
def test_discrete_embedding(n, nu, rng):
    rep = discrete_embedding_check(ModelParams(n, nu), rng, samples=2)
    assert rep.passed()
    assert rep.vacuum["max_deviation"] < 1e-6
    assert rep.atom_residual < 1e-9


def test_discrete_needs_atom(rng):
    with pytest.raises(ParameterError):
        discrete_embedding_check(ModelParams(3, 2.0), rng)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_minimal_representation_constants(n):
    p = ModelParams(n, 0.5 * (n - 2))
    scan = minimal_rep_scan(p, mmax=4)
    assert scan.max_residual < 1e-8
    for m, c in enumerate(scan.constants):
        assert abs(c - minimal_constant_closed(m, n)) < 1e-10
    assert minimal_rep_check(0, p).constant == pytest.approx(1.0)
    with pytest.raises(ParameterError):
        minimal_rep_check(1, ModelParams(n, 0.5 * (n - 2) + 0.1))

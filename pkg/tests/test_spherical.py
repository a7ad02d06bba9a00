import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieball.errors import ConvergenceError, ParameterError
from lieball.geometry import ModelParams
from lieball.quadrature import sphere_rule
from lieball.spherical import (
    SpectralPoint,
    p_coeff,
    phi_hyp,
    phi_quad,
    phi_series,
    plancherel_measure,
    rinv_e_function,
    rinv_phi_coeffs,
    rinv_phi_coeffs_cauchy,
)


def phi_mp(r, lam, n):
    """Independent oracle: Legendre-function form of the rank-one spherical
    function through mpmath, phi = 2F1(s, n-1-s; n/2; -sinh^2(t/2)) with
    t = artanh(X) on the Klein radius X."""
    rho = mpmath.mpf(n - 1) / 2
    X = 2 * mpmath.mpf(r) / (1 + mpmath.mpf(r) ** 2)
    t = mpmath.atanh(X)
    s = rho + 1j * lam
    return complex(mpmath.hyp2f1(s, 2 * rho - s, mpmath.mpf(n) / 2, -mpmath.sinh(t / 2) ** 2))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_phi_matches_mpmath_oracle(n):
    p = ModelParams(n, n - 1.0)
    for r in [0.1, 0.3, 0.5]:
        x = np.zeros(n)
        x[0] = r
        for lam in [0.5, 2.0, 7.0]:
            ref = phi_mp(r, lam, n)
            assert abs(phi_hyp(x, lam, p) - ref) < 1e-12
            assert abs(phi_quad(x, lam, p) - ref) < 1e-12


@pytest.mark.parametrize("n", [3, 4, 5])
def test_three_routes_agree(n):
    p = ModelParams(n, n + 0.5)
    xs = np.zeros((10, n))
    xs[:, 0] = np.linspace(0, 0.5, 10)
    for lam in [0.5, 1.0, 2.0, 5.0, 10.0]:
        a = phi_hyp(xs, lam, p)
        b = phi_quad(xs, lam, p)
        c = phi_series(xs, lam, p)
        assert np.max(np.abs(a - b)) < 1e-8 and np.max(np.abs(a - c)) < 1e-8


def test_phi_properties():
    p = ModelParams(3, 2.0)
    assert phi_hyp(np.zeros(3), 1.3, p) == pytest.approx(1.0)
    x = np.array([0.2, -0.1, 0.3])
    # even in lambda and invariant under rotations of x
    assert abs(phi_hyp(x, 1.7, p) - phi_hyp(x, -1.7, p)) < 1e-14
    assert abs(phi_hyp(x, 1.7, p) - phi_hyp(np.array([np.linalg.norm(x), 0, 0]), 1.7, p)) < 1e-14
    with pytest.raises(ParameterError):
        phi_hyp(np.array([1.0, 0, 0]), 1.0, p)


def test_phi_series_nonconvergence():
    p = ModelParams(3, 2.0)
    with pytest.raises(ConvergenceError):
        phi_series(np.array([0.99, 0, 0]), 1.0, p, kmax=20)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 5), st.floats(0.05, 4.0), st.floats(0.0, 12.0))
def test_coefficient_routes_agree(n, shift, lam):
    p = ModelParams(n, 0.5 * (n - 2) + shift)
    a = rinv_phi_coeffs(lam, p, 8)
    b = rinv_phi_coeffs_cauchy(lam, p, 8)
    assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))) < 1e-10


def test_e_function_averages_to_phi(rng):
    p = ModelParams(4, 2.5)
    rule = sphere_rule(4, 40)
    x = np.array([0.3, 0.1, 0.0, -0.2])
    for lam in [0.4, 2.0]:
        e = rinv_e_function(lam, rule.nodes, x, p)
        avg = rule.weights @ e
        # restriction: h(x,x)^{nu/2} R^{-1} phi = phi
        assert abs(avg * (1 - x @ x) ** p.nu - phi_hyp(x, lam, p)) < 1e-12


@pytest.mark.parametrize("n,nu", [(3, 2.0), (4, 3.0), (5, 5.5)])
def test_orthonormality_without_atom(n, nu):
    p = ModelParams(n, nu)
    mu = plancherel_measure(p)
    assert mu.atom is None and mu.atom_mass == 0.0
    rule = mu.rule(degree=26)
    P = np.array([p_coeff(k, rule.nodes, p) for k in range(7)])
    G = (P * rule.weights * mu.density(rule.nodes)) @ P.T
    assert np.max(np.abs(G - np.eye(7))) < 1e-7


@pytest.mark.parametrize("nu", [0.6, 0.7, 0.9])
def test_orthonormality_with_atom(nu):
    p = ModelParams(3, nu)
    mu = plancherel_measure(p)
    atom = SpectralPoint.atom_of(p)
    assert mu.atom == atom and mu.atom_mass > 0
    rule = mu.rule(degree=26)
    P = np.array([p_coeff(k, rule.nodes, p) for k in range(7)])
    pa = np.array([p_coeff(k, atom, p) for k in range(7)])
    G = (P * rule.weights * mu.density(rule.nodes)) @ P.T
    assert abs(G[0, 0] - 1.0) > 1e-2
    G = G + mu.atom_mass * np.outer(pa, pa)
    assert np.max(np.abs(G - np.eye(7))) < 1e-7


def test_measure_constants_against_mpmath():
    p = ModelParams(3, 0.7)
    mu = plancherel_measure(p)
    lam = 1.3
    g = mpmath.gamma
    ref = abs(g(0.5 + 1j * lam) * g(1 + 1j * lam) * g(-0.3 + 1j * lam) / g(2j * lam)) ** 2 / (2 * mpmath.pi)
    assert abs(mu.weight(np.array([lam]))[0] - float(ref)) < 1e-13 * float(ref)
    assert mu.normalization == pytest.approx(float(g(1.5) * g(0.2) * g(0.7)), rel=1e-14)
    # total mass one, including the atom
    assert abs(mu.integrate(lambda l: np.ones(np.shape(l)) if np.ndim(l) else 1.0) - 1.0) < 1e-9


def test_p_coeff_real_at_atom_and_at_zero():
    p = ModelParams(3, 0.7)
    atom = SpectralPoint.atom_of(p)
    assert atom.lam_sq < 0
    assert isinstance(p_coeff(3, atom, p), float)
    assert p_coeff(0, 1.0, p) == 1.0
    with pytest.raises(ParameterError):
        SpectralPoint.atom_of(ModelParams(3, 2.0))
    with pytest.raises(ParameterError):
        p_coeff(1, 1.0, ModelParams(4, 1.0))


def test_tail_bound_small():
    mu = plancherel_measure(ModelParams(4, 3.0))
    cut = mu.cutoff(12)
    assert mu.tail_bound(cut, 12) < 1e-10
    assert mu.tail_bound(cut + 10, 12) < 1e-10 * mu.tail_bound(cut, 12)
    assert cut < 600

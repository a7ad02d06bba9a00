"""Acceptance criteria 1-11 at their stated tolerances.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary, or directly when the file is run as a script.
"""
import math
import sys
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from lieball.geometry import (
    HElement,
    MoebiusMap,
    ModelParams,
    bergman_B,
    cayley,
    cayley_inverse,
    h_kernel,
    hua_inverse,
    hua_transform,
    spectral_norm,
)
from lieball.intertwiners import (
    BoundaryFunction,
    CAlphaSpace,
    discrete_embedding_check,
    minimal_rep_scan,
    sigma_unitarity_residual,
    surface_measure_residual,
    tau_unitarity_residual,
)
from lieball.polynomials import (
    MultiPoly,
    RadialPolynomial,
    fock_inner,
    hnu_inner,
    random_poly,
    truncated_kernel,
)
from lieball.spherical import SpectralPoint, p_coeff, phi_hyp, phi_quad, phi_series, plancherel_measure
from lieball.transform import (
    fh_general,
    fh_inverse_general,
    fh_inverse_radial,
    fh_radial,
    plancherel_check,
)

RESULTS: list[str] = []
SEED = 20240611


def record(num: int, ok: bool, detail: str):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {detail}")


def unit(rng, n, count):
    b = rng.standard_normal((count, n))
    return b / np.linalg.norm(b, axis=1)[:, None]


def ball_points(rng, n, count, rmax):
    z = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return z * (rng.uniform(0.05, rmax, count) / spectral_norm(z))[:, None]


def raw_gram(params, kmax, atom):
    # int weight p_k p_l dlam (+ atom term), against Gamma(n/2) Gamma(nu-(n-2)/2) Gamma(nu)
    mu = plancherel_measure(params)
    rule = mu.rule(degree=4 * kmax + 2)
    P = np.array([p_coeff(k, rule.nodes, params) for k in range(kmax + 1)])
    G = (P * rule.weights * mu.weight(rule.nodes)) @ P.T
    if atom and mu.atom is not None:
        pa = np.array([p_coeff(k, mu.atom, params) for k in range(kmax + 1)])
        G = G + mu.atom_coefficient * np.outer(pa, pa)
    n, nu = params.n, params.nu
    const = math.gamma(n / 2) * math.gamma(nu - (n - 2) / 2) * math.gamma(nu)
    return G, const


def test_criterion_1_dual_hahn_orthogonality():
    worst = 0.0
    for n in (3, 4, 5):
        for nu in ((n - 1) / 2 + 0.3, n - 1.0, n + 0.5):
            G, const = raw_gram(ModelParams(n, nu), 6, atom=False)
            worst = max(worst, np.max(np.abs(G - const * np.eye(7))) / const)
    ok = worst < 1e-7
    record(1, ok, f"dual Hahn orthogonality, max relative error {worst:.2e} (tol 1e-7)")
    assert ok


def test_criterion_2_atom_orthogonality():
    worst, gap = 0.0, np.inf
    for nu in (0.6, 0.7, 0.9):
        p = ModelParams(3, nu)
        G, const = raw_gram(p, 6, atom=True)
        worst = max(worst, np.max(np.abs(G - const * np.eye(7))) / const)
        G0, _ = raw_gram(p, 0, atom=False)
        gap = min(gap, abs(G0[0, 0] / const - 1.0))
    ok = worst < 1e-7 and gap > 1e-2
    record(2, ok, f"with atom {worst:.2e} (tol 1e-7); dropping it breaks (0,0) by {gap:.3f} (> 1e-2)")
    assert ok


def test_criterion_3_spherical_routes():
    worst = 0.0
    radii = np.linspace(0.0, 0.5, 10)
    for n in (3, 4, 5):
        p = ModelParams(n, n - 1.0)
        for lam in (0.5, 1.0, 2.0, 5.0, 10.0):
            for r in radii:
                x = np.zeros(n)
                x[0] = r
                v = [complex(f(x, lam, p)) for f in (phi_hyp, phi_quad, phi_series)]
                worst = max(worst, max(abs(a - b) for a in v for b in v))
    ok = worst < 1e-8
    record(3, ok, f"three spherical-function routes, max deviation {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_4_norm_formula():
    exact = True
    for n in (3, 4, 5):
        q = MultiPoly.zzt(n)
        for k in range(9):
            want = Fraction(math.factorial(k))
            for j in range(k):
                want *= Fraction(n, 2) + j
            val = fock_inner(q ** k, q ** k)
            exact &= val.re == want and val.im == 0
    worst = 0.0
    mpmath.mp.dps = 30
    for n, nu in ((3, 0.7), (4, 2.3), (5, 6.1)):
        p = ModelParams(n, nu)
        q = MultiPoly.zzt(n)
        for k in range(7):
            ref = mpmath.factorial(k) * mpmath.rf(mpmath.mpf(n) / 2, k) / (
                mpmath.rf(nu, k) * mpmath.rf(mpmath.mpf(nu) - mpmath.mpf(n - 2) / 2, k))
            got = hnu_inner(q ** k, q ** k, p).real
            worst = max(worst, float(abs(got - ref) / ref))
    ok = exact and worst < 1e-14
    record(4, ok, f"exact Fock norms k<=8: {exact}; nu-scaled norm relative error {worst:.1e}")
    assert ok


def test_criterion_5_kernel_expansion():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for n, nu in ((3, 0.7), (3, 2.0), (4, 1.5), (5, 1.8), (5, 4.5)):
        p = ModelParams(n, nu)
        for _ in range(6):
            z, w = rng.standard_normal((2, n)) + 1j * rng.standard_normal((2, n))
            z *= rng.uniform(0.05, 0.4) / np.linalg.norm(z)
            w *= rng.uniform(0.05, 0.4) / np.linalg.norm(w)
            exact = h_kernel(z, w) ** (-nu)
            worst = max(worst, abs(truncated_kernel(z, w, p, 30) - exact) / abs(exact))
    ok = worst < 1e-8
    record(5, ok, f"kernel expansion m<=30, max relative error {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_6_plancherel_and_inversion():
    rng = np.random.default_rng(SEED)
    radial, general = 0.0, 0.0
    for n, nu in ((3, 2.0), (3, 0.7), (4, 1.3), (4, 3.0), (5, 1.8), (5, 4.5)):
        p = ModelParams(n, nu)
        f = RadialPolynomial(tuple(rng.uniform(-1, 1, 6)))
        t = fh_radial(f, p)
        fm = f.to_multipoly(n)
        lhs = hnu_inner(fm, fm, p).real
        rhs = plancherel_measure(p).integrate(lambda lam: np.abs(t(lam)) ** 2, degree=24)
        radial = max(radial, abs(lhs - rhs) / lhs)
        for r in (0.0, 0.25, 0.5):
            x = unit(rng, n, 1)[0] * r
            radial = max(radial, abs(fh_inverse_radial(t, x) - f(x)) / max(1.0, abs(f(x))))
        g = random_poly(n, 3, rng)
        T = fh_general(g, p)
        for x in unit(rng, n, 2) * 0.4:
            exact = g(x[None])[0]
            general = max(general, abs(fh_inverse_general(T, x) - exact) / max(1.0, abs(exact)))
        general = max(general, plancherel_check(g, p).residual)
    ok = radial < 1e-6 and general < 1e-5
    record(6, ok, f"radial degree 5 residual {radial:.2e} (tol 1e-6), "
                  f"general degree 3 residual {general:.2e} (tol 1e-5)")
    assert ok


def test_criterion_7_geometry():
    rng = np.random.default_rng(SEED)
    det_err = law_err = round_err = 0.0
    for n in (3, 4, 5):
        z, w = ball_points(rng, n, 50, 0.9), ball_points(rng, n, 50, 0.9)
        det_err = max(det_err, np.max(np.abs(np.linalg.det(bergman_B(z, w)) - h_kernel(z, w) ** n)))
        for _ in range(50):
            u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            m = MoebiusMap(u * rng.uniform(0.1, 0.7) / spectral_norm(u))
            a, b = ball_points(rng, n, 2, 0.8)
            lhs = h_kernel(m.apply(a), m.apply(b))
            rhs = m.jacobian_root(a) * h_kernel(a, b) * np.conj(m.jacobian_root(b))
            law_err = max(law_err, abs(lhs - rhs))
        for a in ball_points(rng, n, 10, 0.85):
            round_err = max(round_err, np.max(np.abs(hua_inverse(hua_transform(a)) - a)))
        pts = ball_points(rng, n, 20, 0.9)
        round_err = max(round_err, np.max(np.abs(cayley_inverse(cayley(pts)) - pts)))
    ok = det_err < 1e-9 and law_err < 1e-9 and round_err < 1e-10
    record(7, ok, f"det B - h^n {det_err:.1e}, kernel law {law_err:.1e} (tol 1e-9); "
                  f"Hua/Cayley round trips {round_err:.1e} (tol 1e-10)")
    assert ok


def test_criterion_8_surface_measure():
    rng = np.random.default_rng(SEED)
    funcs = [
        lambda b: np.ones(b.shape[:-1]),
        lambda b: b[..., 0],
        lambda b: np.exp(b[..., 0] - 0.5 * b[..., 1]),
        lambda b: (b[..., 0] * b[..., -1]) ** 2 + b[..., 1],
        lambda b: np.cos(3 * b[..., 0]) * (1 + b[..., -1]),
    ]
    worst = 0.0
    for i in range(10):
        g = HElement.random(3 + i % 3, rng, max_rapidity=1.5)
        for f in funcs:
            worst = max(worst, surface_measure_residual(g, f))
    ok = worst < 1e-8
    record(8, ok, f"surface-measure identity, 10 boosts x 5 functions, max residual {worst:.2e} (tol 1e-8)")
    assert ok


def test_criterion_9_unitarity():
    rng = np.random.default_rng(SEED)
    tau = sigma = 0.0
    for n in (3, 4, 5):
        p = ModelParams(n, n - 1.0)
        space = CAlphaSpace(n, (0.5 * (n - 2) + 0.3) / n)
        f = BoundaryFunction.from_polynomial(random_poly(n, 4, rng))
        for _ in range(2):
            g = HElement.random(n, rng, max_rapidity=1.5)
            tau = max(tau, tau_unitarity_residual(f, g, rng.uniform(0.2, 4.0), p))
            sigma = max(sigma, sigma_unitarity_residual(f, g, space))
    ok = tau < 1e-8 and sigma < 1e-5
    record(9, ok, f"tau_lambda residual {tau:.2e} (tol 1e-8), sigma_alpha residual {sigma:.2e} (tol 1e-5)")
    assert ok


def test_criterion_10_discrete_part():
    rng = np.random.default_rng(SEED)
    inter = vac = 0.0
    for n, nu in ((3, 0.7), (4, 1.2), (5, 1.9)):
        rep = discrete_embedding_check(ModelParams(n, nu), rng, samples=2)
        inter = max(inter, rep.intertwining_residual)
        vac = max(vac, rep.vacuum["max_deviation"])
    ok = inter < 1e-6 and vac < 1e-6
    record(10, ok, f"||T 1|| across closed form, series and quadrature {vac:.2e}; "
                   f"intertwining residual {inter:.2e} (tol 1e-6)")
    assert ok


def test_criterion_11_minimal_representation():
    prop, spread = 0.0, 0.0
    lines = []
    for n in (3, 4, 5):
        scan = minimal_rep_scan(ModelParams(n, 0.5 * (n - 2)), mmax=4)
        prop = max(prop, scan.max_residual)
        spread = max(spread, scan.spread)
        c1 = scan.results[1]
        cands = ", ".join(f"{k}={float(v):.6g}" for k, v in c1.candidates.items())
        lines.append(f"n={n}: C_m={[round(float(c.real), 6) for c in scan.constants]} vs {cands}")
    ok_prop = prop < 1e-8
    ok_const = spread < 1e-8
    record(11, ok_prop and ok_const,
           f"proportionality residual {prop:.2e} (tol 1e-8); constant spread over m<=4 "
           f"{spread:.3f} (tol 1e-8); " + "; ".join(lines))
    assert ok_prop, "T((z1+iz2)^m) is not proportional to (z1+iz2)^m"
    assert ok_const, "measured constant depends on m"


def _print_results():
    for line in RESULTS:
        print(line)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    tests.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    _print_results()
    sys.exit(1 if failed else 0)

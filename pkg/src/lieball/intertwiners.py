"""Boundary representations of the real form and the operators linking them
to the holomorphic series.

The boundary B is the unit sphere S^{n-1}. Functions on it are represented
either as :class:`BoundaryFunction` (finite sums of harmonic polynomials) or
as vectorised callables on arrays of unit vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import eval_gegenbauer, roots_jacobi, zeta

from .errors import ParameterError
from .geometry import HElement, LorentzElement, ModelParams, bilinear, bergman_kernel, h_kernel
from .polynomials import (
    GaussianRational,
    MultiPoly,
    fock_inner,
    harmonic_decompose,
    harmonic_dim,
)
from .quadrature import _zonal_nodes, sphere_rule, zonal_rule
from .specfun import pochhammer

__all__ = [
    "BoundaryFunction",
    "CAlphaSpace",
    "zonal_P",
    "kappa_closed",
    "kappa_funk_hecke",
    "vacuum_norm_series",
    "c_alpha_inner",
    "c_alpha_inner_quadrature",
    "transported_spectrum",
    "sigma_unitarity_residual",
    "tau_unitarity_residual",
    "t_nu",
    "t_nu_one_series",
    "cauchy_riemann_residual",
    "vacuum_norms",
    "pi_nu_apply",
    "tau_lambda_apply",
    "sigma_alpha_apply",
    "boundary_jacobian",
    "surface_measure_residual",
    "discrete_embedding_check",
    "minimal_rep_check",
    "minimal_rep_scan",
    "minimal_constant_closed",
]


def zonal_P(j: int, n: int, t):
    """Normalised Gegenbauer polynomial P_j(t) = C_j^{(n-2)/2}(t) / C_j^{(n-2)/2}(1)."""
    lam = 0.5 * (n - 2)
    return eval_gegenbauer(j, lam, t) / eval_gegenbauer(j, lam, 1.0)


# ---------------------------------------------------------------- boundary functions

@dataclass(frozen=True)
class BoundaryFunction:
    """f = sum_j f_j on S^{n-1}, each f_j a harmonic homogeneous polynomial."""

    n: int
    components: dict = field(default_factory=dict)

    @classmethod
    def from_polynomial(cls, p: MultiPoly) -> "BoundaryFunction":
        """Restriction of a polynomial to the sphere, split by harmonic degree."""
        comps: dict[int, MultiPoly] = {}
        for d, part in p.homogeneous_parts().items():
            for _, k, h, _ in harmonic_decompose(part, d).blocks:
                j = d - 2 * k
                comps[j] = comps.get(j, MultiPoly(p.n)) + h
        return cls(p.n, {j: h for j, h in comps.items() if h})

    @property
    def degree(self) -> int:
        return max(self.components, default=-1)

    def as_polynomial(self) -> MultiPoly:
        out = MultiPoly(self.n)
        for h in self.components.values():
            out = out + h
        return out

    def __call__(self, b):
        b = np.asarray(b, dtype=float)
        out = np.zeros(b.shape[:-1], dtype=complex)
        for h in self.components.values():
            out = out + h(b)
        return out

    def l2_inner(self, other: "BoundaryFunction") -> complex:
        """L^2(sigma) pairing: Fock pairing of each degree over (n/2)_j."""
        total = 0j
        for j, h in self.components.items():
            g = other.components.get(j)
            if g is not None:
                total += complex(fock_inner(h, g)) / pochhammer(0.5 * self.n, j)
        return total


# ---------------------------------------------------------------- C_alpha spaces

def kappa_closed(j: int, nup: float, n: int) -> float:
    """Eigenvalue of f -> int f(zeta) |zeta - eta|^{-2 nup} dsigma on degree-j harmonics.

    Gamma(n/2) Gamma(n-1-2nup) (nup)_j / (Gamma(n/2 - nup) Gamma(n-1-nup+j)).
    """
    if not nup < 0.5 * (n - 1):
        raise ParameterError("kernel power is not integrable on the sphere")
    logv = (
        math.lgamma(0.5 * n) + math.lgamma(n - 1 - 2 * nup)
        - math.lgamma(0.5 * n - nup) - math.lgamma(n - 1 - nup + j)
    )
    return math.exp(logv) * pochhammer(nup, j)


def kappa_funk_hecke(j: int, nup: float, n: int, nodes: int = 64) -> float:
    """Same eigenvalue by Funk-Hecke: int (2 - 2t)^{-nup} P_j(t) dmu_n(t).

    The singular factor is absorbed into a Gauss-Jacobi weight, so the rule is
    exact for j < 2 * nodes.
    """
    a = 0.5 * (n - 3) - nup
    b = 0.5 * (n - 3)
    if a <= -1:
        raise ParameterError("kernel power is not integrable on the sphere")
    t, w = roots_jacobi(nodes, a, b)
    # normalisation of dmu_n = c (1 - t^2)^{(n-3)/2} dt
    c = math.exp(math.lgamma(0.5 * n) - 0.5 * math.log(math.pi) - math.lgamma(0.5 * (n - 1)))
    return float(c * 2.0 ** (-nup) * np.sum(w * zonal_P(j, n, t)))


def vacuum_norm_series(nu: float, n: int, terms: int = 1_000_000) -> float:
    """sum_k (nu)_k (nu - (n-2)/2)_k / (k! (n/2)_k), with an asymptotic tail.

    The summand behaves like C k^{2 nu - n} (1 + e1/k + ...); the tail past
    ``terms`` is summed with Hurwitz zeta functions.
    """
    a, b, c = nu, nu - 0.5 * (n - 2), 0.5 * n
    k = np.arange(terms - 1, dtype=float)
    ratios = (a + k) * (b + k) / ((1.0 + k) * (c + k))
    t = np.concatenate([[1.0], np.cumprod(ratios)])
    head = math.fsum(t)
    p = c + 1.0 - a - b
    if p <= 1:
        raise ParameterError("series diverges outside the discrete range")
    C = math.exp(math.lgamma(c) - math.lgamma(a) - math.lgamma(b))
    e1 = 0.5 * (a * (a - 1) + b * (b - 1) - c * (c - 1))
    tail = C * (zeta(p, terms) + e1 * zeta(p + 1, terms))
    return head + float(tail)


class CAlphaSpace:
    """Hilbert space C_alpha on S^{n-1} with kernel |zeta - eta|^{-2 n alpha}.

    Its norm is diagonal on harmonic degrees, with eigenvalues ``kappa(j)``.
    """

    def __init__(self, n: int, alpha: float):
        lo, hi = (n - 2) / (2 * n), (n - 1) / (2 * n)
        if not (lo - 1e-14 <= alpha < hi):
            raise ParameterError(f"alpha={alpha} outside [{lo}, {hi}) for n={n}")
        self.n = n
        self.alpha = alpha
        self.nup = n * alpha

    @lru_cache(maxsize=None)
    def kappa(self, j: int) -> float:
        return kappa_closed(j, self.nup, self.n)

    def table(self, jmax: int) -> np.ndarray:
        return np.array([self.kappa(j) for j in range(jmax + 1)])


def c_alpha_inner(f: BoundaryFunction, g: BoundaryFunction, space: CAlphaSpace) -> complex:
    """<f, g> in C_alpha = sum_j kappa_j <f_j, g_j>_{L^2}."""
    total = 0j
    for j, h in f.components.items():
        other = g.components.get(j)
        if other is not None:
            total += space.kappa(j) * complex(fock_inner(h, other)) / pochhammer(0.5 * f.n, j)
    return total


def _as_callable(f):
    return f if callable(f) else (lambda b: np.full(np.shape(b)[:-1], complex(f)))


def c_alpha_inner_quadrature(f, g, space: CAlphaSpace, outer_order: int = 12,
                             inner_nodes: int = 24, inner_order: int = 12) -> complex:
    """Double integral of f(zeta) conj g(eta) |zeta - eta|^{-2 nup} by quadrature.

    The inner integral around each outer node eta uses a rule aligned with
    eta, with Gauss-Jacobi nodes in t = zeta.eta absorbing (1 - t)^{-nup}.
    """
    n, nup = space.n, space.nup
    f, g = _as_callable(f), _as_callable(g)
    outer = sphere_rule(n, outer_order)
    a = 0.5 * (n - 3) - nup
    b = 0.5 * (n - 3)
    t, wt = roots_jacobi(inner_nodes, a, b)
    c = math.exp(math.lgamma(0.5 * n) - 0.5 * math.log(math.pi) - math.lgamma(0.5 * (n - 1)))
    wt = c * 2.0 ** (-nup) * wt
    sub = sphere_rule(n - 1, inner_order)
    s = np.sqrt(1.0 - t * t)
    # local frame: zeta = t eta + s (E_perp @ sub)
    total = 0j
    for eta, w_out in zip(outer.nodes, outer.weights):
        frame = _frame_of(eta)
        perp = sub.nodes @ frame[:, 1:].T
        zeta_pts = t[:, None, None] * eta + s[:, None, None] * perp[None, :, :]
        vals = f(zeta_pts.reshape(-1, n)).reshape(len(t), len(sub))
        inner = np.sum(wt[:, None] * sub.weights[None, :] * vals)
        total += w_out * inner * np.conj(g(eta[None, :])[0])
    return complex(total)


def _frame_of(axis) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    M = np.eye(len(axis))
    M[:, 0] = axis
    Qm, R = np.linalg.qr(M)
    return Qm * np.sign(R[0, 0])


# ---------------------------------------------------------------- group actions

def boundary_jacobian(g: HElement, zeta, method: str = "closed", levels: int = 8):
    """Jacobian J_g(zeta) of g at boundary points (the full n-dimensional one).

    ``method="closed"`` uses ((1 - |u|^2) / (1 + 2 zeta.u + |u|^2))^n;
    ``method="limit"`` takes the interior Moebius Jacobian at r zeta,
    r = 1 - 2^{-j}, and Richardson-extrapolates r -> 1.
    """
    g = _as_h(g)
    zeta = np.asarray(zeta, dtype=float)
    if method == "closed":
        return g.boundary_jacobian_root(zeta) ** g.n
    if method != "limit":
        raise ParameterError("method must be 'closed' or 'limit'")
    hs = [2.0 ** (-j) for j in range(2, 2 + levels)]
    vals = [np.real(np.linalg.det(g.rotation) * g._m.jacobian_det((1.0 - h) * zeta)) for h in hs]
    # Neville extrapolation to h = 0 (the Jacobian is smooth in r)
    table = [np.asarray(v, dtype=float) for v in vals]
    for m in range(1, levels):
        table = [
            (hs[i] * table[i + 1] - hs[i + m] * table[i]) / (hs[i] - hs[i + m])
            for i in range(levels - m)
        ]
    return table[0]


def _as_h(g) -> HElement:
    return HElement.from_lorentz(g) if isinstance(g, LorentzElement) else g


def _boundary_preimage(g, b):
    ginv = _as_h(g).inverse()
    pts = np.real(ginv.apply(np.asarray(b, dtype=complex)))
    root = ginv.boundary_jacobian_root(b)
    return pts, root


def tau_lambda_apply(g: HElement, lam: float, f, b, params: ModelParams):
    """Principal series: J_{g^{-1}}(b)^{(i lam + rho)/n} f(g^{-1} b)."""
    f = _as_callable(f)
    pts, root = _boundary_preimage(g, b)
    s = 1j * lam + params.rho
    return np.exp(s * np.log(root)) * f(pts)


def sigma_alpha_apply(g: HElement, alpha: float, f, b):
    """Complementary series on C_alpha: J_{g^{-1}}(b)^beta f(g^{-1} b),
    beta = (n-1)/n - alpha."""
    f = _as_callable(f)
    pts, root = _boundary_preimage(g, b)
    n = np.shape(b)[-1]
    beta = (n - 1) / n - alpha
    return root ** (n * beta) * f(pts)


def pi_nu_apply(g: HElement, F, z, params: ModelParams):
    """Holomorphic series: J_{g^{-1}}(z)^{nu/n} F(g^{-1} z)."""
    ginv = _as_h(g).inverse()
    z = np.asarray(z, dtype=complex)
    return np.exp(params.nu * np.log(ginv.jacobian_root(z))) * F(ginv.apply(z))


def surface_measure_residual(g: HElement, f, axis_order: int = 240, order: int = 24) -> float:
    """|int f(g zeta) J_g(zeta)^{(n-1)/n} dsigma - int f dsigma|."""
    n = g.n
    u = g.u
    axis = u / np.linalg.norm(u) if np.linalg.norm(u) > 0 else None
    rule = sphere_rule(n, order, axis=axis, axis_order=axis_order)
    lhs = np.sum(
        rule.weights
        * f(np.real(g.apply(rule.nodes.astype(complex))))
        * g.boundary_jacobian_root(rule.nodes) ** (n - 1)
    )
    plain = sphere_rule(n, order, axis=g.rotation @ u / np.linalg.norm(u) if axis is not None else None,
                        axis_order=axis_order)
    rhs = np.sum(plain.weights * f(plain.nodes))
    return float(abs(lhs - rhs))


# ---------------------------------------------------------------- transported spectra

def transported_spectrum(f: BoundaryFunction, g: HElement, beta: complex, jmax: int,
                         nodes: int = 400) -> np.ndarray:
    """||P_j F||^2_{L^2}, j = 0..jmax, for F(b) = J_{g^{-1}}(b)^beta f(g^{-1} b).

    The rotation part of g and a conjugating rotation do not change these
    numbers, so g is reduced to a boost along e_1; with zeta = (t, sqrt(1-t^2)
    eta) the problem splits into sectors of harmonic degree l in eta, and the
    degree-j part of each sector is a Gegenbauer coefficient in t.
    """
    n = f.n
    u = g.u
    a = float(np.linalg.norm(u))
    if a > 0:
        Q = _frame_of(u / a)
        p = f.as_polynomial().linear_substitute(Q)
    else:
        p = f.as_polynomial()
    t, wt = _zonal_nodes(n, 2 * nodes - 2)
    # image of (t, sqrt(1-t^2), 0, ...) under the inverse boost along e1
    s = np.sqrt(1.0 - t * t)
    rep = np.zeros((len(t), n))
    rep[:, 0] = t
    rep[:, 1] = s
    boost = HElement(u=np.r_[a, np.zeros(n - 1)])
    inv = boost.inverse()
    img = np.real(inv.apply(rep.astype(complex)))
    tp = img[:, 0]
    cfac = img[:, 1] / s
    jroot = inv.boundary_jacobian_root(rep)
    jb = np.exp(beta * n * np.log(jroot))

    # sector data: per harmonic degree l in eta, a list of (B(t), H(eta))
    sectors: dict[int, list] = {}
    for alpha, coef in p.terms.items():
        a0, gamma = alpha[0], alpha[1:]
        g_deg = sum(gamma)
        eta_mono = MultiPoly(n - 1, {gamma: 1})
        if n - 1 >= 2 and g_deg >= 1:
            blocks = harmonic_decompose(eta_mono, g_deg).blocks
            parts = [(g_deg - 2 * k, h) for _, k, h, _ in blocks]
        else:
            parts = [(g_deg, eta_mono)]
        base = complex(coef) * jb * tp ** a0 * cfac ** g_deg
        for ell, h in parts:
            # A(t) H(eta) with A = base * (1 - t^2)^{g_deg/2}; divide out (1-t^2)^{l/2}
            B = base * (1.0 - t * t) ** ((g_deg - ell) // 2)
            sectors.setdefault(ell, []).append((B, h))

    lam0 = 0.5 * (n - 2)
    out = np.zeros(jmax + 1)
    for ell, items in sectors.items():
        if n - 1 == 1:
            # S^0 = {+-1}: "harmonics" are constants (l=0) and odd (l=1) functions
            gram = np.array([[complex(h1(np.array([[1.0]]))[0] * np.conj(h2(np.array([[1.0]]))[0]))
                              for _, h2 in items] for _, h1 in items])
        else:
            poch = pochhammer(0.5 * (n - 1), ell)
            gram = np.array([[complex(fock_inner(h1, h2)) / poch for _, h2 in items] for _, h1 in items])
        Bs = np.array([B for B, _ in items])
        wl = wt * (1.0 - t * t) ** ell
        for j in range(ell, jmax + 1):
            C = eval_gegenbauer(j - ell, lam0 + ell, t)
            norm = np.sum(wl * C * C)
            beta_c = Bs @ (wl * C)
            out[j] += float(np.real(beta_c @ gram @ np.conj(beta_c))) / norm
    return out


def sigma_unitarity_residual(f: BoundaryFunction, g: HElement, space: CAlphaSpace,
                             jmax: int = 120) -> float:
    """Relative gap between ||sigma_alpha(g) f||_C and ||f||_C (squared norms)."""
    beta = (space.n - 1) / space.n - space.alpha
    spectrum = transported_spectrum(f, g, beta, jmax)
    ref = c_alpha_inner(f, f, space).real
    return float(abs(np.dot(space.table(jmax), spectrum) - ref) / ref)


def tau_unitarity_residual(f, g: HElement, lam: float, params: ModelParams,
                           order: int = 24, axis_order: int = 200) -> float:
    """Relative gap between ||tau_lambda(g) f||_{L^2} and ||f||_{L^2}.

    Both integrals use sphere quadrature; the transported one resolves the
    direction where the Jacobian peaks.
    """
    f = _as_callable(f)
    n = params.n
    plain = sphere_rule(n, order)
    ref = float(np.sum(plain.weights * np.abs(f(plain.nodes)) ** 2))
    w = g.rotation @ g.u
    axis = -w / np.linalg.norm(w) if np.linalg.norm(w) > 0 else None
    rule = sphere_rule(n, order, axis=axis, axis_order=axis_order)
    vals = tau_lambda_apply(g, lam, f, rule.nodes, params)
    got = float(np.sum(rule.weights * np.abs(vals) ** 2))
    return abs(got - ref) / ref


# ---------------------------------------------------------------- T_nu

def t_nu(f, params: ModelParams, z, order: int = 40):
    """T_nu f(z) = int f(zeta) h(z, zeta)^{-nu} dsigma(zeta) by sphere quadrature."""
    f = _as_callable(f)
    rule = sphere_rule(params.n, order)
    z = np.asarray(z, dtype=complex)
    fv = f(rule.nodes)
    K = bergman_kernel(z[..., None, :], rule.nodes, params.nu, certify=False)
    return np.sum(K * (rule.weights * fv), axis=-1)


def cauchy_riemann_residual(F, z, step: float = 1e-5) -> float:
    """max_j |dF/d conj(z_j)| by central differences, relative to max |dF/dz_j|."""
    z = np.asarray(z, dtype=complex)
    worst, scale = 0.0, 0.0
    for j in range(z.shape[-1]):
        e = np.zeros_like(z)
        e[..., j] = step
        dx = (F(z + e) - F(z - e)) / (2 * step)
        dy = (F(z + 1j * e) - F(z - 1j * e)) / (2 * step)
        worst = max(worst, float(np.max(np.abs(0.5 * (dx + 1j * dy)))))
        scale = max(scale, float(np.max(np.abs(0.5 * (dx - 1j * dy)))))
    return worst / max(scale, 1e-300)


def t_nu_one_series(z, params: ModelParams, terms: int = 400):
    """T_nu 1(z) = sum_k (nu)_k (nu - (n-2)/2)_k / (k! (n/2)_k) (zz^t)^k."""
    z = np.asarray(z, dtype=complex)
    q = bilinear(z, z)
    a, b, c = params.nu, params.nu - params.wallach_bound, 0.5 * params.n
    term = np.ones_like(q)
    total = np.ones_like(q)
    for k in range(terms):
        term = term * (a + k) * (b + k) / ((1 + k) * (c + k)) * q
        total = total + term
        if np.all(np.abs(term) < 1e-18 * np.abs(total)):
            break
    return total


# ---------------------------------------------------------------- checks

@dataclass
class DiscreteReport:
    intertwining_residual: float
    isometry_residual: float
    vacuum: dict
    atom_residual: float

    def passed(self, tol_intertwine: float = 1e-6, tol_iso: float = 1e-5) -> bool:
        return (
            self.intertwining_residual < tol_intertwine
            and self.isometry_residual < tol_iso
            and self.vacuum["max_deviation"] < 1e-6
            and self.atom_residual < 1e-6
        )


def _harmonic_basis(n: int, jmax: int) -> list:
    """A few harmonic polynomials of each degree <= jmax (not a full basis)."""
    out = [MultiPoly.constant(n)]
    z = [MultiPoly.variable(n, i) for i in range(n)]
    for j in range(1, jmax + 1):
        # (z_1 + i z_2)^j is harmonic; add a real zonal-type one too
        out.append((z[0] + z[1] * 1j) ** j)
        h = harmonic_decompose(z[0] ** j, j).blocks[0][2]
        out.append(h)
    return out


def discrete_embedding_check(params: ModelParams, rng: np.random.Generator,
                             samples: int = 4, rapidity: float = 0.6) -> DiscreteReport:
    """Verify that T_nu is an isometric intertwiner from C_{nu/n} into H_nu.

    (i) T_nu sigma(g) f = pi_nu(g) T_nu f at sample points; (ii) ||T_nu h||_nu
    = ||h||_C for harmonic h, with ||T_nu h||_nu summed from the Taylor blocks
    of T_nu h, and the vacuum norm by several routes; (iii) the atom mass of
    the Plancherel measure equals 1 / ||T_nu 1||_nu^2.
    """
    if not params.has_atom:
        raise ParameterError("discrete part requires (n-2)/2 < nu < (n-1)/2")
    n, nu = params.n, params.nu
    space = CAlphaSpace(n, nu / n)
    alpha = nu / n

    # (i) intertwining
    f = BoundaryFunction.from_polynomial(
        MultiPoly.constant(n, 1) + MultiPoly.variable(n, 0) * 0.5
        + MultiPoly.variable(n, 1) * MultiPoly.variable(n, 2 % n) * (0.25j)
    )
    worst = 0.0
    for _ in range(samples):
        g = HElement.random(n, rng, max_rapidity=rapidity)
        z = (rng.standard_normal(n) + 1j * rng.standard_normal(n))
        z *= 0.35 / np.linalg.norm(z)
        lhs = _t_nu_transported(f, g, alpha, params, z)
        rhs = pi_nu_apply(g, lambda w: t_nu(f, params, w), z, params)
        worst = max(worst, float(abs(lhs - rhs) / max(1.0, abs(rhs))))

    # (ii) isometry on harmonics: T_nu h = (nu)_j/(n/2)_j 2F1(nu+j, c; j+n/2; q) h
    iso = 0.0
    for h in _harmonic_basis(n, 3):
        bf = BoundaryFunction.from_polynomial(h)
        j = bf.degree
        c_norm = c_alpha_inner(bf, bf, space).real
        tn = _t_nu_harmonic_norm_sq(h, j, params)
        iso = max(iso, abs(tn - c_norm) / c_norm)

    vac = vacuum_norms(params)
    # (iii) 1 has transform 1 at the atom, so its discrete component is
    # mass * T_nu 1 and Pythagoras gives mass * ||T_nu 1||^2 = 1
    from .spherical import plancherel_measure

    mass = plancherel_measure(params).atom_mass
    return DiscreteReport(worst, iso, vac, abs(mass * vac["t_nu_blocks"] - 1.0))


def vacuum_norms(params: ModelParams) -> dict:
    """||1||^2_{C_{nu/n}} and ||T_nu 1||^2_nu by four routes."""
    n, nu = params.n, params.nu
    gauss = kappa_closed(0, nu, n)
    series = vacuum_norm_series(nu, n)
    funk = kappa_funk_hecke(0, nu, n)
    space = CAlphaSpace(n, nu / n)
    quad = c_alpha_inner_quadrature(1.0, 1.0, space, outer_order=4, inner_nodes=40, inner_order=4).real
    tn1 = _t_nu_harmonic_norm_sq(MultiPoly.constant(n), 0, params)
    vals = {"gauss_sum": gauss, "series": series, "funk_hecke": funk,
            "double_quadrature": quad, "t_nu_blocks": tn1}
    ref = gauss
    vals["max_deviation"] = max(abs(v - ref) / ref for k, v in vals.items())
    return vals


def _t_nu_transported(f: BoundaryFunction, g: HElement, alpha: float, params: ModelParams,
                      z, order: int = 40, axis_order: int = 200):
    """T_nu (sigma_alpha(g) f)(z) with a rule resolving the boost direction."""
    n = params.n
    u = g.rotation @ g.u
    axis = -u / np.linalg.norm(u) if np.linalg.norm(u) > 0 else None
    rule = sphere_rule(n, order, axis=axis, axis_order=axis_order)
    vals = sigma_alpha_apply(g, alpha, f, rule.nodes)
    K = bergman_kernel(np.asarray(z, dtype=complex)[None, :], rule.nodes, params.nu, certify=False)
    return complex(np.sum(rule.weights * vals * K))


def _t_nu_harmonic_norm_sq(h: MultiPoly, j: int, params: ModelParams, kmax: int = 400000) -> float:
    """||T_nu h||_nu^2 from the Taylor blocks (zz^t)^k h of T_nu h.

    The block coefficients are read off the kernel expansion; the norm is the
    sum of |coef_k|^2 ||(zz^t)^k h||_nu^2, with a Hurwitz-zeta tail.
    """
    n, nu = params.n, params.nu
    c = nu - params.wallach_bound
    half = 0.5 * n
    l2 = complex(fock_inner(h, h)).real / pochhammer(half, j)
    # coef_k = (nu)_{j+k} (c)_k / ((n/2)_j k! (j+n/2)_k)
    # ||(zz^t)^k h||_nu^2 = (n/2)_j k! (j+n/2)_k l2 / ((nu)_{j+k} (c)_k)
    # product: (nu)_{j+k} (c)_k / ((n/2)_j k! (j+n/2)_k) * l2
    lead = pochhammer(nu, j) / pochhammer(half, j)
    k = np.arange(kmax - 1, dtype=float)
    ratios = (nu + j + k) * (c + k) / ((1.0 + k) * (j + half + k))
    terms = np.concatenate([[1.0], np.cumprod(ratios)])
    head = math.fsum(terms)
    a, b, cc = nu + j, c, j + half
    p = cc + 1.0 - a - b
    C = math.exp(math.lgamma(cc) - math.lgamma(a) - math.lgamma(b))
    e1 = 0.5 * (a * (a - 1) + b * (b - 1) - cc * (cc - 1))
    tail = C * (zeta(p, kmax) + e1 * zeta(p + 1, kmax))
    return lead * (head + float(tail)) * l2


@dataclass
class MinimalRepResult:
    m: int
    constant: complex
    residual: float
    candidates: dict
    closest: str


def minimal_rep_check(m: int, params: ModelParams, rng: np.random.Generator | None = None,
                      samples: int = 12, order: int = 40) -> MinimalRepResult:
    """Measure C_m in T((zeta_1 + i zeta_2)^m) = C_m (z_1 + i z_2)^m at the
    minimal weight nu = (n-2)/2, by least squares over sample points."""
    if not params.is_minimal:
        raise ParameterError("minimal_rep_check needs nu = (n-2)/2")
    n = params.n
    rng = rng or np.random.default_rng(0)
    f = lambda b: (b[..., 0] + 1j * b[..., 1]) ** m  # noqa: E731
    zs = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    zs *= (0.4 * rng.uniform(0.3, 1.0, samples) / np.linalg.norm(zs, axis=1))[:, None]
    lhs = t_nu(f, params, zs, order=order)
    rhs = (zs[:, 0] + 1j * zs[:, 1]) ** m
    C = complex(np.vdot(rhs, lhs) / np.vdot(rhs, rhs))
    resid = float(np.max(np.abs(lhs - C * rhs)) / max(np.max(np.abs(lhs)), 1e-300))
    cands = {"2/(n-2)": 2.0 / (n - 2), "(n-2)/(2 pi^2)": (n - 2) / (2 * math.pi ** 2)}
    closest = min(cands, key=lambda k: abs(cands[k] - C))
    return MinimalRepResult(m, C, resid, cands, closest)


@dataclass
class MinimalScan:
    results: list
    spread: float

    @property
    def constants(self) -> list:
        return [r.constant for r in self.results]

    @property
    def max_residual(self) -> float:
        return max(r.residual for r in self.results)


def minimal_rep_scan(params: ModelParams, mmax: int = 4, **kwargs) -> MinimalScan:
    """Run :func:`minimal_rep_check` for m = 0..mmax and measure how far the
    constants are from a single value (max |C_m - C_0| / |C_0|)."""
    res = [minimal_rep_check(m, params, **kwargs) for m in range(mmax + 1)]
    c0 = res[0].constant
    spread = max(abs(r.constant - c0) for r in res) / abs(c0)
    return MinimalScan(res, float(spread))


def minimal_constant_closed(m: int, n: int) -> float:
    """((n-2)/2)_m / (n/2)_m: the value T_{(n-2)/2} takes on (zeta_1 + i zeta_2)^m."""
    return pochhammer(0.5 * (n - 2), m) / pochhammer(0.5 * n, m)

"""Fourier-Helgason transform of polynomials in H_nu, its inversion and the
Plancherel identity.

The transform pairs a polynomial f against the holomorphic functions
g_{lam,b}(z) = (1 - zz^t)^{s-nu} h(z, b)^{-s}, s = i lam + rho, whose
restriction to the real ball is the Harish-Chandra e-function. Because f is a
polynomial only finitely many Taylor blocks of g contribute.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ParameterError
from .geometry import HElement, ModelParams
from .intertwiners import (
    BoundaryFunction,
    CAlphaSpace,
    c_alpha_inner,
    pi_nu_apply,
    tau_lambda_apply,
)
from .polynomials import (
    MultiPoly,
    RadialPolynomial,
    harmonic_decompose,
    hnu_inner,
    hnu_norm_sq_radial,
    monomials,
)
from .quadrature import QuadratureRule, sphere_rule, zonal_rule
from .specfun import pochhammer
from .spherical import PlancherelMeasure, SpectralPoint, p_coeff, plancherel_measure, rinv_e_function

__all__ = [
    "RadialTransform",
    "FullTransform",
    "fh_radial",
    "fh_general",
    "fh_inverse_radial",
    "fh_inverse_general",
    "plancherel_check",
    "PlancherelReport",
    "taylor_blocks",
    "equivariance_residual",
]


def _s_of(lam, params: ModelParams):
    if isinstance(lam, SpectralPoint):
        return complex(1j * lam.lam + params.rho)
    return 1j * np.asarray(lam, dtype=float) + params.rho


def _rinv_phi(x, s, params: ModelParams, order: int = 160):
    """h(x,x)^{-nu/2} phi(x) at one real point for an array of exponents s."""
    x = np.asarray(x, dtype=float)
    r2 = float(x @ x)
    if r2 >= 1.0:
        raise ParameterError("inversion needs |x| < 1")
    r = math.sqrt(r2)
    rule = zonal_rule(params.n, order)
    base = (1.0 - r2) / (1.0 - 2.0 * r * rule.nodes + r2)
    vals = np.exp(np.multiply.outer(np.asarray(s), np.log(base)))
    return (1.0 - r2) ** (-params.nu) * (vals @ rule.weights)


# ---------------------------------------------------------------- radial

@dataclass(frozen=True)
class RadialTransform:
    """f~(lam) = sum_k p_k(lam) <f, e_k>_nu with e_k the normalised (zz^t)^k."""

    params: ModelParams
    spectral_coeffs: tuple

    def __call__(self, lam):
        out = 0.0
        for k, a in enumerate(self.spectral_coeffs):
            pk = p_coeff(k, lam, self.params)
            if np.any(np.iscomplex(pk)):
                raise ParameterError("p_k must be real on the spectrum")
            out = out + pk * a
        return out


def fh_radial(f: RadialPolynomial, params: ModelParams) -> RadialTransform:
    """Transform of sum_k a_k (zz^t)^k: coefficients a_k ||(zz^t)^k||_nu."""
    if params.is_minimal:
        raise ParameterError("the transform needs nu above the Wallach bound")
    coeffs = tuple(
        complex(a) * math.sqrt(hnu_norm_sq_radial(k, params)) for k, a in enumerate(f.coeffs)
    )
    return RadialTransform(params, coeffs)


def fh_inverse_radial(t: RadialTransform, x, rule: QuadratureRule | None = None,
                      atom: bool = True) -> complex:
    """int f~(lam) R^{-1}phi_lam(x) dmu(lam), with the atom term when present."""
    params = t.params
    mu = plancherel_measure(params)
    if rule is None:
        rule = mu.rule(degree=2 * len(t.spectral_coeffs) + 2)
    lam = rule.nodes
    vals = t(lam) * _rinv_phi(x, 1j * lam + params.rho, params)
    total = complex(np.sum(rule.weights * mu.density(lam) * vals))
    if atom and mu.atom is not None:
        total += mu.atom_mass * complex(t(mu.atom)) * complex(_rinv_phi(x, params.nu, params))
    return total


# ---------------------------------------------------------------- general

@lru_cache(maxsize=None)
def _exponents(n: int, d: int) -> tuple:
    return tuple(monomials(n, d))


def _multinom(alpha) -> int:
    out = math.factorial(sum(alpha))
    for a in alpha:
        out //= math.factorial(a)
    return out


@lru_cache(maxsize=None)
def _taylor_structure(alpha: tuple) -> tuple:
    """Coefficient of z^alpha in (z.b)^a (zz^t)^c as (c, weight, b-exponent) terms."""
    n = len(alpha)
    out = []
    d = sum(alpha)
    for c in range(d // 2 + 1):
        for gamma in _exponents(n, c):
            beta = tuple(x - 2 * y for x, y in zip(alpha, gamma))
            if min(beta) < 0:
                continue
            out.append((c, _multinom(gamma) * _multinom(beta), beta))
    return tuple(out)


def _A_table(s, nu: float, dmax: int):
    """A[a, c] = sum_i (-1)^i (s)_{a+i} 2^a/(i! a!) (nu-s)_{c-i}/(c-i)!, as
    arrays over s, for a + 2c <= dmax: the coefficient of t^a q^c in
    (1 - q)^{s-nu} (1 - 2t + q)^{-s}."""
    s = np.asarray(s, dtype=complex)
    ps = [np.ones_like(s)]
    pv = [np.ones_like(s)]
    for m in range(dmax):
        ps.append(ps[-1] * (s + m))
        pv.append(pv[-1] * (nu - s + m))
    A = {}
    for a in range(dmax + 1):
        for c in range((dmax - a) // 2 + 1):
            acc = np.zeros_like(s)
            for i in range(c + 1):
                acc = acc + (-1) ** i * ps[a + i] * pv[c - i] / (
                    math.factorial(i) * math.factorial(c - i)
                )
            A[a, c] = acc * 2.0 ** a / math.factorial(a)
    return A


def _dual_coeffs(f: MultiPoly, params: ModelParams) -> dict:
    """F_alpha = (f, z^alpha)_nu for every |alpha| <= deg f, nonzero ones only.

    Blocks of f are orthogonal, so each block contributes its own Fock
    coefficient alpha! 2^{-|alpha|} divided by the block weight.
    """
    if params.is_minimal and f.degree > 0:
        raise ParameterError("the transform needs nu above the Wallach bound")
    c = params.nu - params.wallach_bound
    out: dict = {}
    for d, part in f.homogeneous_parts().items():
        for m, k, _, comp in harmonic_decompose(part, d).blocks:
            scale = pochhammer(params.nu, m - k) * pochhammer(c, k)
            for alpha, coef in comp.terms.items():
                w = math.prod(math.factorial(e) for e in alpha) / 2.0 ** m
                out[alpha] = out.get(alpha, 0j) + complex(coef) * w / scale
    return {a: v for a, v in out.items() if v != 0}


@dataclass(frozen=True)
class FullTransform:
    """(lam, b) -> f~(lam, b) = (f, g_{lam,b})_nu for a stored polynomial f."""

    params: ModelParams
    poly: MultiPoly
    dual: dict = field(repr=False)

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.dual), default=0)

    def _evaluate_s(self, s, b):
        s = np.atleast_1d(np.asarray(s, dtype=complex))
        b = np.atleast_2d(np.asarray(b, dtype=float))
        A = _A_table(np.conj(s), self.params.nu, self.degree)
        out = np.zeros((len(s), len(b)), dtype=complex)
        bpow_cache: dict = {}
        for alpha, Fa in self.dual.items():
            d = sum(alpha)
            ca = np.zeros((len(s), len(b)), dtype=complex)
            for c, w, beta in _taylor_structure(alpha):
                bp = bpow_cache.get(beta)
                if bp is None:
                    bp = np.prod(b ** np.array(beta), axis=1)
                    bpow_cache[beta] = bp
                ca += w * np.multiply.outer(A[d - 2 * c, c], bp)
            out += Fa * ca
        return out

    def __call__(self, lam, b):
        """Values on the grid lam x b (arrays) or at an atom SpectralPoint.

        Returns shape (len(lam), len(b)); conjugation of the e-function is
        taken at real lam, and the atom uses s = n - 1 - nu.
        """
        return self._evaluate_s(_s_of(lam, self.params), b)


def fh_general(f: MultiPoly, params: ModelParams, lam=None, b=None):
    """Transform object for f, or its values when ``lam`` and ``b`` are given."""
    t = FullTransform(params, f, _dual_coeffs(f, params))
    if lam is None:
        return t
    return t(lam, b)


def _boundary_rule(n: int, degree: int, x=None, axis_order: int = 160) -> QuadratureRule:
    order = max(2 * degree, 4)
    x = None if x is None else np.asarray(x, dtype=float)
    if x is None or np.linalg.norm(x) == 0:
        return sphere_rule(n, order)
    return sphere_rule(n, order, axis=x / np.linalg.norm(x), axis_order=axis_order)


def fh_inverse_general(t: FullTransform, x, rule: QuadratureRule | None = None,
                       atom: bool = True, axis_order: int = 160) -> complex:
    """int int f~(lam,b) g_{lam,b}(x) db dmu(lam) at a real point x.

    The b-integral uses a sphere rule refined along x, where h(x,b)^{-s}
    peaks. The atom enters with the kernel h(x,b)^{-nu}.
    """
    params = t.params
    x = np.asarray(x, dtype=float)
    mu = plancherel_measure(params)
    if rule is None:
        rule = mu.rule(degree=2 * t.degree + 2)
    brule = _boundary_rule(params.n, t.degree, x, axis_order)
    lam = rule.nodes
    ft = t(lam, brule.nodes)
    s = 1j * lam + params.rho
    # g_{lam,b}(x) on real x = (1-|x|^2)^{s-nu} h(x,b)^{-s}
    r2 = float(x @ x)
    hb = 1.0 - 2.0 * brule.nodes @ x + r2
    logg = np.multiply.outer(s - params.nu, np.full(len(hb), math.log1p(-r2))) - np.multiply.outer(s, np.log(hb))
    inner = np.sum(ft * np.exp(logg) * brule.weights, axis=1)
    total = complex(np.sum(rule.weights * mu.density(lam) * inner))
    if atom and mu.atom is not None:
        fa = t(mu.atom, brule.nodes)[0]
        total += mu.atom_mass * complex(np.sum(brule.weights * fa * hb ** (-params.nu)))
    return total


# ---------------------------------------------------------------- Plancherel

@dataclass
class PlancherelReport:
    lhs: float
    rhs: float
    continuous: float
    atom: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs) / max(abs(self.lhs), 1e-300)


def _atom_norm_sq(t: FullTransform, mu: PlancherelMeasure) -> float:
    """mu_atom * ||f~(atom, .)||^2_C / kappa_0 in the complementary space."""
    n = t.params.n
    space = CAlphaSpace(n, t.params.nu / n)
    g = _boundary_polynomial(t, mu.atom)
    return mu.atom_mass * c_alpha_inner(g, g, space).real / space.kappa(0) if g.components else 0.0


def _boundary_polynomial(t: FullTransform, lam) -> BoundaryFunction:
    """b -> f~(lam, b) as an explicit polynomial in b (real s only)."""
    n = t.params.n
    s = complex(_s_of(lam, t.params))
    A = _A_table(np.array([np.conj(s)]), t.params.nu, t.degree)
    p = MultiPoly(n)
    for alpha, Fa in t.dual.items():
        d = sum(alpha)
        for c, w, beta in _taylor_structure(alpha):
            coef = Fa * w * complex(A[d - 2 * c, c][0])
            p = p + MultiPoly.monomial(beta, complex(coef))
    return BoundaryFunction.from_polynomial(p)


def plancherel_check(f: MultiPoly, params: ModelParams, rule: QuadratureRule | None = None,
                     atom: bool = True) -> PlancherelReport:
    """Compare ||f||_nu^2 with int int |f~(lam,b)|^2 db dmu(lam)."""
    t = fh_general(f, params)
    mu = plancherel_measure(params)
    if rule is None:
        rule = mu.rule(degree=2 * t.degree + 2)
    brule = sphere_rule(params.n, max(2 * t.degree, 4))
    vals = t(rule.nodes, brule.nodes)
    per_lam = np.abs(vals) ** 2 @ brule.weights
    cont = float(np.sum(rule.weights * mu.density(rule.nodes) * per_lam))
    at = _atom_norm_sq(t, mu) if (atom and mu.atom is not None) else 0.0
    lhs = hnu_inner(f, f, params).real
    return PlancherelReport(float(lhs), cont + at, cont, at)


# ---------------------------------------------------------------- equivariance

def taylor_blocks(G, n: int, dmax: int, radius: float = 0.5, samples: int | None = None,
                  fft_points: int = 64, rng: np.random.Generator | None = None) -> dict:
    """Taylor coefficients {alpha: G_alpha}, |alpha| <= dmax, of a holomorphic G.

    Degree-d parts come from an FFT of G(r e^{i theta} w) over theta; each
    part is then fitted by least squares at random directions w.
    """
    rng = rng or np.random.default_rng(12345)
    mons = [a for d in range(dmax + 1) for a in _exponents(n, d)]
    if samples is None:
        samples = 2 * max(len(_exponents(n, d)) for d in range(dmax + 1)) + 8
    w = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    w /= np.linalg.norm(w, axis=1)[:, None]
    theta = 2 * np.pi * np.arange(fft_points) / fft_points
    pts = radius * np.exp(1j * theta)[:, None, None] * w[None, :, :]
    vals = G(pts.reshape(-1, n)).reshape(fft_points, samples)
    parts = np.fft.fft(vals, axis=0) / fft_points
    out = {}
    for d in range(dmax + 1):
        exps = _exponents(n, d)
        V = np.array([[np.prod(wi ** np.array(a)) for a in exps] for wi in w])
        coef, *_ = np.linalg.lstsq(V, parts[d] / radius ** d, rcond=None)
        out.update(dict(zip(exps, coef)))
    return {a: out[a] for a in mons}


def equivariance_residual(f: MultiPoly, params: ModelParams, g: HElement, lam: float, b) -> float:
    """|(pi_nu(g) f)~(lam, b) - tau(g) f~(lam, b)| relative to |f~|.

    The left side is computed as (f, pi_nu(g^{-1}) g_{lam,b})_nu, using the
    unitarity of pi_nu; the second argument is expanded in Taylor blocks up to
    the degree of f. Since the pairing conjugates g_{lam,b}, the boundary
    action on the right carries the conjugate exponent (rho - i lam)/n, i.e.
    it is tau_{-lam} in the (i lam + rho)/n normalisation.
    """
    t = fh_general(f, params)
    b = np.asarray(b, dtype=float)
    e = lambda z: rinv_e_function(lam, b, z, params, certify=False)  # noqa: E731
    ginv = g.inverse()
    G = lambda z: pi_nu_apply(ginv, e, z, params)  # noqa: E731
    coeffs = taylor_blocks(G, params.n, t.degree)
    lhs = sum(Fa * np.conj(coeffs[a]) for a, Fa in t.dual.items())
    rhs = tau_lambda_apply(g, -lam, lambda bb: t(np.array([lam]), bb)[0], b[None, :], params)[0]
    scale = max(abs(rhs), abs(t(np.array([lam]), b[None, :])[0, 0]), 1e-300)
    return float(abs(lhs - rhs) / scale)

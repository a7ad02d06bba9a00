"""Spherical functions on the real form, their Taylor coefficients and the
measure that orthonormalises them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConvergenceError, ParameterError
from .geometry import ModelParams, bilinear, certify_principal_branch, h_kernel
from .quadrature import QuadratureRule, half_line_rule, zonal_rule
from .specfun import HypParams, dual_hahn, gauss_2f1, ln_gamma, pochhammer

__all__ = [
    "SpectralPoint",
    "BoundaryPoint",
    "PlancherelMeasure",
    "phi_hyp",
    "phi_quad",
    "phi_series",
    "rinv_phi_coeffs",
    "rinv_phi_coeffs_cauchy",
    "p_coeff",
    "plancherel_measure",
    "rinv_e_function",
]


@dataclass(frozen=True)
class SpectralPoint:
    """A point of the spectrum: real lambda > 0, or the atom i*value."""

    value: float
    atom: bool = False

    @classmethod
    def atom_of(cls, params: ModelParams) -> "SpectralPoint":
        if not params.has_atom:
            raise ParameterError(f"no discrete point for n={params.n}, nu={params.nu}")
        return cls(params.nu - params.rho, atom=True)

    @property
    def lam(self) -> complex:
        return 1j * self.value if self.atom else complex(self.value)

    @property
    def lam_sq(self) -> float:
        return -self.value ** 2 if self.atom else self.value ** 2


@dataclass(frozen=True)
class BoundaryPoint:
    """A point b of the unit sphere S^{n-1}, the Shilov boundary of the real form."""

    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=float)
        if abs(np.linalg.norm(b) - 1.0) > 1e-14:
            raise ParameterError("boundary points must be unit vectors")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)


def _lam(lam) -> complex:
    return lam.lam if isinstance(lam, SpectralPoint) else complex(lam)


def _lam_sq(lam) -> float:
    if isinstance(lam, SpectralPoint):
        return lam.lam_sq
    l2 = complex(lam) ** 2
    if abs(l2.imag) > 1e-14 * max(1.0, abs(l2)):
        raise ParameterError("lambda must be real or purely imaginary")
    return l2.real


def _s(lam, params: ModelParams) -> complex:
    return 1j * _lam(lam) + params.rho


# ---------------------------------------------------------------- spherical functions

def phi_hyp(x, lam, params: ModelParams, max_terms: int = 200000):
    """Spherical function from the Gauss hypergeometric closed form.

    With X the Klein-model image 2x/(1+|x|^2) of the real point x,
    phi = (1 - |X|^2)^{a} 2F1(a, c-b; c; |X|^2), a, b = (rho +- i lam)/2,
    c = n/2. Accepts a single point or a batch (coordinate axis last).
    """
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    if np.any(r2 >= 1.0):
        raise ParameterError("phi_hyp needs |x| < 1")
    L = _lam(lam)
    a = 0.5 * (params.rho + 1j * L)
    b = 0.5 * (params.rho - 1j * L)
    c = 0.5 * params.n
    X2 = 4.0 * r2 / (1.0 + r2) ** 2
    F = gauss_2f1(HypParams.f21(a, c - b, c), X2, max_terms=max_terms)
    return np.exp(a * np.log1p(-X2)) * F


def phi_quad(x, lam, params: ModelParams, order: int = 120):
    """Spherical function as the boundary integral of the Poisson-type kernel.

    Integrates ((1 - |x|^2)/(1 - 2 x.zeta + |x|^2))^{i lam + rho} over the
    sphere. The integrand depends on zeta only through x.zeta, so a
    Gauss-Gegenbauer rule in that variable is used.
    """
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(x * x, axis=-1))
    if np.any(r >= 1.0):
        raise ParameterError("phi_quad needs |x| < 1")
    rule = zonal_rule(params.n, order)
    s = _s(lam, params)
    r_ = r[..., None]
    base = (1.0 - r_ ** 2) / (1.0 - 2.0 * r_ * rule.nodes + r_ ** 2)
    return np.sum(rule.weights * np.exp(s * np.log(base)), axis=-1)


def rinv_phi_coeffs(lam, params: ModelParams, K: int) -> np.ndarray:
    """Coefficients c_0..c_K of sum_k c_k (zz^t)^k, the holomorphic extension
    of h(x,x)^{-nu/2} phi_lam(x).

    c_k = S_k(lam^2; 1/2, rho, nu - rho) / (k! (n/2)_k) with S_k the continuous
    dual Hahn polynomial.
    """
    if params.is_minimal:
        raise ParameterError("expansion coefficients need nu above the Wallach bound")
    l2 = _lam_sq(lam)
    a, b, c = 0.5, params.rho, params.nu - params.rho
    out = np.empty(K + 1)
    denom = 1.0
    for k in range(K + 1):
        if k:
            denom *= k * (0.5 * params.n + k - 1)
        out[k] = dual_hahn(k, l2, a, b, c) / denom
    return out


def rinv_phi_coeffs_cauchy(lam, params: ModelParams, K: int) -> np.ndarray:
    """Same coefficients from the Cauchy product of
    (1-q)^{s-nu} and 2F1(s, 1/2 + i lam; n/2; q), s = i lam + rho."""
    s = _s(lam, params)
    L = _lam(lam)
    left = np.empty(K + 1, dtype=complex)
    right = np.empty(K + 1, dtype=complex)
    left[0] = right[0] = 1.0
    for j in range(1, K + 1):
        left[j] = left[j - 1] * (params.nu - s + j - 1) / j
        right[j] = right[j - 1] * (s + j - 1) * (0.5 + 1j * L + j - 1) / ((0.5 * params.n + j - 1) * j)
    return np.array([np.sum(left[: k + 1][::-1] * right[: k + 1]) for k in range(K + 1)])


def phi_series(x, lam, params: ModelParams, tol: float = 1e-16, kmax: int = 400):
    """Spherical function through its power series in zz^t.

    Sums h(x,x)^{nu/2} sum_k c_k |x|^{2k}, truncating adaptively once three
    consecutive terms fall below ``tol`` relative to the running maximum.

    Raises
    ------
    ConvergenceError
        If the tail has not settled by ``kmax`` terms.
    """
    x = np.asarray(x, dtype=float)
    r2 = np.atleast_1d(np.sum(x * x, axis=-1))
    if np.any(r2 >= 1.0):
        raise ParameterError("phi_series needs |x| < 1")
    coeffs = rinv_phi_coeffs(lam, params, kmax)
    out = np.empty(r2.shape)
    for idx, q in np.ndenumerate(r2):
        total, big, small, pw = 0.0, 0.0, 0, 1.0
        for k in range(kmax + 1):
            term = coeffs[k] * pw
            total += term
            big = max(big, abs(term))
            small = small + 1 if abs(term) <= tol * big else 0
            if small >= 3 or (q == 0.0 and k == 0):
                break
            pw *= q
        else:
            raise ConvergenceError(
                "series for the spherical function did not settle",
                r2=float(q), kmax=kmax, last_term=float(abs(term)),
            )
        out[idx] = total * (1.0 - q) ** params.nu
    return out.reshape(np.shape(np.sum(x * x, axis=-1)))


def p_coeff(k: int, lam, params: ModelParams):
    """Normalised coefficient p_k(lam) = c_k(lam) ||(zz^t)^k||_nu.

    Equal to S_k(lam^2; 1/2, rho, nu - rho) / sqrt(k! (n/2)_k (nu)_k
    (nu - (n-2)/2)_k), a polynomial of degree 2k in lam. ``lam`` may be a
    real array.
    """
    if params.is_minimal:
        raise ParameterError("expansion coefficients need nu above the Wallach bound")
    if isinstance(lam, SpectralPoint) or np.ndim(lam) == 0:
        l2 = _lam_sq(lam)
    else:
        l2 = np.asarray(lam, dtype=float) ** 2
    n, nu = params.n, params.nu
    norm = math.factorial(k) * pochhammer(0.5 * n, k) * pochhammer(nu, k) * pochhammer(
        nu - params.wallach_bound, k
    )
    return dual_hahn(k, l2, 0.5, params.rho, nu - params.rho) / math.sqrt(norm)


# ---------------------------------------------------------------- Plancherel measure

@dataclass(frozen=True)
class PlancherelMeasure:
    """Probability measure mu on the spectrum with int p_k p_l dmu = delta_kl.

    mu = (weight(lam) dlam + atom_coefficient * delta_atom) / normalization,
    weight = |Gamma(1/2+i lam) Gamma(rho+i lam) Gamma(nu-rho+i lam) /
    Gamma(2 i lam)|^2 / (2 pi) and normalization =
    Gamma(n/2) Gamma(nu - (n-2)/2) Gamma(nu).
    """

    params: ModelParams
    normalization: float
    atom: SpectralPoint | None
    atom_coefficient: float

    @property
    def atom_mass(self) -> float:
        return self.atom_coefficient / self.normalization if self.atom else 0.0

    def weight(self, lam):
        lam = np.asarray(lam, dtype=float)
        p = self.params
        acc = (
            ln_gamma(0.5 + 1j * lam)
            + ln_gamma(p.rho + 1j * lam)
            + ln_gamma(p.nu - p.rho + 1j * lam)
            - ln_gamma(2j * lam)
        )
        return np.exp(2.0 * np.real(acc)) / (2.0 * np.pi)

    def density(self, lam):
        """Weight divided by the normalization constant."""
        return self.weight(lam) / self.normalization

    @cached_property
    def _singular_distance(self) -> float:
        d = 0.5
        shift = self.params.nu - self.params.rho
        for j in range(8):
            v = abs(shift + j)
            if v > 1e-12:
                d = min(d, v)
        return d

    def cutoff(self, degree: int = 12, drop: float = 40.0) -> float:
        """Lambda beyond which weight * (1 + lam^2)^{degree/2} is below
        e^{-drop} times its peak."""
        grid = np.linspace(0.05, 600.0, 12000)
        with np.errstate(divide="ignore"):
            logf = np.log(self.weight(grid)) + 0.5 * degree * np.log1p(grid * grid)
        peak = int(np.argmax(logf))
        below = np.nonzero(logf[peak:] < logf[peak] - drop)[0]
        if not len(below):
            raise ConvergenceError("Plancherel weight does not decay on [0, 600]",
                                   degree=degree, nu=self.params.nu)
        return float(grid[peak + below[0]])

    def rule(self, degree: int = 12, order: int = 20, panels: int | None = None,
             cutoff: float | None = None) -> QuadratureRule:
        """Half-line rule adapted to the weight for integrands of polynomial
        degree ``degree`` in lambda."""
        if cutoff is None:
            cutoff = self.cutoff(degree)
        return half_line_rule(cutoff, panels=panels, order=order, grade=self._singular_distance)

    def tail_bound(self, cutoff: float, degree: int = 12) -> float:
        """Rough size of the neglected mass beyond the cutoff (e^{-pi lam} decay)."""
        lam = np.array([cutoff])
        val = self.density(lam)[0] * (1.0 + cutoff * cutoff) ** (0.5 * degree)
        return float(val / (math.pi - (degree + 2.0 * self.params.nu) / max(cutoff, 1.0)))

    def integrate(self, f, rule: QuadratureRule | None = None, degree: int = 12):
        """int f dmu for a vectorised f(lam); the atom enters as f(SpectralPoint)."""
        if rule is None:
            rule = self.rule(degree)
        vals = f(rule.nodes)
        cont = np.tensordot(rule.weights * self.density(rule.nodes), vals, axes=(0, 0))
        if self.atom is None:
            return cont
        return cont + self.atom_mass * f(self.atom)


def plancherel_measure(params: ModelParams) -> PlancherelMeasure:
    """Measure orthonormalising {p_k}; carries an atom iff (n-2)/2 < nu < rho."""
    if params.is_minimal:
        raise ParameterError("the Plancherel measure needs nu above the Wallach bound")
    n, nu = params.n, params.nu
    norm = math.gamma(0.5 * n) * math.gamma(nu - params.wallach_bound) * math.gamma(nu)
    if params.has_atom:
        coef = (
            math.gamma(nu) * math.gamma(nu - params.wallach_bound)
            * math.gamma(n - 1 - nu) * math.gamma(0.5 * n - nu)
            / math.gamma(n - 1 - 2 * nu)
        )
        return PlancherelMeasure(params, norm, SpectralPoint.atom_of(params), coef)
    return PlancherelMeasure(params, norm, None, 0.0)


# ---------------------------------------------------------------- e-functions

def rinv_e_function(lam, b, z, params: ModelParams, certify: bool = True):
    """Holomorphic extension (1 - zz^t)^{s - nu} h(z, b)^{-s}, s = i lam + rho.

    ``b`` is a real unit vector (or batch); ``z`` a point or batch of the
    domain. On real points, multiplying by h(x,x)^{nu/2} gives the
    Harish-Chandra function (h(x,x)^{1/2} / h(x,b))^s.
    """
    if isinstance(b, BoundaryPoint):
        b = b.b
    z = np.asarray(z, dtype=complex)
    b = np.asarray(b, dtype=float)
    s = _s(lam, params)
    q = bilinear(z, z)
    hb = h_kernel(z, b)
    if certify:
        certify_principal_branch(z, np.broadcast_to(b, np.broadcast_shapes(z.shape, b.shape)), hb)
    return np.exp((s - params.nu) * np.log1p(-q) - s * np.log(hb))

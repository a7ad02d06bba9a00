"""Complex special functions: log-Gamma, Pochhammer symbols, 2F1, 3F2 and
continuous dual Hahn polynomials."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, ParameterError

__all__ = [
    "HypParams",
    "ln_gamma",
    "gamma",
    "pochhammer",
    "gauss_2f1",
    "hyp3f2_terminating",
    "dual_hahn",
]

# B_{2k} / (2k (2k-1)) for the Stirling series
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_SHIFT = 16.0


def _is_nonpositive_integer(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return (z.imag == 0.0) & (z.real <= 0.0) & (np.round(z.real) == z.real)


def _stirling(w):
    """log Gamma(w) for Re(w) >= _SHIFT."""
    inv = 1.0 / w
    inv2 = inv * inv
    acc = np.zeros_like(w)
    p = inv
    for coef in _STIRLING:
        acc = acc + coef * p
        p = p * inv2
    return (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + acc


def _ln_gamma_right(z):
    """log Gamma on Re(z) >= 1/2, continuous in z (upward recurrence)."""
    shift = np.maximum(0, np.ceil(_SHIFT - z.real)).astype(int)
    out = np.zeros_like(z)
    w = z.copy()
    for k in range(int(shift.max(initial=0))):
        active = shift > k
        out = out - np.where(active, np.log(np.where(active, w, 1.0)), 0.0)
        w = np.where(active, w + 1.0, w)
    return out + _stirling(w)


def _log_sin_pi(z):
    # sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i), stable for Im z >= 0
    upper = z.imag >= 0
    zz = np.where(upper, z, np.conj(z))
    with np.errstate(all="ignore"):
        val = -1j * np.pi * zz + np.log(np.expm1(2j * np.pi * zz) / 2j)
        # near zero pi*z can lose bits to underflow; use log(pi) + log(z) + log(sinc)
        w = np.pi * zz
        tiny = np.log(np.pi) + np.log(zz) + np.log1p(-w * w / 6.0)
    small = np.abs(zz) < 1e-8
    val = np.where(small, tiny, val)
    return np.where(upper, val, np.conj(val))


def ln_gamma(z):
    """Logarithm of the Gamma function for complex arguments.

    Stirling series after an upward shift to ``Re z >= 16``; the reflection
    formula covers ``Re z < 1/2``. On the right half-plane the result is the
    analytic branch continuous in ``z``; on the left only ``exp(ln_gamma(z))``
    is guaranteed (the imaginary part may differ by a multiple of 2*pi).

    Raises
    ------
    ParameterError
        At the poles ``z = 0, -1, -2, ...``.
    """
    scalar = np.ndim(z) == 0
    zc = np.atleast_1d(np.asarray(z, dtype=complex))
    if _is_nonpositive_integer(zc).any():
        raise ParameterError(f"ln_gamma pole at non-positive integer {z!r}")
    left = zc.real < 0.5
    right_arg = np.where(left, 1.0 - zc, zc)
    base = _ln_gamma_right(right_arg)
    refl = math.log(math.pi) - _log_sin_pi(np.where(left, zc, 0.25)) - base
    out = np.where(left, refl, base)
    return complex(out[0]) if scalar else out


def gamma(z):
    """Gamma function via :func:`ln_gamma`."""
    return np.exp(ln_gamma(z))


def pochhammer(a, k: int):
    """Rising factorial (a)_k = a (a+1) ... (a+k-1); (a)_0 = 1."""
    if k < 0:
        raise ParameterError("pochhammer requires k >= 0")
    out = 1
    for j in range(k):
        out = out * (a + j)
    return out


@dataclass(frozen=True)
class HypParams:
    """Parameters of a generalised hypergeometric series.

    ``upper`` are the numerator parameters and ``lower`` the denominator
    parameters; ``HypParams.f21(a, b, c)`` builds the 2F1 case.
    """

    upper: tuple
    lower: tuple

    @classmethod
    def f21(cls, a, b, c) -> "HypParams":
        return cls((complex(a), complex(b)), (complex(c),))

    @property
    def a(self):
        return self.upper[0]

    @property
    def b(self):
        return self.upper[1]

    @property
    def c(self):
        return self.lower[0]

    def terminates_at(self):
        """Smallest m with a numerator parameter equal to -m, else None."""
        ms = [int(round(-p.real)) for p in self.upper if _is_nonpositive_integer(p)]
        return min(ms) if ms else None


def _check_lower(params: HypParams):
    stop = params.terminates_at()
    for q in params.lower:
        if _is_nonpositive_integer(q):
            if stop is None or -q.real < stop:
                raise ParameterError(f"denominator parameter {q} is a pole of the series")


def _series_2f1(a, b, c, x, max_terms):
    vals, nterms, conv = kernels.hyp2f1_series_batch(a, b, c, x, 1e-17, max_terms)
    if not np.all(conv):
        bad = np.asarray(x)[~np.asarray(conv)]
        raise ConvergenceError(
            "2F1 power series did not converge",
            a=a, b=b, c=c, x=bad.tolist(), max_terms=max_terms,
        )
    return vals


def gauss_2f1(params: HypParams, x, max_terms: int = 200000):
    """Gauss hypergeometric function 2F1(a, b; c; x) for real x < 1.

    ``x`` in [0, 1) is summed directly and terminating series are summed as
    polynomials for any real ``x``; negative ``x`` goes through the Pfaff
    map 2F1(a,b;c;x) = (1-x)^{-a} 2F1(a, c-b; c; x/(x-1)). Accepts scalars or
    arrays.

    Raises
    ------
    ParameterError
        If ``x >= 1`` for a non-terminating series, or ``c`` is a pole.
    ConvergenceError
        If the series has not settled after ``max_terms`` terms.
    """
    _check_lower(params)
    a, b, c = params.a, params.b, params.c
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    stop = params.terminates_at()
    if stop is not None:
        # polynomial: sum the finite series directly
        term = np.ones(xs.shape, dtype=complex)
        out = term.copy()
        for j in range(stop):
            term = term * (a + j) * (b + j) / ((c + j) * (j + 1)) * xs
            out = out + term
        return complex(out[0]) if scalar else out
    if np.any(xs >= 1.0):
        raise ParameterError("gauss_2f1 requires x < 1")
    out = np.empty(xs.shape, dtype=complex)
    pos = xs >= 0
    if pos.any():
        out[pos] = _series_2f1(a, b, c, xs[pos], max_terms)
    if (~pos).any():
        xn = xs[~pos]
        u = xn / (xn - 1.0)
        out[~pos] = np.exp(-a * np.log1p(-xn)) * _series_2f1(a, c - b, c, u, max_terms)
    return complex(out[0]) if scalar else out


def hyp3f2_terminating(k: int, a2, a3, b1, b2):
    """Terminating 3F2(-k, a2, a3; b1, b2; 1) as an exact finite sum."""
    if k < 0:
        raise ParameterError("k must be non-negative")
    for q in (b1, b2):
        if _is_nonpositive_integer(q) and -complex(q).real <= k - 1:
            raise ParameterError(f"denominator parameter {q} vanishes inside the sum")
    term = 1
    total = 1
    for l in range(k):
        term = term * (l - k) * (a2 + l) * (a3 + l) / ((b1 + l) * (b2 + l) * (l + 1))
        total = total + term
    return total


def dual_hahn(k: int, xsq, a: float, b: float, c: float):
    """Continuous dual Hahn polynomial S_k(x^2; a, b, c).

    S_k = (a+b)_k (a+c)_k 3F2(-k, a+ix, a-ix; a+b, a+c; 1), evaluated in real
    arithmetic; ``xsq`` may be negative (then a +- ix are real) and may be an
    array.
    """
    for q in (a + b, a + c):
        if _is_nonpositive_integer(q) and -q <= k - 1:
            raise ParameterError(f"dual Hahn parameter sum {q} is a pole")
    if np.ndim(xsq) == 0:
        return float(kernels.dual_hahn_batch(k, np.array([float(xsq)]), a, b, c)[0])
    return kernels.dual_hahn_batch(k, np.asarray(xsq, dtype=float), a, b, c)


def _log_abs_gamma(z):
    return np.real(ln_gamma(z))


def gamma_ratio_abs_sq(num, den, lam):
    """Squared modulus of a ratio of Gamma functions on the line i*lam.

    ``num`` are real shifts a_i giving Gamma(a_i + i lam); ``den`` are pairs
    (shift, scale) giving Gamma(shift + i scale lam). Returns exp of twice the
    log-modulus difference; vectorised over ``lam``.
    """
    lam = np.asarray(lam, dtype=float)
    acc = np.zeros(lam.shape)
    for a in num:
        acc = acc + 2.0 * _log_abs_gamma(a + 1j * lam)
    for shift, scale in den:
        acc = acc - 2.0 * _log_abs_gamma(shift + 1j * scale * lam)
    return np.exp(acc)


def log_gamma_real(x: float) -> float:
    """log |Gamma(x)| for real x (thin wrapper used by closed-form constants)."""
    return float(np.real(ln_gamma(complex(x))))


def gamma_real(x: float) -> float:
    """Gamma(x) for real non-pole x, with sign."""
    val = gamma(complex(x))
    return float(np.real(val))


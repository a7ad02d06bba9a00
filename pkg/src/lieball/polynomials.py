"""Exact polynomial algebra on C^n and the Fock-Fischer / H_nu inner products.

Polynomials are written in the coordinates z of the Lie ball. Coefficients are
kept as exact Gaussian rationals, so orthogonality relations come out as exact
zeros.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from numbers import Complex, Rational

import numpy as np

from .errors import ParameterError
from .geometry import ModelParams, bilinear
from .specfun import pochhammer

__all__ = [
    "GaussianRational",
    "MultiPoly",
    "RadialPolynomial",
    "HarmonicDecomposition",
    "fock_inner",
    "harmonic_project",
    "harmonic_decompose",
    "hnu_inner",
    "hnu_norm_sq_radial",
    "kernel_expansion_coeff",
    "zonal_harmonic",
    "block_kernel",
    "truncated_kernel",
    "harmonic_dim",
    "random_poly",
    "monomials",
]


class GaussianRational:
    """Exact complex number re + i*im with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            self.re, self.im = re.re, re.im
            return
        if isinstance(re, complex):
            re, im = re.real, re.imag + im
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        return x if isinstance(x, GaussianRational) else cls(x)

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.coerce(o))

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.coerce(o)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        return GaussianRational(num.re / d, num.im / d)

    def __rtruediv__(self, o):
        return GaussianRational.coerce(o) / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, o):
        if isinstance(o, (GaussianRational, Rational, complex, float)):
            o = GaussianRational.coerce(o)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def _exact(c):
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, (Rational, float)):
        return GaussianRational(c)
    if isinstance(c, Complex):
        return GaussianRational(complex(c))
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class MultiPoly:
    """Sparse polynomial in n variables: exponent tuple -> exact coefficient."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        self.terms = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or min(alpha, default=0) < 0:
                raise ParameterError(f"bad exponent {alpha} for n={n}")
            c = _exact(c)
            if c:
                self.terms[alpha] = self.terms.get(alpha, GaussianRational()) + c
                if not self.terms[alpha]:
                    del self.terms[alpha]

    # construction helpers
    @classmethod
    def constant(cls, n: int, c=1) -> "MultiPoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> "MultiPoly":
        alpha = [0] * n
        alpha[i] = 1
        return cls(n, {tuple(alpha): 1})

    @classmethod
    def monomial(cls, alpha, c=1) -> "MultiPoly":
        return cls(len(alpha), {tuple(alpha): c})

    @classmethod
    def zzt(cls, n: int) -> "MultiPoly":
        """The quadratic form zz^t = sum z_i^2."""
        terms = {}
        for i in range(n):
            a = [0] * n
            a[i] = 2
            terms[tuple(a)] = 1
        return cls(n, terms)

    @classmethod
    def _wrap(cls, n, terms):
        p = cls.__new__(cls)
        p.n = n
        p.terms = {a: c for a, c in terms.items() if c}
        return p

    # algebra
    def _like(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.n != self.n:
                raise ParameterError("polynomials live in different dimensions")
            return other
        return MultiPoly.constant(self.n, other)

    def __add__(self, other):
        other = self._like(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out[a] + c if a in out else c
        return MultiPoly._wrap(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._wrap(self.n, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._like(other))

    def __rsub__(self, other):
        return self._like(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _exact(other)
            return MultiPoly._wrap(self.n, {a: v * c for a, v in self.terms.items()})
        other = self._like(other)
        out = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                k = tuple(x + y for x, y in zip(a, b))
                out[k] = out[k] + c * d if k in out else c * d
        return MultiPoly._wrap(self.n, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        c = _exact(scalar)
        return MultiPoly._wrap(self.n, {a: v / c for a, v in self.terms.items()})

    def __pow__(self, k: int):
        out = MultiPoly.constant(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.n, other)
        return self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = [f"{c}*z^{a}" for a, c in sorted(self.terms.items())]
        return "MultiPoly(" + " + ".join(parts) + ")"

    # structure
    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(a) for a in self.terms}) <= 1

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._wrap(self.n, {a: c for a, c in self.terms.items() if sum(a) == d})

    def homogeneous_parts(self) -> dict:
        return {d: self.homogeneous_part(d) for d in sorted({sum(a) for a in self.terms})}

    def conj(self) -> "MultiPoly":
        """Conjugate every coefficient."""
        return MultiPoly._wrap(self.n, {a: c.conjugate() for a, c in self.terms.items()})

    def diff(self, i: int, order: int = 1) -> "MultiPoly":
        out = {}
        for a, c in self.terms.items():
            if a[i] < order:
                continue
            f = math.perm(a[i], order)
            b = list(a)
            b[i] -= order
            out[tuple(b)] = c * f
        return MultiPoly._wrap(self.n, out)

    def laplacian(self) -> "MultiPoly":
        out = MultiPoly(self.n)
        for i in range(self.n):
            out = out + self.diff(i, 2)
        return out

    def __call__(self, z):
        """Evaluate at a point or a batch of points (coordinate axis last)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape[:-1], dtype=complex)
        for a, c in self.terms.items():
            term = complex(c)
            for i, e in enumerate(a):
                if e:
                    term = term * z[..., i] ** e
            out = out + term
        return out

    def linear_substitute(self, M) -> "MultiPoly":
        """The polynomial z -> p(M z) for an m x n matrix M (p in m variables)."""
        M = np.asarray(M)
        rows = []
        for i in range(M.shape[0]):
            rows.append(MultiPoly(M.shape[1], {
                tuple(1 if k == j else 0 for k in range(M.shape[1])): complex(M[i, j]) if np.iscomplexobj(M) else float(M[i, j])
                for j in range(M.shape[1]) if M[i, j] != 0
            }))
        out = MultiPoly(M.shape[1])
        for a, c in self.terms.items():
            term = MultiPoly.constant(M.shape[1], c)
            for i, e in enumerate(a):
                for _ in range(e):
                    term = term * rows[i]
            out = out + term
        return out

    def divide_by_zzt(self) -> "MultiPoly":
        """Exact quotient by zz^t; raises if the division leaves a remainder.

        Long division in z_1 using z_1^2 = zz^t - (z_2^2 + ... + z_n^2).
        """
        rem = dict(self.terms)
        quo = {}
        while True:
            lead = [a for a in rem if a[0] >= 2]
            if not lead:
                break
            a = max(lead, key=lambda t: t[0])
            c = rem.pop(a)
            b = (a[0] - 2,) + a[1:]
            quo[b] = quo[b] + c if b in quo else c
            for i in range(1, self.n):
                e = list(b)
                e[i] += 2
                e = tuple(e)
                rem[e] = rem[e] - c if e in rem else -c
                if not rem[e]:
                    del rem[e]
        if any(rem.values()):
            raise ParameterError("polynomial is not divisible by zz^t")
        return MultiPoly._wrap(self.n, quo)


def _zzt_power(n: int, k: int, cache={}) -> MultiPoly:
    key = (n, k)
    if key not in cache:
        cache[key] = MultiPoly.zzt(n) ** k
    return cache[key]


@dataclass(frozen=True)
class RadialPolynomial:
    """sum_k a_k (zz^t)^k, with trailing zero coefficients stripped."""

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return 2 * (len(self.coeffs) - 1)

    def __call__(self, z):
        q = bilinear(np.asarray(z, dtype=complex), np.asarray(z, dtype=complex))
        out = np.zeros(np.shape(q), dtype=complex)
        for a in reversed(self.coeffs):
            out = out * q + complex(a)
        return out

    def to_multipoly(self, n: int) -> MultiPoly:
        out = MultiPoly(n)
        for k, a in enumerate(self.coeffs):
            if a != 0:
                out = out + _zzt_power(n, k) * a
        return out


@dataclass(frozen=True)
class HarmonicDecomposition:
    """Blocks (m, k, harmonic h of degree m-2k, component (zz^t)^k h)."""

    n: int
    blocks: tuple

    def total(self) -> MultiPoly:
        out = MultiPoly(self.n)
        for _, _, _, comp in self.blocks:
            out = out + comp
        return out

    def block(self, m: int, k: int):
        for mm, kk, h, comp in self.blocks:
            if (mm, kk) == (m, k):
                return comp
        return MultiPoly(self.n)


def fock_inner(p: MultiPoly, q: MultiPoly, coords: str = "z") -> GaussianRational:
    """Fock-Fischer pairing p(d)(q*)(0), linear in p and antilinear in q.

    With ``coords="z"`` both polynomials are read in the Lie-ball coordinates
    and the substitution w = sqrt(2) z is applied, giving
    <z^a, z^b> = delta_ab a! 2^{-|a|}. ``coords="w"`` pairs them directly.
    """
    if coords not in ("z", "w"):
        raise ParameterError("coords must be 'z' or 'w'")
    if p.n != q.n:
        raise ParameterError("polynomials live in different dimensions")
    total = GaussianRational()
    for a, c in p.terms.items():
        d = q.terms.get(a)
        if d is None:
            continue
        w = 1
        for e in a:
            w *= math.factorial(e)
        scale = Fraction(w, 2 ** sum(a)) if coords == "z" else Fraction(w)
        total = total + c * d.conjugate() * scale
    return total


def harmonic_project(p: MultiPoly, m: int) -> MultiPoly:
    """Harmonic component of a homogeneous polynomial of degree m.

    h = sum_j c_j (zz^t)^j Lap^j p with
    c_j = (-1)^j / (4^j j! prod_{i=1..j} (m + n/2 - 1 - i)).
    """
    n = p.n
    half = Fraction(n, 2)
    out = MultiPoly(n)
    lap = p
    coef = Fraction(1)
    j = 0
    while lap:
        out = out + _zzt_power(n, j) * lap * coef
        j += 1
        lap = lap.laplacian()
        if lap:
            coef = -coef / (4 * j * (m + half - 1 - j))
    return out


def harmonic_decompose(p: MultiPoly, m: int | None = None) -> HarmonicDecomposition:
    """Split a homogeneous polynomial as sum_k (zz^t)^k h_{m-2k}, Lap h = 0."""
    if not p.is_homogeneous():
        raise ParameterError("harmonic_decompose needs a homogeneous polynomial")
    if m is None:
        m = max(p.degree, 0)
    if p and p.degree != m:
        raise ParameterError(f"polynomial has degree {p.degree}, not {m}")
    blocks = []
    rest = p
    k = 0
    while rest:
        h = harmonic_project(rest, m - 2 * k)
        if h:
            blocks.append((m, k, h, _zzt_power(p.n, k) * h))
        rest = (rest - h).divide_by_zzt() if rest != h else MultiPoly(p.n)
        k += 1
    return HarmonicDecomposition(p.n, tuple(blocks))


def _block_scale(m: int, k: int, params: ModelParams):
    c = params.nu - params.wallach_bound
    return pochhammer(params.nu, m - k) * pochhammer(c, k)


def _decompose_all(p: MultiPoly):
    out = {}
    for d, part in p.homogeneous_parts().items():
        for m, k, _, comp in harmonic_decompose(part, d).blocks:
            out[(m, k)] = comp
    return out


def hnu_inner(p: MultiPoly, q: MultiPoly, params: ModelParams) -> complex:
    """Inner product of H_nu on polynomials.

    Each block (zz^t)^k E_{m-2k} carries the Fock norm divided by
    (nu)_{m-k} (nu - (n-2)/2)_k; distinct blocks are orthogonal.

    Raises
    ------
    ParameterError
        At the minimal weight, if either argument has a block with k > 0.
    """
    bp, bq = _decompose_all(p), _decompose_all(q)
    if params.is_minimal:
        for blocks in (bp, bq):
            if any(k > 0 for (_, k) in blocks):
                raise ParameterError(
                    "polynomial has components outside the minimal representation"
                )
    total = 0j
    for key, comp in bp.items():
        if key in bq:
            val = complex(fock_inner(comp, bq[key]))
            total += val / _block_scale(key[0], key[1], params)
    return total


def hnu_norm_sq_radial(k: int, params: ModelParams) -> float:
    """||(zz^t)^k||_nu^2 = k! (n/2)_k / ((nu)_k (nu - (n-2)/2)_k)."""
    if params.is_minimal and k > 0:
        raise ParameterError("(zz^t)^k with k > 0 is not in the minimal space")
    n = params.n
    return (
        math.factorial(k) * pochhammer(0.5 * n, k)
        / (pochhammer(params.nu, k) * pochhammer(params.nu - params.wallach_bound, k))
    )


def kernel_expansion_coeff(m: int, k: int, params: ModelParams) -> float:
    """Weight (nu)_{m-k} (nu - (n-2)/2)_k of the block kernel K_{(m-k,k)}."""
    if m - 2 * k < 0 or k < 0:
        raise ParameterError("need m - 2k >= 0")
    return float(_block_scale(m, k, params))


def harmonic_dim(j: int, n: int) -> int:
    """Dimension of the degree-j spherical harmonics in n variables."""
    if j < 0:
        return 0
    a = math.comb(j + n - 1, n - 1)
    b = math.comb(j + n - 3, n - 1) if j >= 2 else 0
    return a - b


def zonal_harmonic(j: int, n: int, t, a=1.0, b=1.0):
    """Homogenised zonal harmonic of degree j.

    Returns sum_i (-1)^i (lam)_{j-i} / (i! (j-2i)!) 2^{j-2i} t^{j-2i} (ab)^i,
    scaled by dim_j / C_j^lam(1), lam = (n-2)/2. With t = z.wbar, a = zz^t,
    b = conj(ww^t) this is the reproducing kernel of degree-j harmonics for
    the normalised surface measure, extended sesqui-holomorphically.
    """
    lam = 0.5 * (n - 2)
    t = np.asarray(t, dtype=complex)
    ab = np.asarray(a, dtype=complex) * np.asarray(b, dtype=complex)
    out = np.zeros(np.broadcast(t, ab).shape, dtype=complex)
    for i in range(j // 2 + 1):
        c = (-1) ** i * pochhammer(lam, j - i) / (math.factorial(i) * math.factorial(j - 2 * i))
        out = out + c * (2.0 * t) ** (j - 2 * i) * ab ** i
    c1 = pochhammer(2 * lam, j) / math.factorial(j)
    return out * harmonic_dim(j, n) / c1


def block_kernel(j: int, k: int, z, w, n: int):
    """Fock reproducing kernel of (zz^t)^k E_j in z-coordinates."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    qz = bilinear(z, z)
    qw = np.conj(bilinear(w, w))
    t = bilinear(z, np.conj(w))
    zon = zonal_harmonic(j, n, t, qz, qw)
    norm = pochhammer(0.5 * n, j) * math.factorial(k) * pochhammer(j + 0.5 * n, k)
    return zon * (qz * qw) ** k / norm


def truncated_kernel(z, w, params: ModelParams, mmax: int):
    """sum_{m <= mmax} sum_k (nu)_{m-k}(nu-(n-2)/2)_k K_{(m-k,k)}(z, w)."""
    out = 0
    for m in range(mmax + 1):
        for k in range(m // 2 + 1):
            if params.is_minimal and k > 0:
                continue
            out = out + kernel_expansion_coeff(m, k, params) * block_kernel(m - 2 * k, k, z, w, params.n)
    return out


def random_poly(n: int, degree: int, rng: np.random.Generator, terms: int = 6,
                homogeneous: bool = False, denom: int = 7) -> MultiPoly:
    """Random polynomial with small Gaussian-rational coefficients."""
    pool = [
        a for d in range(degree + 1) if not homogeneous or d == degree
        for a in _exponents(n, d)
    ]
    out = {}
    for idx in rng.choice(len(pool), size=min(terms, len(pool)), replace=False):
        re, im = rng.integers(-5, 6, size=2)
        out[pool[idx]] = GaussianRational(Fraction(int(re), denom), Fraction(int(im), denom))
    return MultiPoly(n, out)


def _exponents(n: int, d: int):
    out = []
    for combo in combinations_with_replacement(range(n), d):
        a = [0] * n
        for i in combo:
            a[i] += 1
        out.append(tuple(a))
    return out


def monomials(n: int, d: int):
    """All exponent tuples of total degree d in n variables."""
    return _exponents(n, d)

"""The Lie ball in C^n, its Jordan triple structure and its automorphisms.

Vectors are numpy arrays with the coordinate index last, so most functions
broadcast over leading batch axes. ``x . y`` below always denotes the
complex-bilinear pairing sum_k x_k y_k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BranchError, DomainError, ParameterError

__all__ = [
    "ModelParams",
    "Point",
    "MatrixBallPoint",
    "SpectralDecomposition",
    "MoebiusMap",
    "HElement",
    "LorentzElement",
    "bilinear",
    "triple_D",
    "quadratic_Q",
    "bergman_B",
    "h_kernel",
    "bergman_kernel",
    "certify_principal_branch",
    "in_domain",
    "spectral_norm",
    "spectral_decomposition",
    "hua_transform",
    "hua_inverse",
    "cayley",
    "cayley_inverse",
    "embed_theta",
    "matrix_ball_apply",
]


@dataclass(frozen=True)
class ModelParams:
    """Dimension ``n`` and weight ``nu`` of the scalar holomorphic series.

    ``nu`` must lie in the continuous Wallach set ``nu > (n-2)/2`` or equal
    the minimal point ``(n-2)/2``.
    """

    n: int
    nu: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ParameterError(f"n must be an integer >= 3, got {self.n}")
        if not np.isfinite(self.nu) or self.nu < self.wallach_bound - 1e-14:
            raise ParameterError(
                f"nu={self.nu} is outside the Wallach set for n={self.n}"
            )

    @property
    def rho(self) -> float:
        return 0.5 * (self.n - 1)

    @property
    def wallach_bound(self) -> float:
        return 0.5 * (self.n - 2)

    @property
    def is_minimal(self) -> bool:
        return abs(self.nu - self.wallach_bound) <= 1e-14

    @property
    def has_atom(self) -> bool:
        """True when the restricted spectrum has a discrete point."""
        return self.wallach_bound < self.nu < self.rho and not self.is_minimal


def bilinear(x, y):
    """Complex-bilinear pairing sum_k x_k y_k over the last axis."""
    return np.sum(np.asarray(x) * np.asarray(y), axis=-1)


def in_domain(z) -> np.ndarray:
    """Membership test 1 - 2<z,z> + |zz^t|^2 > 0 and |z| < 1."""
    z = np.asarray(z, dtype=complex)
    s = np.sum(np.abs(z) ** 2, axis=-1)
    q = bilinear(z, z)
    return (1.0 - 2.0 * s + np.abs(q) ** 2 > 0) & (s < 1.0)


@dataclass(frozen=True, eq=False)
class Point:
    """A point of C^n with its bilinear square ``q`` and Hermitian square ``s``."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=complex)
        if c.ndim != 1:
            raise ParameterError("Point coordinates must be a vector")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @cached_property
    def q(self) -> complex:
        return complex(bilinear(self.coords, self.coords))

    @cached_property
    def s(self) -> float:
        return float(np.sum(np.abs(self.coords) ** 2))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def in_domain(self) -> bool:
        return bool(1.0 - 2.0 * self.s + abs(self.q) ** 2 > 0 and self.s < 1.0)


@dataclass(frozen=True, eq=False)
class MatrixBallPoint:
    """A real n x 2 matrix Z with Z^t Z < I_2."""

    Z: np.ndarray

    def __post_init__(self):
        Z = np.array(self.Z, dtype=float)
        if Z.ndim != 2 or Z.shape[1] != 2:
            raise ParameterError("matrix ball points are n x 2 real matrices")
        Z.setflags(write=False)
        object.__setattr__(self, "Z", Z)

    @property
    def in_ball(self) -> bool:
        return bool(np.max(np.linalg.eigvalsh(self.Z.T @ self.Z)) < 1.0)

    def as_vector(self) -> np.ndarray:
        """Identify (X Y) with X + iY in C^n."""
        return self.Z[:, 0] + 1j * self.Z[:, 1]


def _coords(z) -> np.ndarray:
    return z.coords if isinstance(z, Point) else np.asarray(z, dtype=complex)


# ---------------------------------------------------------------- triple system

def triple_D(x, y, z):
    """D(x, ybar) z = 2(x.ybar) z + 2(z.ybar) x - 2(x.z) ybar."""
    x, y, z = (np.asarray(v, dtype=complex) for v in (x, y, z))
    yb = np.conj(y)
    return (
        2.0 * bilinear(x, yb)[..., None] * z
        + 2.0 * bilinear(z, yb)[..., None] * x
        - 2.0 * bilinear(x, z)[..., None] * yb
    )


def quadratic_Q(x, y):
    """Q(x) y = q(x, y) x - q(x) y with q(x, y) = 2 x.y."""
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    return 2.0 * bilinear(x, y)[..., None] * x - bilinear(x, x)[..., None] * y


def _Q_matrix(x):
    n = x.shape[-1]
    return 2.0 * x[..., :, None] * x[..., None, :] - bilinear(x, x)[..., None, None] * np.eye(n)


def bergman_B(x, y) -> np.ndarray:
    """Matrix of B(x, y) = I - D(x, ybar) + Q(x) Qbar(ybar).

    Broadcasts over leading axes of ``x`` and ``y``.
    """
    x = np.asarray(_coords(x), dtype=complex)
    yb = np.conj(np.asarray(_coords(y), dtype=complex))
    n = x.shape[-1]
    eye = np.eye(n)
    D = (
        2.0 * bilinear(x, yb)[..., None, None] * eye
        + 2.0 * x[..., :, None] * yb[..., None, :]
        - 2.0 * yb[..., :, None] * x[..., None, :]
    )
    return eye - D + _Q_matrix(x) @ _Q_matrix(yb)


def h_kernel(z, w):
    """h(z, w) = 1 - 2 z.wbar + (zz^t) conj(ww^t)."""
    z = np.asarray(_coords(z), dtype=complex)
    w = np.asarray(_coords(w), dtype=complex)
    return 1.0 - 2.0 * bilinear(z, np.conj(w)) + bilinear(z, z) * np.conj(bilinear(w, w))


def certify_principal_branch(z, w, h):
    """Raise BranchError unless log h(z, tw), t in [0, 1], stays principal.

    t -> h(z, tw) = 1 - 2at + bt^2 is a parabola from 1 to h; the principal
    power is the continuous one iff it never meets the closed negative axis.
    """
    a = bilinear(z, np.conj(w))
    b = bilinear(z, z) * np.conj(bilinear(w, w))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(b.imag != 0, 2.0 * a.imag / b.imag, np.nan)
    inside = (t > 0) & (t <= 1)
    tt = np.where(inside, t, 0.0)
    ht = 1.0 - 2.0 * a * tt + b * tt * tt
    crosses = inside & (ht.real <= 0)
    # degenerate case Im b = 0: Im h(t) = -2 Im(a) t vanishes only at 0 unless Im a = 0
    flat = (b.imag == 0) & (a.imag == 0)
    if flat.any():
        # h(t) real on the whole path; the minimum over [0, 1] must stay positive
        ar, br = a.real, b.real
        with np.errstate(divide="ignore", invalid="ignore"):
            tm = np.clip(np.where(br != 0, ar / br, 1.0), 0.0, 1.0)
        hmin = np.minimum(np.minimum(1.0 - 2 * ar * tm + br * tm * tm, h.real), 1.0)
        crosses = crosses | (flat & (hmin <= 0))
    if np.any(crosses) or np.any(h == 0):
        raise BranchError("h(z, tw) meets the branch cut of the principal power")


def bergman_kernel(z, w, nu: float, certify: bool = True):
    """Weighted kernel h(z, w)^{-nu} on the principal branch.

    Raises
    ------
    BranchError
        If the path t -> h(z, tw), t in [0, 1], meets the negative real axis or
        zero, so that the principal power is not the continuous one.
    """
    z = np.asarray(_coords(z), dtype=complex)
    w = np.asarray(_coords(w), dtype=complex)
    h = h_kernel(z, w)
    if certify:
        certify_principal_branch(z, w, h)
    return np.exp(-nu * np.log(h))


# ---------------------------------------------------------------- spectral theory

def spectral_norm(z):
    """Largest spectral value lambda_1 = sqrt(s + sqrt(s^2 - |q|^2))."""
    z = np.asarray(_coords(z), dtype=complex)
    s = np.sum(np.abs(z) ** 2, axis=-1)
    q = np.abs(bilinear(z, z))
    return np.sqrt(s + np.sqrt(np.maximum(s * s - q * q, 0.0)))


@dataclass(frozen=True)
class SpectralDecomposition:
    """z = lam1 c1 + lam2 c2 with orthogonal minimal tripotents c1, c2."""

    lam1: float
    lam2: float
    c1: np.ndarray
    c2: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.lam1 * self.c1 + self.lam2 * self.c2


def spectral_decomposition(z) -> SpectralDecomposition:
    """Spectral decomposition of a nonzero z in C^n.

    Rotate by a phase so that e^{-i theta} z = x + iy with x, y real,
    orthogonal and |x| >= |y|; then lam = |x| +- |y| and
    c = e^{i theta}(xhat +- i yhat)/2.
    """
    z = np.asarray(_coords(z), dtype=complex)
    if z.ndim != 1:
        raise ParameterError("spectral_decomposition takes a single vector")
    if not np.any(z):
        raise DomainError("spectral decomposition of 0 is undefined")
    q = bilinear(z, z)
    theta = 0.5 * np.angle(q) if abs(q) > 0 else 0.0
    w = np.exp(-1j * theta) * z
    x, y = w.real, w.imag
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if ny > nx:  # only possible up to rounding; keep |x| >= |y|
        x, y, nx, ny = y, -x, ny, nx
        theta += 0.5 * np.pi
    xh = x / nx
    if ny > 1e-14 * nx:
        yh = y - np.dot(y, xh) * xh
        yh /= np.linalg.norm(yh)
    else:
        # any unit vector orthogonal to x completes the frame
        k = int(np.argmin(np.abs(xh)))
        e = np.zeros_like(xh)
        e[k] = 1.0
        yh = e - xh[k] * xh
        yh /= np.linalg.norm(yh)
    ph = np.exp(1j * theta)
    c1 = 0.5 * ph * (xh + 1j * yh)
    c2 = 0.5 * ph * (xh - 1j * yh)
    return SpectralDecomposition(float(nx + ny), float(nx - ny), c1, c2)


# ---------------------------------------------------------------- automorphisms

def _psd_sqrt(M):
    vals, vecs = np.linalg.eigh(0.5 * (M + M.conj().T))
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


class MoebiusMap:
    """The automorphism z -> u + B(u,u)^{1/2} B(z,-u)^{-1} (z + Q(z) ubar).

    It sends 0 to ``u``; its inverse is the map for ``-u``. Methods accept a
    single point or a batch with the coordinate axis last.
    """

    def __init__(self, u):
        u = np.array(_coords(u), dtype=complex)
        if u.ndim != 1:
            raise ParameterError("Moebius parameter must be a vector")
        if not in_domain(u):
            raise DomainError("Moebius parameter must lie in the domain")
        u.setflags(write=False)
        self.u = u
        self.n = u.shape[0]
        self.Buu = bergman_B(u, u)
        self.Buu_sqrt = _psd_sqrt(self.Buu)
        self.h_uu = float(np.real(h_kernel(u, u)))

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(-self.u)

    def _B_minus_u(self, z):
        return bergman_B(z, np.broadcast_to(-self.u, z.shape))

    def apply(self, z):
        z = np.asarray(_coords(z), dtype=complex)
        Bz = self._B_minus_u(z)
        if np.any(np.abs(np.linalg.det(Bz)) < 1e-300):
            raise DomainError("B(z,-u) is singular; z is outside the domain")
        rhs = z + quadratic_Q(z, np.broadcast_to(np.conj(self.u), z.shape))
        sol = np.linalg.solve(Bz, rhs[..., None])[..., 0]
        return self.u + sol @ self.Buu_sqrt.T

    def differential(self, z):
        """Matrix B(u,u)^{1/2} B(z,-u)^{-1}."""
        z = np.asarray(_coords(z), dtype=complex)
        return self.Buu_sqrt @ np.linalg.inv(self._B_minus_u(z))

    def jacobian_det(self, z):
        return np.linalg.det(self.differential(z))

    def jacobian_root(self, z):
        """Continuous n-th root J^{1/n} = h(u,u)^{1/2} / h(z,-u), equal to 1 at u=0."""
        z = np.asarray(_coords(z), dtype=complex)
        return math.sqrt(self.h_uu) / h_kernel(z, -self.u)


class HElement:
    """Element z -> R m_u(z) of the real-form automorphism group.

    ``rotation`` is in SO(n) and ``u`` is a real vector with |u| < 1; these are
    exactly the automorphisms preserving the real points of the domain.
    """

    def __init__(self, rotation=None, u=None, n: int | None = None):
        if rotation is None:
            if n is None:
                n = len(u)
            rotation = np.eye(n)
        rotation = np.array(rotation, dtype=float)
        n = rotation.shape[0]
        if u is None:
            u = np.zeros(n)
        u = np.array(u, dtype=float)
        if np.linalg.norm(u) >= 1.0:
            raise DomainError("boost parameter must satisfy |u| < 1")
        if np.max(np.abs(rotation @ rotation.T - np.eye(n))) > 1e-10:
            raise ParameterError("rotation must be orthogonal")
        self.rotation = rotation
        self.u = u
        self.n = n
        self._m = MoebiusMap(u)

    @classmethod
    def boost(cls, t: float, n: int, axis: int = 0) -> "HElement":
        """Hyperbolic translation of rapidity ``t`` along ``e_axis``."""
        u = np.zeros(n)
        u[axis] = math.tanh(0.5 * t)
        return cls(u=u)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, max_rapidity: float = 1.5):
        A = rng.standard_normal((n, n))
        Qm, R = np.linalg.qr(A)
        Qm = Qm * np.sign(np.diag(R))
        if np.linalg.det(Qm) < 0:
            Qm[:, 0] = -Qm[:, 0]
        d = rng.standard_normal(n)
        d /= np.linalg.norm(d)
        r = math.tanh(0.5 * rng.uniform(0.0, max_rapidity))
        return cls(Qm, r * d)

    @classmethod
    def from_lorentz(cls, g: "LorentzElement") -> "HElement":
        """Inverse of :meth:`to_lorentz`, via the polar decomposition g = k p."""
        G = g.g
        w, V = np.linalg.eigh(G.T @ G)
        p = (V * np.sqrt(w)) @ V.T
        k = G @ np.linalg.inv(p)
        t = math.acosh(max(p[0, 0], 1.0))
        sh = p[1:, 0]
        d = sh / np.linalg.norm(sh) if t > 0 else np.zeros(len(sh))
        return cls(k[1:, 1:], math.tanh(0.5 * t) * d)

    def apply(self, z):
        return self._m.apply(z) @ self.rotation.T

    def inverse(self) -> "HElement":
        # m_u(R z) = R m_{R^t u}(z) gives (R m_u)^{-1} = R^t m_{-R u}
        return HElement(self.rotation.T, -self.rotation @ self.u)

    def jacobian_root(self, z):
        return self._m.jacobian_root(z)

    def boundary_jacobian_root(self, zeta):
        """J^{1/n} on real unit vectors: (1 - |u|^2) / (1 + 2 zeta.u + |u|^2)."""
        zeta = np.asarray(zeta, dtype=float)
        uu = float(self.u @ self.u)
        return (1.0 - uu) / (1.0 + 2.0 * zeta @ self.u + uu)

    def to_lorentz(self) -> "LorentzElement":
        """Matching element of SO_0(1, n) acting on the Klein model."""
        r = float(np.linalg.norm(self.u))
        if r == 0:
            return LorentzElement.rotation(self.rotation)
        t = 2.0 * math.atanh(r)
        d = self.u / r
        boost = LorentzElement.boost_direction(t, d)
        return LorentzElement.rotation(self.rotation) @ boost


class LorentzElement:
    """Matrix g = (a b; c D) in SO_0(1, n) preserving diag(1, -1, ..., -1)."""

    def __init__(self, g):
        g = np.array(g, dtype=float)
        m = g.shape[0]
        eta = np.diag([1.0] + [-1.0] * (m - 1))
        if np.max(np.abs(g.T @ eta @ g - eta)) > 1e-10:
            raise ParameterError("matrix does not preserve the Lorentz form")
        if g[0, 0] < 1.0 - 1e-12:
            raise ParameterError("matrix is not in the identity component")
        self.g = g
        self.n = m - 1

    @classmethod
    def boost_direction(cls, t: float, d) -> "LorentzElement":
        d = np.asarray(d, dtype=float)
        n = d.shape[0]
        g = np.eye(n + 1)
        g[0, 0] = math.cosh(t)
        g[0, 1:] = math.sinh(t) * d
        g[1:, 0] = math.sinh(t) * d
        g[1:, 1:] += (math.cosh(t) - 1.0) * np.outer(d, d)
        return cls(g)

    @classmethod
    def boost(cls, t: float, n: int, axis: int = 0) -> "LorentzElement":
        d = np.zeros(n)
        d[axis] = 1.0
        return cls.boost_direction(t, d)

    @classmethod
    def rotation(cls, R) -> "LorentzElement":
        R = np.asarray(R, dtype=float)
        g = np.eye(R.shape[0] + 1)
        g[1:, 1:] = R
        return cls(g)

    def __matmul__(self, other: "LorentzElement") -> "LorentzElement":
        return LorentzElement(self.g @ other.g)

    @property
    def blocks(self):
        g = self.g
        return g[0, 0], g[0, 1:], g[1:, 0], g[1:, 1:]

    def apply(self, x):
        """Klein-model action X -> (c + D X)(a + b X)^{-1} on |X| < 1."""
        a, b, c, D = self.blocks
        x = np.asarray(x, dtype=float)
        return (c + x @ D.T) / (a + x @ b)[..., None]


def embed_theta(g: LorentzElement) -> np.ndarray:
    """Embed SO(1, n) in SO(2, n) by inserting a trivial second time axis."""
    a, b, c, D = g.blocks
    n = g.n
    G = np.zeros((n + 2, n + 2))
    G[0, 0] = a
    G[1, 1] = 1.0
    G[0, 2:] = b
    G[2:, 0] = c
    G[2:, 2:] = D
    return G


def matrix_ball_apply(G: np.ndarray, Z) -> np.ndarray:
    """Action Z -> (C + D Z)(A + B Z)^{-1} of SO(2, n) on n x 2 matrices."""
    Z = Z.Z if isinstance(Z, MatrixBallPoint) else np.asarray(Z, dtype=float)
    A, B, C, D = G[:2, :2], G[:2, 2:], G[2:, :2], G[2:, 2:]
    return (C + D @ Z) @ np.linalg.inv(A + B @ Z)


# ---------------------------------------------------------------- Hua and Cayley

def hua_transform(z) -> MatrixBallPoint:
    """Biholomorphism of the Lie ball onto the real n x 2 matrix ball."""
    z = np.asarray(_coords(z), dtype=complex)
    q = bilinear(z, z)
    qb = np.conj(q)
    M = np.array([[q + 1.0, 1j * (q - 1.0)], [qb + 1.0, -1j * (qb - 1.0)]])
    try:
        sol = np.linalg.solve(M, np.stack([z, np.conj(z)]))
    except np.linalg.LinAlgError as exc:
        raise DomainError("Hua transform is singular at this point") from exc
    Z = 2.0 * sol.T
    if np.max(np.abs(Z.imag)) > 1e-9 * max(1.0, np.max(np.abs(Z))):
        raise DomainError("Hua transform produced a non-real matrix")
    return MatrixBallPoint(Z.real)


def hua_inverse(Z) -> np.ndarray:
    """Inverse Hua transform by solving the quadratic equation for zz^t."""
    Zm = Z.Z if isinstance(Z, MatrixBallPoint) else np.asarray(Z, dtype=float)
    X, Y = Zm[:, 0], Zm[:, 1]
    xx, yy, xy = X @ X, Y @ Y, X @ Y
    disc = 4.0 * ((1.0 - xx) * (1.0 - yy) - xy * xy)
    if disc <= 0 or xx >= 1 or yy >= 1:
        raise DomainError("matrix is outside the matrix ball")
    P = X + 1j * Y
    Pc = X - 1j * Y
    q = bilinear(Pc, Pc) / (2.0 - xx - yy + math.sqrt(disc))
    return 0.5 * (q * P + Pc)


def cayley(z) -> np.ndarray:
    """c(z) = ((1 - zz^t) e1 + 2 z') / (1 - 2 z1 + zz^t), z' = z - z1 e1."""
    z = np.asarray(_coords(z), dtype=complex)
    q = bilinear(z, z)
    den = 1.0 - 2.0 * z[..., 0] + q
    if np.any(den == 0):
        raise DomainError("Cayley transform has a pole at e1")
    out = 2.0 * z
    out[..., 0] = 1.0 - q
    return out / den[..., None]


def cayley_inverse(w) -> np.ndarray:
    """Inverse Cayley transform w -> -c(-w)."""
    return -cayley(-np.asarray(w, dtype=complex))

"""Quadrature rules on an interval, the unit sphere and the half-line."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_chebyt, roots_gegenbauer

from .errors import ParameterError

__all__ = [
    "QuadratureRule",
    "gauss_legendre",
    "sphere_rule",
    "zonal_rule",
    "half_line_rule",
]


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights for a fixed measure.

    ``domain_tag`` is ``"interval"``, ``"sphere(k)"`` (unit sphere S^k in
    R^{k+1}, weights summing to one) or ``"half_line"``. Sphere nodes are stored
    as an ``(N, k+1)`` array.
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain_tag: str
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise ParameterError("nodes and weights differ in length")
        if np.any(self.weights <= 0):
            raise ParameterError("quadrature weights must be positive")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return len(self.weights)

    def integrate(self, f):
        """Apply the rule to a vectorised integrand ``f(nodes)``."""
        return np.tensordot(self.weights, f(self.nodes), axes=(0, 0))


def gauss_legendre(order: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Gauss-Legendre rule with ``order`` nodes on [a, b]."""
    if order < 1:
        raise ParameterError("order must be >= 1")
    x, w = np.polynomial.legendre.leggauss(order)
    half = 0.5 * (b - a)
    return QuadratureRule(half * x + 0.5 * (a + b), half * w, "interval")


def _zonal_nodes(n: int, order: int):
    # nodes/weights for the law of zeta_1 under the uniform measure on S^{n-1}
    m = order // 2 + 1
    if n == 2:
        t, w = roots_chebyt(m)
    else:
        t, w = roots_gegenbauer(m, 0.5 * (n - 2))
    return np.asarray(t, dtype=float), np.asarray(w, dtype=float) / np.sum(w)


def zonal_rule(n: int, order: int) -> QuadratureRule:
    """Rule for integrals of f(zeta_1) over S^{n-1}.

    Exact when f is a polynomial of degree <= ``order``.
    """
    if n < 2:
        raise ParameterError(f"unsupported dimension n={n}")
    if order < 1:
        raise ParameterError("order must be >= 1")
    t, w = _zonal_nodes(n, order)
    return QuadratureRule(t, w, "interval", {"n": n, "order": order})


def _sphere_arrays(n: int, order: int, first_order: int | None = None):
    if n == 2:
        count = max(order, first_order or 0) + 1
        ang = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(ang), np.sin(ang)], axis=1), np.full(count, 1.0 / count)
    t, wt = _zonal_nodes(n, max(order, first_order or 0))
    sub, ws = _sphere_arrays(n - 1, order)
    s = np.sqrt(1.0 - t * t)
    nodes = np.concatenate(
        [np.repeat(t, len(ws))[:, None], (s[:, None, None] * sub[None, :, :]).reshape(-1, n - 1)],
        axis=1,
    )
    return nodes, np.outer(wt, ws).ravel()


def _frame(axis) -> np.ndarray:
    """Orthogonal matrix whose first column is the unit vector ``axis``."""
    axis = np.asarray(axis, dtype=float)
    n = axis.shape[0]
    M = np.eye(n)
    M[:, 0] = axis / np.linalg.norm(axis)
    Qm, R = np.linalg.qr(M)
    return Qm * np.sign(R[0, 0])


def sphere_rule(n: int, order: int, axis=None, axis_order: int | None = None) -> QuadratureRule:
    """Product rule for the normalised surface measure on S^{n-1} in R^n.

    Gauss-Gegenbauer nodes in the first coordinate times a rule on S^{n-2},
    recursively, ending with the equispaced rule on the circle. Integrates all
    polynomials of total degree <= ``order`` exactly.

    ``axis_order`` raises the degree resolved along the first coordinate,
    which suits integrands that are rough only in zeta.axis; ``axis`` rotates
    that coordinate onto a given direction.
    """
    if n < 2:
        raise ParameterError(f"unsupported dimension n={n}")
    if order < 1:
        raise ParameterError("order must be >= 1")
    nodes, weights = _sphere_arrays(n, order, axis_order)
    if axis is not None:
        nodes = nodes @ _frame(axis).T
    return QuadratureRule(nodes, weights, f"sphere({n - 1})", {"n": n, "order": order})


def half_line_rule(
    cutoff: float,
    panels: int | None = None,
    order: int = 20,
    grade: float | None = None,
) -> QuadratureRule:
    """Composite Gauss-Legendre rule on [0, cutoff].

    Parameters
    ----------
    cutoff : float
        Right end of the truncated half-line.
    panels : int, optional
        Number of uniform panels after the graded zone; defaults to panels of
        width at most one.
    order : int
        Nodes per panel.
    grade : float, optional
        Distance from the real axis of the nearest integrand singularity. When
        given, panels near zero are refined geometrically down to ``grade/8``.
    """
    if cutoff <= 0:
        raise ParameterError("cutoff must be positive")
    if order < 1:
        raise ParameterError("order must be >= 1")
    edges = [0.0]
    if grade is not None and grade > 0:
        e = min(grade, 1.0) / 8.0
        while e < min(1.0, cutoff):
            edges.append(e)
            e *= 2.0
    start = edges[-1]
    if panels is None:
        panels = max(1, math.ceil(cutoff - start))
    if panels < 1:
        raise ParameterError("panels must be >= 1")
    edges.extend(np.linspace(start, cutoff, panels + 1)[1:].tolist())
    x, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        nodes.append(half * x + 0.5 * (a + b))
        weights.append(half * w)
    return QuadratureRule(
        np.concatenate(nodes),
        np.concatenate(weights),
        "half_line",
        {"cutoff": cutoff, "panels": len(edges) - 1, "order": order},
    )

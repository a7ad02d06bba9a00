"""Pure numpy implementations of the batch kernels.

These mirror ``_kernels.pyx`` exactly and are used when the compiled
extension is not available.
"""
import numpy as np


def dual_hahn_batch(k, xsq, a, b, c):
    """Continuous dual Hahn polynomial S_k(x^2; a, b, c) for an array of x^2.

    Uses (a+ix)_l (a-ix)_l = prod_{j<l} ((a+j)^2 + x^2), so every term is
    real for real parameters and real x^2 (including negative x^2).
    """
    xsq = np.asarray(xsq, dtype=float)
    ab = a + b
    ac = a + c
    term = np.ones_like(xsq)
    total = np.ones_like(xsq)
    for l in range(k):
        # term_l -> term_{l+1}
        term = term * ((l - k) * ((a + l) ** 2 + xsq)) / ((ab + l) * (ac + l) * (l + 1))
        total = total + term
    pref = 1.0
    for j in range(k):
        pref *= (ab + j) * (ac + j)
    return pref * total


def hyp2f1_series_batch(a, b, c, x, tol=1e-17, max_terms=100000):
    """Power series of 2F1(a, b; c; x) for real x in [0, 1).

    Returns ``(values, n_terms, converged)``; ``converged`` is a boolean
    array flagging points whose tail fell below ``tol``.
    """
    x = np.asarray(x, dtype=float)
    term = np.ones(x.shape, dtype=complex)
    total = np.ones(x.shape, dtype=complex)
    done = x == 0.0
    nterms = np.zeros(x.shape, dtype=np.int64)
    quiet = np.zeros(x.shape, dtype=np.int64)
    for j in range(max_terms):
        if done.all():
            break
        ratio = ((a + j) * (b + j) / ((c + j) * (j + 1))) * x
        term = term * ratio
        total = total + np.where(done, 0.0, term)
        small = np.abs(term) <= tol * np.abs(total)
        # require a few consecutive small terms before stopping
        quiet = np.where(small, quiet + 1, 0)
        newly = (~done) & (quiet >= 3) & (np.abs(ratio) < 1.0)
        nterms = np.where(newly, j + 1, nterms)
        done = done | newly
    nterms = np.where(done, nterms, max_terms)
    return total, nterms, done

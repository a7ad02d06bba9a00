import math

import mpmath
import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from lieball import kernels
from lieball._kernels_py import dual_hahn_batch as dh_py, hyp2f1_series_batch as f21_py
from lieball.errors import ConvergenceError, ParameterError
from lieball.specfun import (
    HypParams,
    dual_hahn,
    gamma,
    gauss_2f1,
    hyp3f2_terminating,
    ln_gamma,
    pochhammer,
)

finite = dict(allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(st.floats(-30, 60, **finite), st.floats(-60, 60, **finite))
@example(5e-324, 0.0)
@example(-1e-9, 1e-9)
def test_ln_gamma_matches_mpmath(x, y):
    z = complex(x, y)
    if abs(y) < 1e-3 and x <= 0 and abs(x - round(x)) < 1e-3:
        return
    ref = complex(mpmath.loggamma(z))
    got = complex(ln_gamma(z))
    # branches may differ by 2 pi i; compare exp and real part
    assert abs(got.real - ref.real) <= 1e-12 * max(1.0, abs(ref.real))
    assert abs(np.exp(1j * (got.imag - ref.imag)) - 1) < 1e-10


def test_ln_gamma_principal_branch_on_right():
    for z in [0.5 + 3j, 10 - 40j, 2.0, 100 + 0.1j]:
        assert abs(complex(ln_gamma(z)) - complex(mpmath.loggamma(z))) < 1e-12


def test_gamma_small_integers():
    for k in range(1, 15):
        assert abs(gamma(k) - math.factorial(k - 1)) <= 1e-13 * math.factorial(k - 1)


def test_gamma_reflection():
    z = np.array([0.3 + 0.7j, -2.5 + 0.1j, 1.7 - 4j])
    lhs = gamma(z) * gamma(1 - z)
    np.testing.assert_allclose(lhs, np.pi / np.sin(np.pi * z), rtol=1e-12)


def test_pochhammer():
    assert pochhammer(0.5, 0) == 1
    assert pochhammer(3, 4) == 3 * 4 * 5 * 6
    assert abs(pochhammer(0.25, 7) - gamma(7.25).real / gamma(0.25).real) < 1e-12 * pochhammer(0.25, 7)
    with pytest.raises(ParameterError):
        pochhammer(1.0, -1)


@settings(max_examples=80, deadline=None)
@given(
    st.floats(-3, 5, **finite),
    st.floats(-3, 5, **finite),
    st.floats(0.3, 6, **finite),
    st.floats(-0.9, 0.85, **finite),
)
def test_gauss_2f1_matches_mpmath(a, b, c, x):
    ref = complex(mpmath.hyp2f1(a, b, c, x))
    got = gauss_2f1(HypParams.f21(a, b, c), x)
    assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref))


def test_gauss_2f1_complex_parameters_and_arrays():
    a, b, c = 1.5 + 2j, 0.25 - 2j, 1.5
    xs = np.array([-0.7, 0.0, 0.3, 0.9])
    got = gauss_2f1(HypParams.f21(a, b, c), xs)
    ref = [complex(mpmath.hyp2f1(a, b, c, x)) for x in xs]
    np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_gauss_2f1_known_closed_forms():
    x = 0.37
    # 2F1(1,1;2;x) = -log(1-x)/x
    assert abs(gauss_2f1(HypParams.f21(1, 1, 2), x) + math.log1p(-x) / x) < 1e-14
    # 2F1(a,b;b;x) = (1-x)^{-a}
    assert abs(gauss_2f1(HypParams.f21(0.7, 2.2, 2.2), x) - (1 - x) ** -0.7) < 1e-14


def test_gauss_2f1_errors():
    with pytest.raises(ParameterError):
        gauss_2f1(HypParams.f21(1, 1, 2), 1.0)
    with pytest.raises(ParameterError):
        gauss_2f1(HypParams.f21(1, 1, -2), 0.5)
    with pytest.raises(ConvergenceError) as info:
        gauss_2f1(HypParams.f21(1, 1, 2), 0.999999, max_terms=50)
    assert "max_terms" in info.value.diagnostics


def test_terminating_parameters():
    assert HypParams.f21(-3, 1, -5).terminates_at() == 3
    # the pole at c = -5 lies beyond the terminating index
    val = gauss_2f1(HypParams.f21(-3, 1, -5), 0.5)
    ref = sum(pochhammer(-3, k) * pochhammer(1, k) / (pochhammer(-5, k) * math.factorial(k)) * 0.5 ** k
              for k in range(4))
    assert abs(val - ref) < 1e-14


def _dual_hahn_mp(k, xsq, a, b, c):
    x = mpmath.sqrt(mpmath.mpf(xsq))
    s = mpmath.hyp3f2(-k, a + 1j * x, a - 1j * x, a + b, a + c, 1)
    return float(mpmath.re(mpmath.rf(a + b, k) * mpmath.rf(a + c, k) * s))


@pytest.mark.parametrize("k", [0, 1, 2, 5, 8])
def test_dual_hahn_matches_mpmath(k):
    for xsq in [0.0, 0.3, 4.0, 25.0, -0.04]:
        a, b, c = 0.5, 1.5, 0.8
        ref = _dual_hahn_mp(k, xsq, a, b, c)
        assert abs(dual_hahn(k, xsq, a, b, c) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_dual_hahn_three_term_recurrence():
    # -(a^2 + x^2) S_k = A_k S_{k+1} - (A_k + C_k) S_k + C_k S_{k-1} for
    # normalised S_k / ((a+b)_k (a+c)_k)
    a, b, c = 0.5, 1.0, 0.7
    x2 = np.linspace(0.0, 9.0, 7)
    for k in range(1, 6):
        s = [dual_hahn(j, x2, a, b, c) / (pochhammer(a + b, j) * pochhammer(a + c, j))
             for j in (k - 1, k, k + 1)]
        A = (k + a + b) * (k + a + c)
        C = k * (k + b + c - 1)
        lhs = -(a * a + x2) * s[1]
        rhs = A * s[2] - (A + C) * s[1] + C * s[0]
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-10)


def test_hyp3f2_terminating_saalschutz():
    # Pfaff-Saalschutz: 3F2(-k, a, b; c, 1+a+b-c-k; 1) = (c-a)_k (c-b)_k / ((c)_k (c-a-b)_k)
    a, b, c, k = 0.3, 1.7, 2.9, 5
    lhs = hyp3f2_terminating(k, a, b, c, 1 + a + b - c - k)
    rhs = pochhammer(c - a, k) * pochhammer(c - b, k) / (pochhammer(c, k) * pochhammer(c - a - b, k))
    assert abs(lhs - rhs) < 1e-12 * abs(rhs)


def test_backends_agree():
    xsq = np.linspace(-0.2, 30.0, 50)
    for k in range(7):
        np.testing.assert_allclose(
            kernels.dual_hahn_batch(k, xsq, 0.5, 1.0, 0.3), dh_py(k, xsq, 0.5, 1.0, 0.3),
            rtol=1e-13, atol=1e-13,
        )
    x = np.linspace(0.0, 0.95, 40)
    v1, n1, c1 = kernels.hyp2f1_series_batch(0.5 + 1j, 0.5 - 1j, 1.5, x)
    v2, n2, c2 = f21_py(0.5 + 1j, 0.5 - 1j, 1.5, x)
    np.testing.assert_allclose(v1, v2, rtol=1e-14)
    assert np.all(c1) and np.all(c2)

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from pbgent.cspecfun import DomainError, erf_complex, erf_series, faddeeva_w


def erf_series_mp(z, dps=60):
    """Maclaurin series of erf summed in high precision until the terms vanish."""
    with mpmath.workdps(dps):
        z = mpmath.mpc(z.real, z.imag)
        z2 = z * z
        term = z
        total = z
        n = 0
        while True:
            n += 1
            term = term * (-z2) / n
            contrib = term / (2 * n + 1)
            total += contrib
            if abs(contrib) < mpmath.mpf(10) ** (-dps + 5) * max(1, abs(total)):
                break
        val = 2 / mpmath.sqrt(mpmath.pi) * total
        return complex(val)


def faddeeva_quad(z):
    """w(z) = (i/pi) int exp(-t^2) / (z - t) dt, valid for Im z > 0."""
    def re(t):
        return (1j / math.pi * math.exp(-t * t) / (z - t)).real

    def im(t):
        return (1j / math.pi * math.exp(-t * t) / (z - t)).imag

    opts = dict(limit=500, epsabs=1e-15, epsrel=1e-13)
    r = integrate.quad(re, -np.inf, np.inf, **opts)[0]
    i = integrate.quad(im, -np.inf, np.inf, **opts)[0]
    return complex(r, i)


complexes = st.builds(
    complex,
    st.floats(-4.0, 4.0, allow_nan=False),
    st.floats(-4.0, 4.0, allow_nan=False),
)


def test_erf_zero():
    assert erf_complex(0j) == 0


def test_erf_one_plus_i_matches_series():
    # frozen from the 40-digit series oracle
    expected = complex(1.3161512816979476449, 0.19045346923783468628)
    got = erf_complex(1 + 1j)
    assert abs(got - expected) <= 1e-14 * abs(expected)
    assert abs(got - erf_series_mp(1 + 1j)) <= 1e-14 * abs(expected)


def test_erf_large_real():
    assert abs(erf_complex(6.0 + 0j) - 1.0) <= 1e-15
    assert abs(erf_complex(-6.0 + 0j) + 1.0) <= 1e-15


def test_erf_real_axis_matches_math():
    for x in np.linspace(-5, 5, 41):
        assert abs(erf_complex(complex(x)) - math.erf(x)) <= 2e-16


@pytest.mark.parametrize("z", [0.3 + 0.2j, 1.4 - 0.1j, 1.6 + 1.2j, 3 - 2j, -4.5 + 0.7j, 0.2 + 4.9j, 5j])
def test_erf_against_series_oracle(z):
    ref = erf_series_mp(z)
    assert abs(erf_complex(z) - ref) <= 1e-12 * abs(ref) + 1e-14


def test_series_branch_agrees_with_faddeeva_branch_at_crossover():
    for theta in np.linspace(0, 2 * np.pi, 17):
        z = 1.5 * cmath.exp(1j * theta)
        sign = 1.0 if z.real >= 0 else -1.0
        zf = sign * z
        via_w = sign * (1.0 - cmath.exp(-zf * zf) * faddeeva_w(1j * zf))
        assert abs(erf_series(z) - via_w) <= 1e-14


def test_erf_vectorised_shape():
    z = np.array([[0.1 + 0.1j, 2.0], [3j, -1.0]])
    out = erf_complex(z)
    assert out.shape == (2, 2)
    assert abs(out[1, 1] - math.erf(-1.0)) < 1e-15


def test_nan_is_domain_error():
    with pytest.raises(DomainError):
        erf_complex(complex(float("nan"), 0))
    with pytest.raises(DomainError):
        faddeeva_w(np.array([1.0, complex(0, float("nan"))]))


def test_overflow_reported():
    with pytest.raises(OverflowError):
        erf_complex(40j)


def test_faddeeva_zero():
    assert faddeeva_w(0j) == 1


def test_faddeeva_quadrature_oracle():
    # frozen from a 20-digit mpmath quadrature of the defining integral
    expected = complex(0.10335882374136665895, 0.28478588475009374558)
    got = faddeeva_w(2 + 0.5j)
    assert abs(got - expected) <= 1e-14
    assert abs(got - faddeeva_quad(2 + 0.5j)) <= 1e-12


@pytest.mark.parametrize("z", [0.5 + 1j, -2 + 0.3j, 3 + 3j, 6 + 0.01j])
def test_faddeeva_quadrature_upper_half_plane(z):
    ref = faddeeva_quad(z)
    assert abs(faddeeva_w(z) - ref) <= 1e-11 * abs(ref)


@given(complexes)
def test_faddeeva_reflection(z):
    lhs = faddeeva_w(z) + faddeeva_w(-z)
    rhs = 2 * cmath.exp(-z * z)
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))


@given(complexes)
def test_erf_odd(z):
    a = erf_complex(z)
    b = erf_complex(-z)
    assert abs(a + b) <= 1e-13 * max(1.0, abs(a))


@given(complexes)
def test_erf_conjugation(z):
    a = erf_complex(z.conjugate())
    b = erf_complex(z).conjugate()
    assert abs(a - b) <= 1e-13 * max(1.0, abs(a))


@settings(max_examples=60)
@given(st.floats(-3.0, 3.0), st.floats(-2.5, 2.5))
def test_erf_derivative(x, y):
    z = complex(x, y)
    h = 1e-5
    numeric = (erf_complex(z + h) - erf_complex(z - h)) / (2 * h)
    exact = 2 / math.sqrt(math.pi) * cmath.exp(-z * z)
    # O(h^2) truncation plus round-off amplified by 1/h
    scale = max(1.0, abs(erf_complex(z)), abs(exact))
    assert abs(numeric - exact) <= 1e-8 * scale


def test_erf_consistency_with_series_on_disc():
    rng = np.random.default_rng(7)
    r = 5 * np.sqrt(rng.random(200))
    z = r * np.exp(2j * np.pi * rng.random(200))
    got = erf_complex(z)
    for zi, gi in zip(z, got):
        ref = erf_series_mp(zi)
        assert abs(gi - ref) <= 1e-11 * abs(ref) + 1e-14

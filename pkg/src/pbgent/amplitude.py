"""Reservoir parameters, the band-edge memory kernel and the analytic
excited-state amplitude of an atom near an anisotropic photonic band edge.

Conventions
-----------
* ``alpha_sq`` is the square of the band-edge coupling constant ``alpha``
  (``alpha`` has units s^-1/2), ``delta = omega0 - omega_c`` is the detuning
  from the upper band edge; ``delta < 0`` puts the atom inside the gap.
* Every time argument named ``t_dimless`` is the product ``alpha^2 t``; the
  amplitude itself is evaluated with ``alpha^2 = 1`` and ``delta`` measured
  in units of ``alpha^2``.
* Kernel normalisation: the closed-form amplitude ``c(t)`` solves the memory
  equation ``dc/dt = -int_0^t G(t - tau) c(tau) dtau`` for a kernel
  ``-k exp(i[delta tau + pi/4]) / tau^(3/2)`` of strength
  ``k = alpha / (2 sqrt(pi))`` (Hadamard finite part at ``tau -> 0``),
  not ``k = alpha``. :func:`kernel_params_for_amplitude` performs that
  rescaling; :func:`kernel_G` itself uses ``alpha`` as given.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cspecfun import ComplexValue, erf_complex, faddeeva_w

__all__ = [
    "ReservoirParams",
    "PhysicalParams",
    "RootPair",
    "SteadyStateError",
    "alpha_from_physical",
    "lambda_roots",
    "amplitude_c",
    "amplitude_c_erf",
    "kernel_G",
    "kernel_params_for_amplitude",
    "plateau_amplitude",
    "steady_amplitude",
    "memory_residual",
    "DOUBLE_ROOT_TOL",
]

# |alpha^2 - 4 delta| (in alpha^2 units) below which the double-root limit is used
DOUBLE_ROOT_TOL = 1e-8
_PHASE = cmath.exp(-0.25j * math.pi)
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


class SteadyStateError(RuntimeError):
    """Late-time amplitude failed to settle within the allowed horizon."""


@dataclass(frozen=True)
class ReservoirParams:
    """Band-edge coupling ``alpha_sq`` (> 0) and detuning ``delta``."""

    alpha_sq: float
    delta: float

    def __post_init__(self):
        if not (self.alpha_sq > 0 and math.isfinite(self.alpha_sq)):
            raise ValueError(f"alpha_sq must be positive and finite, got {self.alpha_sq!r}")
        if not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite, got {self.delta!r}")

    @classmethod
    def scaled(cls, delta_over_alpha_sq: float) -> "ReservoirParams":
        """Parameters in units where ``alpha^2 = 1``."""
        return cls(alpha_sq=1.0, delta=float(delta_over_alpha_sq))

    @property
    def alpha(self) -> float:
        return math.sqrt(self.alpha_sq)

    @property
    def delta_over_alpha_sq(self) -> float:
        return self.delta / self.alpha_sq

    def dimensionless(self) -> "ReservoirParams":
        return ReservoirParams.scaled(self.delta_over_alpha_sq)


@dataclass(frozen=True)
class PhysicalParams:
    """Microscopic inputs that fix ``alpha`` and ``delta``.

    ``k0`` is carried for completeness; the dynamics only see it through
    ``alpha``.
    """

    omega0: float
    omega_c: float
    A: float
    d: float
    epsilon0: float
    k0: float = 0.0

    def __post_init__(self):
        if self.omega_c <= 0 or self.A <= 0:
            raise ValueError("omega_c and A must be positive")


@dataclass(frozen=True)
class RootPair:
    """Roots of ``lambda^2 + alpha lambda + delta = 0``."""

    lambda_plus: ComplexValue
    lambda_minus: ComplexValue

    @property
    def discriminant_sqrt(self) -> ComplexValue:
        return self.lambda_plus - self.lambda_minus


def alpha_from_physical(p: PhysicalParams) -> ReservoirParams:
    """``alpha = omega0^2 d^2 / (8 omega_c epsilon0 (pi A)^(3/2))``, ``delta = omega0 - omega_c``."""
    for name in ("omega0", "omega_c", "A", "d", "epsilon0"):
        value = getattr(p, name)
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value!r}")
    alpha = p.omega0**2 * p.d**2 / (8.0 * p.omega_c * p.epsilon0 * (math.pi * p.A) ** 1.5)
    return ReservoirParams(alpha_sq=alpha * alpha, delta=p.omega0 - p.omega_c)


def lambda_roots(params: ReservoirParams) -> RootPair:
    """Both roots, principal branch of the complex square root."""
    alpha = params.alpha
    disc = cmath.sqrt(complex(params.alpha_sq - 4.0 * params.delta))
    return RootPair(lambda_plus=(-alpha + disc) / 2.0, lambda_minus=(-alpha - disc) / 2.0)


def kernel_params_for_amplitude(params: ReservoirParams) -> ReservoirParams:
    """Kernel strength whose memory equation is solved by :func:`amplitude_c`.

    Returns parameters with ``alpha`` divided by ``2 sqrt(pi)``
    (``alpha_sq`` divided by ``4 pi``) and the same detuning.
    """
    return ReservoirParams(alpha_sq=params.alpha_sq / (4.0 * math.pi), delta=params.delta)


def _check_times(t_dimless):
    t = np.asarray(t_dimless, dtype=float)
    if np.isnan(t).any() or (t < 0).any():
        raise ValueError("time must be non-negative")
    return t


def _root_term(lam, r):
    # lam * exp(i lam^2 t) * (1 + erf(lam e^{i pi/4} sqrt t)) == lam * w(lam e^{-i pi/4} sqrt t)
    return lam * faddeeva_w(lam * r)


def _root_term_derivative(lam, r):
    u = lam * r
    w = faddeeva_w(u)
    return (1.0 - 2.0 * u * u) * w + 1j * _TWO_OVER_SQRT_PI * u


def amplitude_c(t_dimless, params: ReservoirParams):
    """Analytic excited-state amplitude ``c(t)`` with ``c(0) = 1``.

    Parameters
    ----------
    t_dimless : float or array_like
        ``alpha^2 t >= 0``.
    params : ReservoirParams
        Only ``delta / alpha^2`` matters.

    Returns
    -------
    complex or ndarray
        ``eps [lam+ e^{i lam+^2 t}(1 + erf(lam+ e^{i pi/4} sqrt t))
        - lam- e^{i lam-^2 t}(1 + erf(lam- e^{i pi/4} sqrt t))]`` with
        ``eps = e^{i delta t} / sqrt(alpha^2 - 4 delta)``.

    Notes
    -----
    Each bracketed term is evaluated as ``lam * w(lam e^{-i pi/4} sqrt t)``,
    which is the same function without the catastrophic cancellation of
    ``e^{z^2}(1 + erf z)`` at late times. At the double root
    ``delta = alpha^2 / 4`` the divided difference is replaced by its limit,
    the derivative of ``lam w(lam e^{-i pi/4} sqrt t)`` at ``lam = -1/2``.
    """
    t = _check_times(t_dimless)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    delta = params.delta_over_alpha_sq
    prefactor = np.exp(1j * delta * t)
    r = _PHASE * np.sqrt(t)
    disc_sq = 1.0 - 4.0 * delta
    if abs(disc_sq) < DOUBLE_ROOT_TOL:
        out = prefactor * _root_term_derivative(-0.5, r)
    else:
        roots = lambda_roots(params.dimensionless())
        lp, lm = roots.lambda_plus, roots.lambda_minus
        out = prefactor * (_root_term(lp, r) - _root_term(lm, r)) / (lp - lm)
    return complex(out[0]) if scalar else out


def amplitude_c_erf(t_dimless, params: ReservoirParams):
    """The same closed form evaluated literally through ``erf_complex``.

    Reference implementation for cross-checks only: at late times for
    ``delta > alpha^2/4`` the literal form cancels catastrophically.
    """
    t = np.atleast_1d(_check_times(t_dimless))
    roots = lambda_roots(params.dimensionless())
    lp, lm = roots.lambda_plus, roots.lambda_minus
    delta = params.delta_over_alpha_sq
    z = cmath.exp(0.25j * math.pi) * np.sqrt(t)
    eps = np.exp(1j * delta * t) / (lp - lm)
    term_p = lp * np.exp(1j * lp * lp * t) * (1.0 + erf_complex(lp * z))
    term_m = lm * np.exp(1j * lm * lm * t) * (1.0 + erf_complex(lm * z))
    return eps * (term_p - term_m)


def kernel_G(tau, params: ReservoirParams):
    """Long-time band-edge kernel ``-alpha exp(i[delta tau + pi/4]) / tau^(3/2)``.

    ``tau`` and ``params`` must share units (``alpha^2 tau`` dimensionless).
    """
    tau_arr = np.asarray(tau, dtype=float)
    if np.isnan(tau_arr).any() or (tau_arr <= 0).any():
        raise ValueError("kernel is defined only for tau > 0")
    val = -params.alpha * np.exp(1j * (params.delta * tau_arr + 0.25 * math.pi)) / tau_arr**1.5
    return complex(val) if val.ndim == 0 else val


def plateau_amplitude(params: ReservoirParams) -> float:
    """Exact late-time ``|c|``: ``2 lam+ / sqrt(alpha^2 - 4 delta)`` inside the gap, else 0.

    Only the ``lam+`` term has a non-decaying part when ``delta < 0``
    (``w(z) -> 2 exp(-z^2)`` deep in the lower half-plane); the power-law
    remainders of both terms fall off as ``t^(-3/2)``.
    """
    delta = params.delta_over_alpha_sq
    if delta >= 0:
        return 0.0
    root = math.sqrt(1.0 - 4.0 * delta)
    return (root - 1.0) / root


def steady_amplitude(
    params: ReservoirParams,
    *,
    t_start: float = 10.0,
    t_max: float = 1.0e5,
    tol: float = 1e-4,
    samples: int = 2001,
) -> float:
    """Late-time ``lim sup |c(t)|`` by window doubling.

    The maximum of ``|c|`` over ``[T, 2T]`` is compared with the previous
    window; ``T`` doubles until successive maxima differ by less than
    ``tol``. Returns 0 for ``delta >= 0`` (no bound state).

    Raises
    ------
    SteadyStateError
        If ``T`` exceeds ``t_max`` without convergence.
    """
    if params.delta_over_alpha_sq >= 0:
        return 0.0
    T = t_start
    previous = None
    while T <= t_max:
        window = np.linspace(T, 2.0 * T, samples)
        current = float(np.max(np.abs(amplitude_c(window, params))))
        if previous is not None and abs(current - previous) < tol:
            return min(current, 1.0)
        previous = current
        T *= 2.0
    raise SteadyStateError(
        f"|c| did not settle to {tol:g} by alpha^2 t = {t_max:g} "
        f"(delta/alpha^2 = {params.delta_over_alpha_sq:g})"
    )


def memory_residual(t_dimless: float, params: ReservoirParams, kernel_params: ReservoirParams | None = None,
                    h: float = 1e-4) -> float:
    """Relative mismatch between both sides of the memory equation at one time.

    The left side is a central difference of :func:`amplitude_c`; the right
    side is the Hadamard finite part of ``-int_0^t G(u) c(t - u) du`` with
    ``G`` from :func:`kernel_G` at ``kernel_params`` (by default
    :func:`kernel_params_for_amplitude`). All quantities in ``alpha^2 = 1``
    units.
    """
    if t_dimless <= h:
        raise ValueError("residual needs t > h")
    dim = params.dimensionless()
    if kernel_params is None:
        kp = kernel_params_for_amplitude(dim)
    else:
        kp = ReservoirParams(kernel_params.alpha_sq / params.alpha_sq, kernel_params.delta / params.alpha_sq)
    lhs = (amplitude_c(t_dimless + h, dim) - amplitude_c(t_dimless - h, dim)) / (2.0 * h)

    k0 = -kp.alpha * cmath.exp(0.25j * math.pi)
    f0 = k0 * amplitude_c(t_dimless, dim)

    def f(u):
        return k0 * cmath.exp(1j * kp.delta * u) * amplitude_c(t_dimless - u, dim)

    # u = v^2 turns the u^(-3/2) singularity into a bounded integrand.
    def integrand(v):
        if v == 0.0:
            v = 1e-12
        return 2.0 * (f(v * v) - f0) / (v * v)

    upper = math.sqrt(t_dimless)
    re = integrate.quad(lambda v: integrand(v).real, 0.0, upper, limit=400, epsabs=1e-12, epsrel=1e-10)[0]
    im = integrate.quad(lambda v: integrand(v).imag, 0.0, upper, limit=400, epsabs=1e-12, epsrel=1e-10)[0]
    finite_part = complex(re, im) - 2.0 * f0 / upper
    rhs = -finite_part
    return abs(lhs - rhs) / abs(lhs)

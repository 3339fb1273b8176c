"""Density matrices, the band-edge decay channel and two-qubit concurrence.

Basis ordering is fixed throughout: single qubit ``(e, g)``, two qubits
``(ee, eg, ge, gg)`` (Kronecker order, atom A first). Identifying ``e`` with
index 0 and ``g`` with index 1 makes the spin flip ``sigma_y (x) sigma_y``
the usual one.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .amplitude import ReservoirParams, amplitude_c, steady_amplitude

__all__ = [
    "BASIS",
    "BellFamily",
    "InitialBellState",
    "HorizonError",
    "check_density",
    "decay_kraus",
    "single_qubit_evolve",
    "two_qubit_evolve",
    "wootters_concurrence",
    "x_state_concurrence",
    "concurrence_phi",
    "concurrence_psi",
    "concurrence",
    "esd_time",
    "esd_beta_threshold",
]

BASIS = ("ee", "eg", "ge", "gg")
AMPLITUDE_SLACK = 1e-6
DENSITY_TOL = 1e-10

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


class HorizonError(RuntimeError):
    """The concurrence is still heading for zero when the horizon is reached."""


class BellFamily(enum.Enum):
    PHI_ODD = "phi"   # beta|ge> + gamma|eg>
    PSI_EVEN = "psi"  # beta|gg> + gamma|ee>

    @classmethod
    def parse(cls, value) -> "BellFamily":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise ValueError(f"unknown Bell family {value!r}")


@dataclass(frozen=True)
class InitialBellState:
    """``beta |x> + |gamma| e^{i phi} |y>`` with real ``beta`` in [0, 1]."""

    family: BellFamily
    beta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", BellFamily.parse(self.family))
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta!r}")

    @classmethod
    def from_beta_sq(cls, family, beta_sq: float, phi: float = 0.0) -> "InitialBellState":
        if not 0.0 <= beta_sq <= 1.0:
            raise ValueError(f"beta^2 must lie in [0, 1], got {beta_sq!r}")
        return cls(family, math.sqrt(beta_sq), phi)

    @property
    def gamma(self) -> complex:
        return math.sqrt(max(0.0, 1.0 - self.beta**2)) * complex(math.cos(self.phi), math.sin(self.phi))

    def ket(self) -> np.ndarray:
        psi = np.zeros(4, dtype=complex)
        if self.family is BellFamily.PHI_ODD:
            psi[BASIS.index("ge")] = self.beta
            psi[BASIS.index("eg")] = self.gamma
        else:
            psi[BASIS.index("gg")] = self.beta
            psi[BASIS.index("ee")] = self.gamma
        return psi

    def density(self) -> np.ndarray:
        psi = self.ket()
        return np.outer(psi, psi.conj())


def check_density(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.3g} != 1")
    if np.linalg.eigvalsh(rho)[0] < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def _check_amplitude(c) -> complex:
    c = complex(c)
    if abs(c) > 1.0 + AMPLITUDE_SLACK:
        raise ValueError(f"|c| = {abs(c):.8f} exceeds 1; amplitude approximation has broken down")
    return c


def decay_kraus(c) -> tuple[np.ndarray, np.ndarray]:
    """Kraus pair of the single-atom map in the ``(e, g)`` basis."""
    c = _check_amplitude(c)
    leak = math.sqrt(max(0.0, 1.0 - abs(c) ** 2))
    k0 = np.array([[c, 0.0], [0.0, 1.0]], dtype=complex)
    k1 = np.array([[0.0, 0.0], [leak, 0.0]], dtype=complex)
    return k0, k1


def single_qubit_evolve(rho0, c) -> np.ndarray:
    """Map a qubit state through the decay amplitude ``c``.

    ``rho_ee -> rho_ee |c|^2``, ``rho_eg -> rho_eg c``,
    ``rho_gg -> rho_gg + rho_ee (1 - |c|^2)``.
    """
    rho0 = check_density(rho0)
    if rho0.shape != (2, 2):
        raise ValueError("single-qubit density matrix must be 2x2")
    c = _check_amplitude(c)
    p = abs(c) ** 2
    return np.array(
        [
            [rho0[0, 0] * p, rho0[0, 1] * c],
            [rho0[1, 0] * c.conjugate(), rho0[1, 1] + rho0[0, 0] * (1.0 - p)],
        ],
        dtype=complex,
    )


def two_qubit_evolve(initial: InitialBellState, cA, cB=None) -> np.ndarray:
    """Apply the decay map independently to both atoms (``cB`` defaults to ``cA``)."""
    if cB is None:
        cB = cA
    ka = decay_kraus(cA)
    kb = decay_kraus(cB)
    psi = initial.ket()
    rho = np.zeros((4, 4), dtype=complex)
    for a in ka:
        for b in kb:
            v = np.kron(a, b) @ psi
            rho += np.outer(v, v.conj())
    return rho


def wootters_concurrence(rho, tol: float = DENSITY_TOL) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are the square roots of the eigenvalues of
    ``rho (sy sy) rho* (sy sy)``. They are obtained as the singular values
    of ``F^dag (sy sy) F^*`` for a factorisation ``rho = F F^dag``, which
    avoids square-rooting round-off in tiny eigenvalues.
    """
    rho = check_density(rho, tol)
    if rho.shape != (4, 4):
        raise ValueError("two-qubit density matrix must be 4x4")
    w, v = np.linalg.eigh(rho)
    w = np.where(w > 1e-15, w, 0.0)
    factor = v * np.sqrt(w)
    tau = factor.conj().T @ _YY @ factor.conj()
    lam = np.linalg.svd(tau, compute_uv=False)
    return float(min(1.0, max(0.0, lam[0] - lam[1:].sum())))


def x_state_concurrence(rho) -> float:
    """Closed-form concurrence of an X-shaped two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    d = rho.diagonal().real.clip(min=0.0)
    outer = abs(rho[1, 2]) - math.sqrt(d[0] * d[3])
    inner = abs(rho[0, 3]) - math.sqrt(d[1] * d[2])
    return max(0.0, 2.0 * outer, 2.0 * inner)


def _check_beta_c(beta, c_abs_sq):
    beta = np.asarray(beta, dtype=float)
    p = np.asarray(c_abs_sq, dtype=float)
    if np.isnan(beta).any() or (beta < 0).any() or (beta > 1).any():
        raise ValueError("beta must lie in [0, 1]")
    upper = (1.0 + AMPLITUDE_SLACK) ** 2
    if np.isnan(p).any() or (p < 0).any() or (p > upper).any():
        raise ValueError("|c|^2 must lie in [0, 1]")
    return beta, np.minimum(p, 1.0)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def concurrence_phi(beta, c_abs_sq):
    """``max(0, 2 sqrt(1 - beta^2) |c|^2 beta)`` for ``beta|ge> + gamma|eg>``."""
    beta, p = _check_beta_c(beta, c_abs_sq)
    val = 2.0 * np.sqrt(1.0 - beta**2) * p * beta
    return _scalar(np.maximum(0.0, val))


def _psi_bracket(beta, p):
    return beta - np.sqrt(1.0 - beta**2) * (1.0 - p)


def concurrence_psi(beta, c_abs_sq):
    """``max(0, 2 sqrt(1 - beta^2) |c|^2 [beta - sqrt(1 - beta^2)(1 - |c|^2)])``."""
    beta, p = _check_beta_c(beta, c_abs_sq)
    val = 2.0 * np.sqrt(1.0 - beta**2) * p * _psi_bracket(beta, p)
    return _scalar(np.maximum(0.0, val))


def concurrence(family, beta, c_abs_sq):
    family = BellFamily.parse(family)
    if family is BellFamily.PHI_ODD:
        return concurrence_phi(beta, c_abs_sq)
    return concurrence_psi(beta, c_abs_sq)


def _bracket(family: BellFamily, beta: float, p):
    # The factor inside max{0, .} that can change sign; the prefactor
    # 2 sqrt(1-beta^2)|c|^2 only touches zero at isolated instants.
    if family is BellFamily.PHI_ODD:
        return np.full(np.shape(p), beta, dtype=float)
    return _psi_bracket(beta, np.minimum(p, 1.0))


def esd_time(
    initial: InitialBellState,
    params: ReservoirParams,
    *,
    horizon: float = 50.0,
    window: float = 1.0,
    tol: float = 1e-9,
    dt: float = 0.01,
):
    """First ``alpha^2 t`` at which the concurrence dies and stays dead.

    Death means the sign-changing bracket of the closed form is ``<= tol``
    for every sample of ``[t, t + window]``. The onset is refined by
    bisection to ~1e-10. Returns ``0.0`` for an initially separable state.

    Returns
    -------
    float or None
        ``None`` when the concurrence stays positive up to ``horizon`` and
        its late-time limit is positive or reached only asymptotically.

    Raises
    ------
    HorizonError
        No death before ``horizon`` although the late-time limit of the
        bracket is negative, i.e. death would come later.
    """
    family = initial.family
    beta = initial.beta
    if concurrence(family, beta, 1.0) <= tol:
        return 0.0

    t = np.arange(0.0, horizon + window + 0.5 * dt, dt)
    p = np.abs(amplitude_c(t, params)) ** 2
    dead = _bracket(family, beta, p) <= tol
    span = int(round(window / dt))

    # dead_run[i] = length of the run of dead samples starting at i
    dead_run = np.zeros(len(t) + 1, dtype=int)
    for i in range(len(t) - 1, -1, -1):
        dead_run[i] = dead_run[i + 1] + 1 if dead[i] else 0
    onsets = np.nonzero((dead_run[:-1] > span) & (t <= horizon))[0]
    if onsets.size:
        i = int(onsets[0])
        if i == 0:
            return 0.0
        lo, hi = t[i - 1], t[i]
        while hi - lo > 1e-10:
            mid = 0.5 * (lo + hi)
            pm = abs(amplitude_c(mid, params)) ** 2
            if _bracket(family, beta, pm) <= tol:
                hi = mid
            else:
                lo = mid
        return float(hi)

    p_inf = steady_amplitude(params) ** 2
    limit = float(_bracket(family, beta, p_inf))
    if limit < -tol:
        raise HorizonError(
            f"concurrence still decaying toward zero at alpha^2 t = {horizon:g}; increase the horizon"
        )
    return None


def esd_beta_threshold(params: ReservoirParams, *, tol: float = 1e-6) -> float:
    """Largest ``beta^2`` below which ``beta|gg> + gamma|ee>`` dies in finite time.

    Bisection on ``beta^2`` of the late-time criterion
    ``beta <= sqrt(1 - beta^2) (1 - |c_inf|^2)`` with ``|c_inf|`` from
    :func:`~pbgent.amplitude.steady_amplitude`.
    """
    p_inf = steady_amplitude(params) ** 2
    q = 1.0 - p_inf

    def dies(beta_sq):
        return math.sqrt(beta_sq) <= math.sqrt(1.0 - beta_sq) * q

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if dies(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)

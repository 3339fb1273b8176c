"""Entanglement dynamics of two atoms decaying into anisotropic photonic band-gap reservoirs."""
from .amplitude import (
    PhysicalParams,
    ReservoirParams,
    RootPair,
    SteadyStateError,
    alpha_from_physical,
    amplitude_c,
    kernel_G,
    kernel_params_for_amplitude,
    lambda_roots,
    plateau_amplitude,
    steady_amplitude,
)
from .cspecfun import DomainError, erf_complex, faddeeva_w
from .entanglement import (
    BellFamily,
    HorizonError,
    InitialBellState,
    concurrence,
    concurrence_phi,
    concurrence_psi,
    esd_beta_threshold,
    esd_time,
    single_qubit_evolve,
    two_qubit_evolve,
    wootters_concurrence,
)
from .modes import build_reservoir, integrate_modes, kernel_match, oracle_reservoir

__version__ = "0.1.0"

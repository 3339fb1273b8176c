"""
Closed-form concurrence against the general Wootters formula
============================================================

The decayed Bell states are X-shaped, so their concurrence has a closed
form. Here the full density matrix is built through the Kraus map and
passed to the general routine for comparison.
"""

import math

import numpy as np

from pbgent import InitialBellState, concurrence_psi, two_qubit_evolve, wootters_concurrence

worst = 0.0
for b2 in np.linspace(0.0, 1.0, 11):
    for p in np.linspace(0.0, 1.0, 11):
        rho = two_qubit_evolve(InitialBellState.from_beta_sq("psi", b2), math.sqrt(p))
        worst = max(worst, abs(wootters_concurrence(rho) - concurrence_psi(math.sqrt(b2), p)))
print(f"largest difference on an 11x11 grid: {worst:.2e}")

rho = two_qubit_evolve(InitialBellState.from_beta_sq("psi", 0.5), math.sqrt(0.5))
np.set_printoptions(precision=3, suppress=True)
print(rho.real)

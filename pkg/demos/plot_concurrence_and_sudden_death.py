"""
Concurrence of two atoms and finite-time disentanglement
========================================================

Each atom decays into its own reservoir. The odd Bell family
beta|ge> + gamma|eg> loses entanglement only asymptotically, while the
even family beta|gg> + gamma|ee> dies at a finite time when beta^2 is
below a detuning-dependent threshold.
"""

import math

import numpy as np

from pbgent import (
    InitialBellState,
    ReservoirParams,
    amplitude_c,
    concurrence_phi,
    concurrence_psi,
    esd_beta_threshold,
    esd_time,
)

params = ReservoirParams.scaled(1.0)
t = np.linspace(0.0, 6.0, 7)
p = np.abs(amplitude_c(t, params)) ** 2

beta = math.sqrt(0.3)
print("t        ", " ".join(f"{v:6.2f}" for v in t))
print("C odd    ", " ".join(f"{v:6.3f}" for v in concurrence_phi(beta, p)))
print("C even   ", " ".join(f"{v:6.3f}" for v in concurrence_psi(beta, p)))

# the even family at beta^2 = 0.3 dies in finite time
state = InitialBellState.from_beta_sq("psi", 0.3)
print("death time of the even state:", esd_time(state, params))

# thresholds shrink as the atom moves deeper into the gap
for delta in (1.0, -1.0, -4.0):
    print(f"delta={delta:+g}: dies for beta^2 below {esd_beta_threshold(ReservoirParams.scaled(delta)):.4f}")

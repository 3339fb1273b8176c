"""
Excited-state amplitude near a band edge
========================================

The closed-form amplitude decays to zero when the atomic frequency sits
above the band edge and freezes at a finite plateau when it sits inside
the gap. Times are alpha^2 t throughout.
"""

import numpy as np

from pbgent import ReservoirParams, amplitude_c, plateau_amplitude

t = np.linspace(0.0, 15.0, 7)

# one row per detuning, in units of alpha^2
for delta in (1.0, 0.25, -1.0, -4.0):
    params = ReservoirParams.scaled(delta)
    c_abs = np.abs(amplitude_c(t, params))
    row = " ".join(f"{v:6.3f}" for v in c_abs)
    print(f"delta={delta:+5.2f}  |c| = {row}  plateau {plateau_amplitude(params):.4f}")

# physical inputs give alpha^2 and the detuning directly
from pbgent import PhysicalParams, alpha_from_physical

phys = alpha_from_physical(PhysicalParams(omega0=2.0, omega_c=1.5, A=0.3, d=0.1, epsilon0=1.0))
print("alpha^2 =", phys.alpha_sq, " delta/alpha^2 =", phys.delta_over_alpha_sq)

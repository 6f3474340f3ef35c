"""Physical constants (CODATA 2018), SI units.

Single source of truth for every dimensional constant in the package; do not
shadow these locally.
"""

HBAR = 1.054571817e-34   # reduced Planck constant, J s
K_B = 1.380649e-23       # Boltzmann constant, J/K (exact)
C_LIGHT = 299792458.0    # vacuum light speed, m/s (exact)

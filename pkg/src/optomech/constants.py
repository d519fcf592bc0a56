"""Physical constants (SI units)."""

C_LIGHT = 299_792_458.0  # m/s, exact
HBAR = 1.054571817e-34   # J*s

"""Inverse squeezing coefficient against the squeezing strength.

For strong squeezing the inverse coefficient saturates at the number of
squeezed modes: 2 for the two-mode state and 3 for the three-mode state. The
same table is available as CSV from ``mmsqueeze sweep``.
"""

import numpy as np

from mmsqueeze import named_state, xi_squared

print(f"{'r':>5} {'1/xi2 two-mode':>16} {'1/xi2 three-mode':>18}")
for r in np.arange(0, 2.01, 0.25):
    inv2 = 1 / xi_squared(named_state("tms2", r)).xi_squared
    inv3 = 1 / xi_squared(named_state("tms3", r)).xi_squared
    print(f"{r:5.2f} {inv2:16.9f} {inv3:18.9f}")

r = 5.0
print(f"\nat r = {r}: two-mode {1 / xi_squared(named_state('tms2', r)).xi_squared:.6f},"
      f" three-mode {1 / xi_squared(named_state('tms3', r)).xi_squared:.6f}")

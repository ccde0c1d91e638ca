#!/usr/bin/env python3
"""A walk through the torus geometry layer.

Builds the metric and frame fields of a ring torus, checks the frame
identity, compares the closed-form Christoffel symbols against a
finite-difference Levi-Civita evaluation, and prints the two spin-connection
conventions side by side (they differ; the operator layer takes the
tabulated one as its default input and this script shows by how much).
"""

import numpy as np

from torusdirac import (
    TorusParams,
    christoffel_at,
    christoffel_fd_oracle,
    metric_at,
    spin_connection_derived,
    spin_connection_tabulated,
    vierbein_at,
)
from torusdirac.geometry import ETA

p = TorusParams(a=0.5, c=2.0)
print(f"torus: tube radius a={p.a}, center radius c={p.c}")

print("\nframe identity g = e.eta.e^T, sampled around the tube:")
worst = 0.0
for x in np.linspace(0, 2 * np.pi, 360):
    e = vierbein_at(p, x)
    worst = max(worst, np.max(np.abs(metric_at(p, x) - e @ ETA @ e.T)))
print(f"  max deviation over 360 angles: {worst:.3e}")

print("\nChristoffel symbols at x = 1.0 (closed form vs FD oracle):")
exact = christoffel_at(p, 1.0)
for h in (1e-2, 1e-3, 1e-4):
    orc = christoffel_fd_oracle(p, 1.0, h)
    err = max(abs(orc.gamma_2_12 - exact.gamma_2_12),
              abs(orc.gamma_1_22 - exact.gamma_1_22))
    print(f"  h={h:7.0e}: oracle error {err:.3e}")

print("\nspin connection, two conventions:")
print(f"  {'x':>6} {'tabulated':>12} {'frame formula':>14}")
for x in (0.0, np.pi / 4, np.pi / 2, np.pi):
    print(f"  {x:6.3f} {spin_connection_tabulated(p, x):12.6f} "
          f"{spin_connection_derived(p, x):14.6f}")
print("  the tabulated coefficient carries an extra a*R(x) factor relative")
print("  to the frame computation; downstream operators use the tabulated")
print("  form so that every closed form in the chain stays reproducible.")

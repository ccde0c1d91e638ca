#!/usr/bin/env python3
"""Superpotential factorization and the radius constraint.

The constant-velocity chain factorizes its symmetrized Hamiltonian through
a trigonometric superpotential.  Demanding that the factorized potential
coincide with the ring-field form ties the field amplitude and the center
radius to the tube radius; this script reproduces those constants, checks
the factorization identities pointwise, and runs the intertwining
certifier on the factorized pair.
"""

import warnings

import numpy as np

from torusdirac import TorusParams
from torusdirac.fields import hermitizing_quadratic_field
from torusdirac.grids import Grid, compact_test_functions
from torusdirac.pseudoherm import (
    AdjointOf,
    ComposedOp,
    hermitian_counterpart_case1,
    intertwining_residual,
    mathieu_form,
    partner_potentials_case1,
    sqrt_am1,
    superpotential_case1,
)

warnings.filterwarnings("ignore", message="c <= a")

for a in (0.5, 0.9):
    g = Grid(4096)
    w = superpotential_case1(TorusParams(a=a, c=2.0), g)
    print(f"a = {a}: branch {w.meta['branch']}, "
          f"c = {np.real(w.meta['c']):.6f}, C2 = {w.meta['C2']:.6f}")

a = 0.9
g = Grid(10000)
x = g.points
s = sqrt_am1(a)
w_vals = -1j * s / a * np.sin(x) + 1j * (a - 2) / (2 * a)
w_prime = -1j * s / a * np.cos(x)
v, v1 = partner_potentials_case1(TorusParams(a=a, c=2.0), g)
print(f"\nfactorization identities on {g.n} points:")
print(f"  |W^2 - W' - V |_max = {np.max(np.abs(w_vals**2 - w_prime - v.v)):.3e}")
print(f"  |W^2 + W' - V1|_max = {np.max(np.abs(w_vals**2 + w_prime - v1.v)):.3e}")

# under the constrained radius the ring-field potential equals the
# factorized one exactly
w_op = superpotential_case1(TorusParams(a=a, c=2.0), g)
c_con = float(np.real(w_op.meta["c"]))
p_con = TorusParams(a=a, c=c_con)
field = hermitizing_quadratic_field(C2=w_op.meta["C2"], e=1.0, k=2)
counter = hermitian_counterpart_case1(p_con, field, 2, 1.0, g)
v_con, _ = partner_potentials_case1(p_con, g)
print(f"\nconstrained ring (c = {c_con:.4f}):")
print(f"  |counterpart - factorized V|_max = {np.max(np.abs(counter.v - v_con.v)):.3e}")
poly = mathieu_form(p_con, 1.0, w_op.meta["C2"]).potential(x)
print(f"  |counterpart - trig polynomial|_max = {np.max(np.abs(counter.v - poly)):.3e}")

g2 = Grid(2048)
w2 = superpotential_case1(TorusParams(a=a, c=2.0), g2)
h = ComposedOp((AdjointOf(w2), w2))
h_partner = ComposedOp((w2, AdjointOf(w2)))
phis = compact_test_functions(g2, [3, 4, 6], rng=5, n_functions=4)
res = intertwining_residual(w2, h, h_partner, phis)
print(f"\nintertwining residual of the factorized pair: {res:.3e}")
print("(exact by associativity at the discrete level; perturbing the")
print(" superpotential by 1% raises it by many orders of magnitude)")

"""
Lagrangians and conservation laws
=================================

Both equations come from a Lagrangian.  Noether's theorem then turns the
variational symmetries into conservation laws D_u P1 + D_v P2 = Q * Delta,
which hold identically on jets.
"""

import numpy as np

from titeica import pde, solutions as sol, symmetry as sym, variational as var

rng = np.random.default_rng(3)
w = var.random_jet(rng, 2)

# %% Euler-Lagrange expressions reproduce the equations.
c = pde.jet_coordinates(w)
print(f"E(L1) - Delta_L = {var.euler_lagrange(var.L1, w) - pde.LIOUVILLE_OMEGA.delta(*c):.1e}")
print(f"E(L2) - Delta_T = {var.euler_lagrange(var.L2, w) - pde.TITEICA_OMEGA.delta(*c):.1e}")

# %% Which symmetries are variational?
for X in sym.catalog("W40"):
    print(f"{X.name} with L1: defect {var.variational_defect(X, var.L1, w):.1e}")
W = sym.liouville_field(sol.Curve(lambda t: t * t), sol.Curve(lambda t: 0 * t))
print(f"f = u^2 field with L1: defect {var.variational_defect(W, var.L1, w):.3f}  (a symmetry, but not variational)")

# %% Tabulated laws, and the same laws rebuilt by Noether's construction.
for key, law in {**var.LIOUVILLE_LAWS, **var.TITEICA_LAWS}.items():
    X, L, kind = var.LAW_SOURCES[key]
    gen = var.noether_law(X, L)
    worst = max(abs(var.conservation_divergence_defect(law, kind, var.random_jet(rng, 2))) for _ in range(100))
    a = var._first_order_args(w)
    match = max(abs(f(*a) - g(*a)) for f, g in ((law.P1, gen.P1), (law.P2, gen.P2), (law.Q, gen.Q)))
    print(f"{key}: Div P - Q Delta {worst:.1e}, Noether mismatch {match:.1e}")

"""
Symmetries and the adjoint table
================================

The Titeica equation omega_uv = e^w - e^-2w is invariant under the
scaling U_1 and the translations U_2, U_3.  The Liouville equation
admits the infinite family generated by two arbitrary functions f(u), g(v).
"""

import numpy as np

from titeica import jets as J, pde, solutions as sol, symmetry as sym

U1, U2, U3 = sym.catalog("U28")
h = sol.titeica_sinh(0.0)

# %% Infinitesimal invariance on the sinh solution.
for X in (U1, U2, U3):
    d = [
        sym.invariance_defect(X, pde.TITEICA_OMEGA, J.log(h(J.seed_u(a, b, 3), J.seed_v(a, b, 3))))
        for a, b in [(0.5, 0.7), (1.0, 0.4), (1.3, 1.1)]
    ]
    print(f"{X.name}: max invariance defect {max(map(abs, d)):.2e}")

# %% A translation in w is not a symmetry.
w = J.log(h(J.seed_u(0.7, 0.4, 3), J.seed_v(0.7, 0.4, 3)))
dw = sym.VectorField3("d/dw", sym._const(0.0), sym._const(0.0), sym._const(1.0))
print(f"d/dw: defect {sym.invariance_defect(dw, pde.TITEICA_OMEGA, w):.4f}")

# %% Liouville: f = sin, g = t^3 on the exp preset.
W = sym.liouville_field(sol.Curve(J.sin), sol.Curve(lambda t: t**3))
lio = sol.liouville_general(*sol.LIOUVILLE_PRESETS["exp"]())
wj = J.log(lio(J.seed_u(0.2, -0.3, 3), J.seed_v(0.2, -0.3, 3)))
print(f"W(sin, t^3) on Liouville: {sym.invariance_defect(W, pde.LIOUVILLE_OMEGA, wj):.2e}")

# %% Brackets and the adjoint representation Ad(exp(eps U_i)) U_j.
print("[U_1, U_2] =", sym.decompose(sym.lie_bracket(U1, U2), [U1, U2, U3]))
eps = 0.5
tab = sym.adjoint_table([U1, U2, U3], eps)
for i in range(3):
    for j in range(3):
        c = " + ".join(f"{x:.4f} U_{k + 1}" for k, x in enumerate(tab[i, j]) if x != 0)
        print(f"  Ad(U_{i + 1}) U_{j + 1} = {c}")
print(f"deviation from closed form: {np.max(np.abs(tab - sym.adjoint_closed_form(eps))):.1e}")

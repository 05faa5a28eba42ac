"""Evaluating zeta on the critical line and locating its first zeros.

Run with ``python3 demos/01_zeta_and_zeros.py``.
"""

import numpy as np

from mml.zeta import ZetaEvalConfig, first_zeros, hardy_z, zeta_em

# Euler-Maclaurin works anywhere with Re s > -1
print("zeta(2)   =", zeta_em(2.0), " pi^2/6 =", np.pi**2 / 6)
print("zeta(1/2) =", zeta_em(0.5))

# Z(t) is real; the Riemann-Siegel path takes over from t = 30
t = np.linspace(30, 1000, 2000)
em = hardy_z(t, ZetaEvalConfig(method="euler_maclaurin"))
rs = hardy_z(t, ZetaEvalConfig(method="riemann_siegel"))
print("max |Z_EM - Z_RS| on [30, 1000]:", np.abs(em - rs).max())

# sign changes of Z mark zeros on the line
for k, g in enumerate(first_zeros(6), 1):
    print(f"gamma_{k} = {g:.12f}")

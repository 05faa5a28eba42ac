"""The kernels G_t, g_t and the integral J_t(x) computed three ways.

J_t(x) is a Mellin integral on Re w = 3.  Moving the line to Re w = 0 picks
up one residue at w = rho0 + 1/2 - it, where rho0 is a zero of zeta.  By the
Mellin convolution theorem it is also an integral over mollifier lengths y
against the kernel g_t(y/x), which vanishes for y > x.
"""

import numpy as np

from mml.kernels import (
    ContourConfig,
    KernelContext,
    g_kernel,
    g_series,
    g_sup_bound,
    jt_check,
    left_residues,
    residue_term,
    shifted_line_bound,
    shifted_line_integral,
)

ctx = KernelContext(t=5.0)  # rho0 defaults to the first zero 1/2 + 14.1347...i

u = np.array([0.1, 0.5, 0.9, 1.05, 2.0, 10.0])
# on Re w = 0 the contour tail only decays like Y^-2, so the tolerance is loose
loose = ContourConfig(height_Y=600.0, tail_tol=1e-5)
print("|g_t(u)| by contour:", np.abs(g_kernel(u, ctx, loose)))
print("|g_t(u)| by series: ", np.abs(g_series(u, ctx)))
print("recorded bound B on (0, 1]:", g_sup_bound(ctx))

for x in (2.0, 10.0, 100.0):
    rep = jt_check(x, ctx)
    print(f"x = {x:5.0f}: J = {complex(*rep['j_mellin']):.6e}, max relative spread {rep['max_rel_dev']:.1e}")

# the shifted-line integral is bounded but not constant in x: it equals the
# residues at w = -1 and w = -1 - it, of size x^-1 times a polynomial in log x
ctx0 = KernelContext(0.0)
for x in (10.0, 100.0, 1000.0, 1e4):
    s = shifted_line_integral(x, ctx0) if x <= 1000 else left_residues(x, ctx0)
    print(f"x = {x:6.0f}: |shifted| = {abs(s):.4e}, |residue term| = {abs(residue_term(x, ctx0)):.4e}")
print("uniform bound on |shifted|:", shifted_line_bound(ctx0))

"""The mollified second moment and its Levinson-type main term.

For the mollifier of length x = T^theta the integral

    I_x(0, T) = int_0^T |M_x(1/2 + it) zeta(1/2 + it)|^2 dt

should approach T (1 + 1/theta).  At desk scale the approach is slow: the
secondary terms are of relative size 1/log x, and x is tiny.
"""

from mml.config import ExperimentConfig
from mml.lab import run_levinson, run_meanvalue
from mml.moments import QuadratureConfig

cfg = ExperimentConfig(theta_list=(0.25, 0.4, 0.5), T_list=(500.0, 2000.0, 8000.0),
                       quadrature=QuadratureConfig(workers=4))
print(f"{'theta':>6} {'T':>6} {'x':>8} {'I/T':>8} {'target':>7} {'gap':>6}")
for r in run_levinson(cfg).rows:
    print(f"{r['theta']:6.2f} {r['T']:6.0f} {r['x']:8.2f} {r['I_over_T']:8.4f} {r['target']:7.3f} {r['rel_gap']:6.3f}")

# the unmollified moment against the classical T (log(T/2 pi) + 2 gamma - 1)
for r in run_meanvalue(ExperimentConfig(command="meanvalue", T_list=(500.0, 1000.0, 2000.0))).rows:
    print(f"T = {r['T']:6.0f}: int |zeta|^2 = {r['integral']:10.2f}, classical {r['classical']:10.2f}, "
          f"ratio to T log(T+2) = {r['ratio']:.3f}")

# a mollifier of length 1 is identically zero
# below x = 2 only n = 1 survives and M = 1, so I/T is the plain mean of |zeta|^2
r = run_levinson(ExperimentConfig(theta_list=(0.1,), T_list=(100.0,))).rows[0]
print(f"x = {r['x']:.3f}: I/T = {r['I_over_T']:.4f}")

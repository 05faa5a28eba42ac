"""Both sides of the lower-bound chain with beta0 = 1/2.

Pointwise in t, x^(2 beta0)/(1+|t|)^4 + 1/x is compared with the length
integral of |M_y|^2 log^2 y; integrated over t, the comparison is against
log^2 x times int_1^x I_y(T1, T2) dy.  Only bounded ratios are expected.
"""

from mml.config import ExperimentConfig
from mml.kernels import KernelContext, lower_bound_terms
from mml.lab import run_chain

for t in (0.0, 10.0):
    for x in (10.0, 100.0, 1000.0):
        lb = lower_bound_terms(x, t, KernelContext(t))
        print(f"t = {t:4.0f}, x = {x:6.0f}: lhs {lb.lhs_pointwise:.4e}  rhs {lb.rhs_pointwise:.4e}  ratio {lb.ratio:.3e}")

for window, T in (("from_zero", 200.0), ("dyadic", 100.0)):
    cfg = ExperimentConfig(command="chain", x_list=(10.0, 100.0, 1000.0), T_list=(T,), window=window)
    res = run_chain(cfg)
    for r in res.rows:
        print(f"({r['T1']:.0f}, {r['T2']:.0f}) x = {r['x']:6.0f}: ratio {r['ratio']:.3e}")
    print("max ratio:", res.summary["max_ratio"])

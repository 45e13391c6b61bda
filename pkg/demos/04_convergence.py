"""
Integration error against the number of points
==============================================

The error at N = 2^m should fall roughly like m^2 / 2^m.  A least-squares
fit of log error against log N gives an empirical rate close to 1.
"""

from triqmc import UNIT_TRIANGLE, basu_owen_pair, builtin, convergence_study, fit_rate, pascal_pair

for name in ("exp-sum", "cos-diff"):
    for gen in (basu_owen_pair(), pascal_pair()):
        rows = convergence_study(builtin(name), gen, UNIT_TRIANGLE, range(6, 17))
        print(f"{name} / {gen.kind}: fitted rate {fit_rate(rows):.3f}")
        for r in rows[::2]:
            print(f"   N={r.N:6d}  error={r.abs_error:.3e}  error*2^m/m^2={r.scaled_m2:.4f}")

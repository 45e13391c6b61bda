"""
Walsh coefficients of a smooth function decay like v / 4^v
==========================================================

Averaging f over every level-n cell gives a table indexed by F2^(n x 2).  Its
Walsh coefficients drive the integration error.  For a C^2 function they
shrink with the depth v(K) of the frequency K, and this script compares them
with the bound D * ||f|| * v / 4^v.
"""

import numpy as np

from triqmc import UNIT_TRIANGLE, builtin, discretize, verify_decay_bound, walsh_transform

f = builtin("exp-sum")
n = 5
F = discretize(f, UNIT_TRIANGLE, n)
print("mean of the table:", F.mean(), "(exact integral is 2)")

coeffs = walsh_transform(F)
v = np.array([(int(k).bit_length() + 1) // 2 for k in range(4**n)])
for depth in range(1, n + 1):
    print(f"v={depth}: largest |coefficient| {np.abs(coeffs[v == depth]).max():.3e}")

rep = verify_decay_bound(f, UNIT_TRIANGLE, n, table=F)
print(f"D={rep.D:.3f}, norm bound={rep.f_norm:.4f}, violations={rep.violations}, worst ratio={rep.max_ratio:.3f}")

"""
Two-set and r-set Douglas-Rachford operators
============================================

``two_set_dr(A, B)`` reflects into ``A``, then into ``B``, and averages
with the starting point. The order of the sets matters.
"""

import numpy as np

from drfeas import Halfspace, Hyperplane, apply, probe_fne, r_set_dr, two_set_dr

C1 = Halfspace([1.0], 1.0)    # (-inf, 1]
C2 = Halfspace([-1.0], 1.0)   # [-1, inf)

print(apply(two_set_dr(C1, C2), [5.0]))   # R1(5) = -3, R2(-3) = 1, mean 3
print(apply(two_set_dr(C2, C1), [5.0]))   # R2(5) = 5, R1(5) = -3, mean 1

# %%
# With the three coordinate planes of R^3 the composite reflection is -Id,
# so the r-set operator sends every point to the origin.

planes = [Hyperplane(e, 0.0) for e in np.eye(3)]
print(apply(r_set_dr(planes), [1.0, 2.0, 3.0]))

# %%
# Both kinds of operator are firmly nonexpansive. The probe reports the
# worst value of |Tx - Ty|^2 - <Tx - Ty, x - y> over sampled pairs.

rng = np.random.default_rng(0)
pairs = 3 * rng.normal(size=(1000, 2, 3))
print(probe_fne(r_set_dr(planes), pairs).max_violation)

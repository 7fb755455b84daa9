"""
String-averaging DR on a random polytope
========================================

Ten halfspaces in R^5 with a common interior point. Two strings of five
sets each; the iterate is the average of the two string end-points.
"""

import numpy as np

from drfeas import StringPlan, check_fejer, cyclic_dr, sa_dr
from drfeas.harness.generate import default_start, generate, parse_instance_spec

prob = generate(parse_instance_spec("polytope:5x10:slack=0.3", seed=1))
x0 = default_start(prob, seed=1)

plan = StringPlan.equal([(1, 2, 3, 4, 5), (6, 7, 8, 9, 10)])
rec = sa_dr(prob, plan, x0)
print(rec.stop_reason, rec.iterations, rec.residuals[-1])

# distance to the interior point never grows
print(check_fejer(rec))

# %%
# One string holding every set is cyclic DR.

single = sa_dr(prob, StringPlan.equal([tuple(range(1, 11))]), x0)
cyc = cyclic_dr(prob, x0)
print(np.array_equal(single.final, cyc.final))

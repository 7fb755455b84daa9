"""
Block-iterative DR when the intersection is a single point
==========================================================

Two lines through ``p`` in the plane; the intersection has empty interior.
In general only the projection of the DR limit onto the first set (the
"shadow") is guaranteed to lie in the intersection. For two lines the limit
is ``p`` itself, so both coincide here.
"""

import numpy as np

from drfeas import BlockPlan, StopConfig, bi_dr, project
from drfeas.harness.generate import default_start, generate, parse_instance_spec

prob = generate(parse_instance_spec("lines:2x2", seed=3))
p = prob.interior_point

cfg = StopConfig(residual_tol=np.finfo(float).tiny, step_tol=1e-12)
rec = bi_dr(prob, BlockPlan.equal([(1, 2)]), default_start(prob, 3), cfg)

y = rec.sweep_iterates[-1]
print("limit      ", y, " distance to p", np.linalg.norm(y - p))
print("shadow     ", project(prob.sets[0], y))
print("known point", p)

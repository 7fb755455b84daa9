"""
Projections and reflections
===========================

Every scheme in the package is built from two maps per set: the nearest
point projection ``P`` and the reflection ``R = 2P - Id``.
"""

import numpy as np

from drfeas import AffineSubspace, Ball, Box, Halfspace, Hyperplane, project, reflect

# a point outside all of the sets below
x = np.array([3.0, 4.0])

sets = {
    "halfspace x1 <= 1": Halfspace([1.0, 0.0], 1.0),
    "line x1 + x2 = 2": Hyperplane([1.0, 1.0], 2.0),
    "unit ball": Ball([0.0, 0.0], 1.0),
    "unit box": Box([0.0, 0.0], [1.0, 1.0]),
    "x1 - x2 = 0": AffineSubspace([[1.0, -1.0]], [0.0]),
}

for name, s in sets.items():
    print(f"{name:20s} P(x) = {project(s, x)}  R(x) = {reflect(s, x)}  "
          f"dist = {s.distance(x):.4f}")

# the reflection is an isometry through the set: P(x) is the midpoint of x and R(x)
s = sets["unit ball"]
print(np.allclose(0.5 * (x + reflect(s, x)), project(s, x)))

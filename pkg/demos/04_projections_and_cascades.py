"""Metric projections and the cascade rule.

Projections onto closed convex sets are 1-Lipschitz and are their own
pseudo-inverses once the set contains the origin. A whole cascade of
projections onto nested sets inverts to just the innermost projection.
"""

import numpy as np

from geninv import (Box, L2Ball, Halfspace, Intersection, project,
                    cascade_pinv, check_pseudo_inverse)

relu_set = Box(np.zeros(3), np.full(3, np.inf))
x = np.array([-1.0, 2.0, -0.3])
print("projecting onto the nonnegative orthant is entrywise ReLU:",
      project(relu_set, x))

C = Intersection([L2Ball(np.zeros(2), 1.5), Halfspace(np.array([0.0, 1.0]), 0.5)],
                 feasible_point=np.zeros(2))
p = project(C, np.array([2.0, 2.0]))
print("Dykstra projection onto ball-and-halfspace:", np.round(p, 6))

rng = np.random.default_rng(2)
kinds = [Box(np.full(2, -1.0), np.full(2, 1.0)), L2Ball(np.zeros(2), 1.2), C]
worst = 0.0
for S in kinds:
    X, Y = rng.normal(scale=3, size=(500, 2)), rng.normal(scale=3, size=(500, 2))
    d = np.linalg.norm(S.project_batch(X) - S.project_batch(Y), axis=1)
    worst = max(worst, float(np.max(d - np.linalg.norm(X - Y, axis=1))))
print("largest Lipschitz excess over 1500 random pairs: %.2e (never positive)"
      % worst)

sets = [Box(np.full(2, -2.0), np.full(2, 2.0)),
        L2Ball(np.zeros(2), 1.5),
        Box(np.full(2, -1.0), np.full(2, 1.0))]
res = cascade_pinv(sets)
w = np.array([1.8, -2.4])
print("\ncascade P_box1 . P_ball . P_box2 applied to", w, "->",
      np.round(res.cascade.apply(w), 6))
print("its pseudo-inverse is the innermost projection:",
      np.round(res.pseudo_inverse.apply(w), 6))
reports = check_pseudo_inverse(res.cascade, res.pseudo_inverse,
                               rng.normal(scale=1.5, size=(3, 2)),
                               [(-2.5, 2.5)] * 2, 0.05)
print("grid-oracle certificate on 3 random targets:",
      all(r.bas_ok and r.mp2_ok for r in reports))

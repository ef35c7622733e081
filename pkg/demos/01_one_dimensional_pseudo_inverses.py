"""Closed-form pseudo-inverses of one-dimensional operators.

Each named operator carries a closed form for its best-approximate
pseudo-inverse; the grid oracle recovers the same values by brute-force
search, including the points where the inverse is only defined after
snapping the target to the image.
"""

import numpy as np

from geninv import Scalar1DOperator, closed_form_pinv, grid_bas_oracle, \
    expanding_domain_pinv

rows = [
    (Scalar1DOperator("relu"), -3.0),
    (Scalar1DOperator("hard_threshold", a=2.0), 1.5),
    (Scalar1DOperator("soft_threshold", a=1.0), 2.0),
    (Scalar1DOperator("shifted_square", a=3.0), 4.0),
    (Scalar1DOperator("sign_eps", eps=0.5), 2.0),
    (Scalar1DOperator("sine"), 2.0),
]

print("closed forms vs the grid oracle (box [-10, 10] or the principal branch):")
for op, w in rows:
    cf = closed_form_pinv(op, w)
    box = [(-np.pi / 2, np.pi / 2)] if op.kind == "sine" else [(-10.0, 10.0)]
    best = grid_bas_oracle(op.as_vector_operator(), [w], box, 1e-3)
    print("  %-16s T_pinv(%5.2f) = %-10.6g oracle %-10.6g (residual %.3g)"
          % (op.kind, w, cf.value, best.v[0], best.residual))

print("\nthe squaring map keeps both signs --", end=" ")
sq = closed_form_pinv(Scalar1DOperator("square"), 4.0)
print("pinv(4) in {%g, %g}" % sq.values)

print("\nno nearest image point means no value at all:")
for op, w in [(Scalar1DOperator("exp"), -1.0), (Scalar1DOperator("tanh"), 1.0)]:
    print("  %-5s at w=%-4g -> defined=%s" % (op.kind, w,
                                              closed_form_pinv(op, w).defined))

print("\ngrowing-ball limits: exp stabilizes once the ball reaches log(w),")
print("while v/2 chases the boundary forever:")
res = expanding_domain_pinv(Scalar1DOperator("exp").as_vector_operator(),
                            [np.exp(2.0)], [1.0, 1.5, 2.0, 2.5, 3.0, 3.5],
                            stabilization_window=3, step=1e-3)
print("  exp, w=e^2: stabilized=%s at v=%.4f" % (res.stabilized, res.value[0]))
res = expanding_domain_pinv(Scalar1DOperator("linear", c=0.5).as_vector_operator(),
                            [10.0], [1, 2, 3, 4, 5], 3, 1e-3)
print("  v/2, w=10 : stabilized=%s, per-radius values %s"
      % (res.stabilized, [round(float(h[0]), 3) for h in res.history]))

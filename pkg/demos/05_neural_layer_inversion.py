"""Inverting a single neural layer sigma(A v) with full-rank wide A.

tanh layers invert through arctanh and the matrix pseudo-inverse; ReLU
layers clamp the target into the image and solve a least-norm quadratic
program whose inequalities keep the dead units dead.
"""

import numpy as np

from geninv import (NeuralLayer, tanh_layer_pinv, relu_layer_pinv,
                    clipped_tanh_layer_pinv, LeastNormQP, solve_least_norm_qp)

rng = np.random.default_rng(3)
A = rng.normal(size=(2, 4))
layer = NeuralLayer(A, "tanh")
w = np.array([0.9, -0.3])
v = tanh_layer_pinv(layer, w)
print("tanh layer, target", w)
print("  least-norm preimage v =", np.round(v, 6))
print("  forward check tanh(Av) =", np.round(np.tanh(A @ v), 6))
print("  targets touching +-1 have no inverse:",
      tanh_layer_pinv(layer, np.array([1.0, 0.0])))

for k in (4, 32, 256):
    clipped = NeuralLayer(A, "tanh", clip=k)
    vk = clipped_tanh_layer_pinv(clipped, w)
    print("  clipped to [%.3f, %.3f]: |v_k - v| = %.2e"
          % (-1 + 1 / k, 1 - 1 / k, np.linalg.norm(vk - v)))

relu = NeuralLayer(np.eye(2), "relu")
print("\nReLU layer with identity weights, target (3, -1):")
print("  inverse =", relu_layer_pinv(relu, np.array([3.0, -1.0])),
      "(negative component clamps to 0, then stays nonpositive)")

qp = LeastNormQP(np.array([[1.0, 0.0]]), np.array([1.0]),
                 np.array([[0.0, 1.0]]), np.array([-1.0]))
out = solve_least_norm_qp(qp)
print("\nthe underlying solver on min ||v||^2 s.t. v1 = 1, v2 <= -1:")
print("  v* =", out.v, " active inequalities:", out.active,
      " KKT residuals:", {k: float("%.1e" % x) for k, x in out.kkt.items()})

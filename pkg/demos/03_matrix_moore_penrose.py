"""The classical matrix Moore-Penrose inverse as the linear baseline.

The idempotent matrix E = [[0,0],[1,1]] separates the set-level picture
from the metric one: E is a {1,2}-inverse of itself, yet its MP inverse
is a different matrix.
"""

import numpy as np

from geninv import mp_inverse, mp_residuals, svd

E = np.array([[0.0, 0.0], [1.0, 1.0]])
Edag = mp_inverse(E)
print("E =\n", E)
print("its Moore-Penrose inverse =\n", Edag)
print("E is idempotent (E@E == E):", np.allclose(E @ E, E))
print("E itself passes MP1/MP2 but not MP3/MP4:",
      {k: round(v, 12) for k, v in mp_residuals(E, E).items()})
print("the MP inverse passes all four:",
      {k: round(v, 12) for k, v in mp_residuals(E, Edag).items()})

rng = np.random.default_rng(1)
A = rng.normal(size=(4, 7))
G = mp_inverse(A)
print("\nrandom 4x7 matrix: max MP residual %.2e, involution error %.2e"
      % (max(mp_residuals(A, G).values()),
         np.linalg.norm(mp_inverse(G) - A)))

f = svd(np.array([[0.0, 0.0], [1.0, 1.0]]))
print("\nsingular values of E:", np.round(f.S, 12), "(sqrt(2) and 0)")

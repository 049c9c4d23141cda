"""
Gaussian models on transitive DAGs
==================================

The fork 1 <- 3 -> 2 and the collider 1 -> 3 <- 2 are both transitive, so
their structural equation models are Gaussian group models. The MLE exists
exactly when no variable's samples are a linear combination of its
parents' samples.
"""

from fractions import Fraction

import numpy as np

from orbitmle import Dag, mle_exists, mle_tdag, mlt_tdag, null_cone_zariski_closed, unshielded_colliders

fork = Dag(edges=[(3, 1), (3, 2)])
collider = Dag(edges=[(1, 3), (2, 3)])

for name, g in [("fork", fork), ("collider", collider)]:
    print(f"{name}: mlt = {mlt_tdag(g)}, colliders = {unshielded_colliders(g)}, "
          f"closed null cone = {null_cone_zariski_closed(g, mlt_tdag(g))}")

# Two samples on the collider. Node 3's row is not in the span of its parents'
# rows, even though the parents' rows coincide, so the MLE exists.
Y = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
print("\ncollider data:", mle_exists(collider, Y))
fit = mle_tdag(collider, Y)
print("Psi =\n", fit.Psi)

# The same check in exact arithmetic. Node 1 is exactly a third of node 3.
Yq = [[Fraction(1, 3), Fraction(2, 3)], [1, 5], [1, 2]]
print("\nfork data, exact:", mle_exists(fork, Yq, exact=True))

# With two samples the fork model forces psi_12 = 0.
fit = mle_tdag(fork, np.random.default_rng(1).standard_normal((3, 2)))
print("fork Psi =\n", np.round(fit.Psi, 6))

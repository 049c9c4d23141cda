"""
Flip-flop scaling and stability of 2 x 2 matrix tuples
======================================================

Four small tuples cover every outcome of the classifier: a stable tuple
with a unique MLE, a polystable tuple whose MLE is unique even though the
stabilizer is positive dimensional, a semistable tuple whose likelihood
is bounded but never attains its supremum, and an unstable tuple.
"""

import numpy as np

from orbitmle import FlipFlopConfig, classify, flip_flop, lambda_star

I2 = np.eye(2)
R = np.array([[0.0, -1.0], [1.0, 0.0]])  # rotation by 90 degrees
S = np.array([[0.0, 1.0], [1.0, 0.0]])  # swap
N = np.array([[0.0, 1.0], [0.0, 0.0]])  # nilpotent

tuples = {
    "(I, R, S)": [I2, R, S],
    "(I, R)": [I2, R],
    "(I, N)": [I2, N],
    "(N, N)": [N, N],
}

print(f"{'tuple':10s} {'class':24s} {'capacity':>10s} {'stab dim':>8s} {'iters':>6s}")
for name, Y in tuples.items():
    rep = classify(np.stack(Y))
    print(f"{name:10s} {rep.classification.value:24s} {rep.capacity_estimate:10.6f} "
          f"{rep.stabilizer_dim:8d} {rep.iterations:6d}")

# For a polystable tuple the MLE is lambda times the determinant-one part,
# with lambda = dim * n / capacity.
rep = classify(np.stack([I2, R]))
lam, value = lambda_star(rep.capacity_estimate, dim=4, n=2)
print("\n(I, R): lambda* =", lam, " sup log-likelihood =", -value)
print("Psi1 (x) Psi2 =\n", rep.mle.kron())

# The semistable tuple: the capacity estimate creeps towards 2 while the
# factors' condition numbers grow without bound.
print("\n(I, N): capacity estimate and log condition number against iteration count")
for k in (10, 100, 1000, 4000):
    rep = flip_flop(np.stack([I2, N]), FlipFlopConfig(max_iter=k))
    print(f"  {k:5d}  {rep.capacity_estimate:.6f}  {rep.log_condition:6.2f}  {rep.classification.value}")

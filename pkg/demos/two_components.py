"""
A capacity attained on only one component
==========================================

Take the nonzero multiples of diag(M, S1 M S1^-1, S2 M S2^-1) with M
orthogonal. Its elements of determinant +1 and -1 form two separate pieces,
one for rotations M and one for reflections. For the data below the
squared norm on each piece is a binary quadratic form on the unit circle.
The two minima differ, so the infimum over the group is reached only on
the rotation piece; searching the other piece alone would miss it.
"""

import numpy as np
from scipy.linalg import block_diag

from orbitmle.core import circle_quadratic_min, quadratic_form_from_function

S1 = np.array([[1.0, 2.0], [2.0, 1.0]])
S2 = np.diag([1.0, 2.0])
r5 = np.sqrt(5.0)
Y = np.zeros((6, 4))
Y[2, 0], Y[3, 1], Y[4, 3] = 2.0, 2.0 * np.sqrt(2.0), 2.0 * r5
Y[5, 2], Y[5, 3] = 6.0 * r5 / 5.0, 8.0 * r5 / 5.0


def norm_sq(M):
    g = block_diag(M, S1 @ M @ np.linalg.inv(S1), S2 @ M @ np.linalg.inv(S2))
    return float(np.sum((g @ Y) ** 2)) / 4.0


rot = quadratic_form_from_function(lambda a, b: norm_sq(np.array([[a, b], [-b, a]])))
ref = quadratic_form_from_function(lambda a, b: norm_sq(np.array([[-a, -b], [-b, a]])))
print("rotation form:\n", rot, "\nminimum", circle_quadratic_min(rot))
print("reflection form:\n", ref, "\nminimum", circle_quadratic_min(ref))

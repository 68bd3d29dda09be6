"""
Plain PCA as a norm minimization
================================

Minimizing tr(S Q) over positive definite Q with det Q = 1 has the closed
form Q0 = det(S)^(1/p) S^-1 with value p det(S)^(1/p).  Check it against a
generic Riemannian descent, then recover the overall scale lambda.
"""

import numpy as np

from quiver_mle import lambda_scale, minimize_trace_det_one, pca_closed_form

rng = np.random.default_rng(0)
p, n = 4, 30
X = rng.standard_normal((p, n)) * np.array([[3.0], [1.0], [0.5], [0.2]])
S = X @ X.T

Q0 = pca_closed_form(S)
Q, value = minimize_trace_det_one(S)
print("det Q0           :", np.linalg.det(Q0))
print("closed-form value:", p * np.linalg.det(S) ** (1 / p))
print("descent value    :", value)
print("max |Q - Q0|     :", np.abs(Q - Q0).max())

# the MLE of the precision matrix is lambda * Q0 with lambda = p n / m,
# m the minimal value; it matches the usual inverse sample covariance
m = value
lam = lambda_scale(m, n, p)
print("\nlambda =", lam)
print("lambda * Q0 vs (S/n)^-1, max diff:", np.abs(lam * Q0 - np.linalg.inv(S / n)).max())

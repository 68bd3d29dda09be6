"""
Exhaustive oracle versus the fast engine
========================================

The oracle enumerates generic subdimension vectors and is exponential in
the entries.  The fast engine resolves pairs of roots with a two-vertex
local model.  They must agree; here we time both and then push the fast
engine to sizes the oracle cannot touch.
"""

import time

from quiver_mle import Quiver, dw_decomposition, generic_decomposition
from quiver_mle.oracle import clear_caches

cases = [
    (Quiver.star(3), (6, 4, 4, 3)),
    (Quiver.star(4), (4, 4, 4, 4, 4)),
    (Quiver.kronecker(3), (6, 5)),
    (Quiver(3, ((0, 1), (1, 2), (0, 2), (0, 2))), (4, 5, 6)),
]

for q, alpha in cases:
    clear_caches()
    t0 = time.perf_counter()
    slow = generic_decomposition(q, alpha)
    t1 = time.perf_counter()
    fast = dw_decomposition(q, alpha)
    t2 = time.perf_counter()
    print(f"{list(alpha)} on arrows {q.arrows}")
    print(f"   oracle {t1 - t0:7.3f}s  fast {t2 - t1:7.4f}s  agree={slow == fast}")
    print(f"   {fast}")

# the fast engine alone, on a big star instance
q = Quiver.star(6)
alpha = (120, 90, 40, 35, 20, 10, 5)
t0 = time.perf_counter()
d = dw_decomposition(q, alpha)
print(f"\n{list(alpha)} -> {d}   ({time.perf_counter() - t0:.3f}s)")

# Kronecker quivers: real roots on either side of the imaginary cone
k3 = Quiver.kronecker(3)
for alpha in [(1, 3), (3, 8), (4, 11), (5, 5), (2, 7)]:
    print("K3", alpha, "->", dw_decomposition(k3, alpha))

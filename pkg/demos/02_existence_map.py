"""
Where does the MLE exist?
=========================

For two feature groups the verdict depends on (n, p1, p2).  Print one
table per n: rows are p1, columns are p2; '#' marks a stable (unique)
MLE, '+' a polystable one and '.' no MLE.
"""

from quiver_mle import IpcaInstance, Stability, mle_verdict

MARK = {Stability.STABLE_UNIQUE: "#", Stability.POLYSTABLE: "+", Stability.NONE: "."}
P_MAX = 10

for n in range(1, 7):
    print(f"n = {n}")
    print("      " + " ".join(f"{p2:2d}" for p2 in range(1, P_MAX + 1)))
    for p1 in range(1, P_MAX + 1):
        row = [MARK[mle_verdict(IpcaInstance(n, (p1, p2))).stability] for p2 in range(1, P_MAX + 1)]
        print(f"  {p1:2d}  " + "  ".join(row))
    print()

# one group only: the MLE exists exactly on the diagonal n == p
print("k = 1:", [(n, p) for n in range(1, 9) for p in range(1, 9)
                 if mle_verdict(IpcaInstance(n, (p,))).exists])

"""Test-side reference computations that do not go through the package's recursion.

Generic hom and ext are measured directly: draw random representations
with entries in GF(P) and compute dim Hom as the nullity of the linear
system ``W_a f_t = f_h V_a`` over all arrows.  For a large prime the random
representations are generic with overwhelming probability.
"""

from __future__ import annotations

import random

import numpy as np

from quiver_mle import Quiver

P = 2_147_483_647  # 2^31 - 1; products of two residues fit in int64


def rank_mod_p(A: np.ndarray) -> int:
    A = np.array(A, dtype=np.int64) % P
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), P - 2, P)) % P
        f = A[:, c].copy()
        f[r] = 0
        A = (A - np.outer(f, A[r]) % P) % P
        r += 1
    return r


def random_rep(q: Quiver, dim, rng: np.random.Generator) -> list[np.ndarray]:
    return [rng.integers(0, P, size=(dim[h], dim[t]), dtype=np.int64) for t, h in q.arrows]


def hom_dim(q: Quiver, a, b, V, W) -> int:
    """dim Hom(V, W) for explicit representations of dimension ``a`` and ``b``."""
    offsets = np.cumsum([0] + [a[v] * b[v] for v in range(q.vertex_count)])
    unknowns = int(offsets[-1])
    if unknowns == 0:
        return 0

    def idx(v, r, c):  # entry (r, c) of f_v, a b[v] x a[v] matrix
        return offsets[v] + r * a[v] + c

    rows = []
    for (t, h), Va, Wa in zip(q.arrows, V, W):
        for r in range(b[h]):
            for c in range(a[t]):
                row = np.zeros(unknowns, dtype=np.int64)
                for s in range(b[t]):
                    row[idx(t, s, c)] += Wa[r, s]
                for s in range(a[h]):
                    row[idx(h, r, s)] -= Va[s, c]
                rows.append(row % P)
    if not rows:
        return unknowns
    return unknowns - rank_mod_p(np.array(rows))


def numeric_hom(q: Quiver, a, b, seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    return hom_dim(q, a, b, random_rep(q, a, rng), random_rep(q, b, rng))


def numeric_ext(q: Quiver, a, b, seed: int = 0) -> int:
    form = sum(x * y for x, y in zip(a, b)) - sum(a[t] * b[h] for t, h in q.arrows)
    return numeric_hom(q, a, b, seed) - form


def numeric_endo(q: Quiver, beta, seed: int = 0) -> int:
    """dim End of one random representation; 1 exactly for Schur roots."""
    V = random_rep(q, beta, np.random.default_rng(seed))
    return hom_dim(q, beta, beta, V, V)


def euler_reference(q: Quiver, a, b) -> int:
    """Literal double sum over vertices and over the arrow list, in Python ints."""
    total = 0
    for v in range(q.vertex_count):
        total += int(a[v]) * int(b[v])
    for t, h in q.arrows:
        total -= int(a[t]) * int(b[h])
    return total


def random_quiver(rng: random.Random, max_vertices: int = 6, max_arrows: int = 3) -> Quiver:
    """Random acyclic quiver; arrows go forward in a hidden random vertex order."""
    n = rng.randint(2, max_vertices)
    perm = list(range(n))
    rng.shuffle(perm)
    arrows = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                arrows += [(perm[i], perm[j])] * rng.randint(1, max_arrows)
    if not arrows:
        arrows = [(perm[0], perm[1])]
    return Quiver(n, tuple(arrows))


def random_dim(rng: random.Random, q: Quiver, max_entry: int, max_cost: int | None = None):
    from quiver_mle.oracle import oracle_cost

    while True:
        alpha = tuple(rng.randint(0, max_entry) for _ in range(q.vertex_count))
        if any(alpha) and (max_cost is None or oracle_cost(alpha) <= max_cost):
            return alpha

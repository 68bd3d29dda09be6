"""Exact generic subrepresentation / ext / decomposition computations.

Everything here follows Schofield's recursion on dimension vectors:

* ``sub`` is a generic subdimension of ``alpha`` iff ``ext(sub, alpha - sub) == 0``;
* ``ext(a, b) = max(-<a', b>)`` over generic subdimensions ``a'`` of ``a``.

The two statements call each other on vectors of strictly smaller total
mass, so the recursion terminates.  Cost is exponential in the entries
(every ``s <= alpha`` is visited), which is fine for the sizes used to
check the fast engine but not for sweeps; see :mod:`quiver_mle.dw`.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import threading
from collections import Counter, OrderedDict
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .quiver import (
    DimVector,
    Quiver,
    QuiverError,
    as_dim_vector,
    as_weight,
    euler_form,
    weight_apply,
)

CACHE_CAP_ENV = "QUIVER_MLE_CACHE_CAP"
DEFAULT_CACHE_CAP = 1 << 20


def _default_cap() -> int | None:
    raw = os.environ.get(CACHE_CAP_ENV)
    if raw is None or raw == "":
        return DEFAULT_CACHE_CAP
    cap = int(raw)
    return cap if cap > 0 else None


def oracle_cost(alpha: Sequence[int]) -> int:
    """Number of (sub, vector) pairs the recursion may visit below ``alpha``."""
    return math.prod((x + 1) * (x + 2) // 2 for x in alpha)


class LRUCache:
    """Thread-safe bounded mapping; ``cap=None`` means unbounded."""

    def __init__(self, cap: int | None = DEFAULT_CACHE_CAP):
        self.cap = cap
        self._data: OrderedDict = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key, default=None):
        with self._lock:
            try:
                value = self._data[key]
            except KeyError:
                return default
            self._data.move_to_end(key)
            return value

    def put(self, key, value) -> None:
        with self._lock:
            self._data[key] = value
            self._data.move_to_end(key)
            if self.cap is not None:
                while len(self._data) > self.cap:
                    self._data.popitem(last=False)

    def __len__(self) -> int:
        return len(self._data)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


@dataclass(frozen=True)
class Decomposition:
    """Multiset of roots with multiplicities, canonically ordered.

    Summands are sorted by root in descending lexicographic order, so the
    decomposition of ``[5,4,3,1,1,1]`` on the 5-star reads
    ``[3,2,1,1,1,1] + 2 x [1,1,1,0,0,0]``.
    """

    summands: tuple[tuple[DimVector, int], ...]

    @classmethod
    def from_pairs(cls, pairs) -> "Decomposition":
        counts: Counter = Counter()
        for root, mult in pairs:
            if mult <= 0:
                raise QuiverError(f"multiplicity must be positive, got {mult}")
            counts[tuple(int(x) for x in root)] += int(mult)
        return cls(tuple(sorted(counts.items(), reverse=True)))

    @property
    def roots(self) -> list[DimVector]:
        return [r for r, _ in self.summands]

    @property
    def multiplicities(self) -> list[int]:
        return [m for _, m in self.summands]

    def total(self) -> DimVector:
        if not self.summands:
            return ()
        width = len(self.summands[0][0])
        return tuple(sum(m * r[i] for r, m in self.summands) for i in range(width))

    def __iter__(self) -> Iterator[tuple[DimVector, int]]:
        return iter(self.summands)

    def __len__(self) -> int:
        return len(self.summands)

    def to_json(self) -> list[dict]:
        return [{"root": list(r), "mult": m} for r, m in self.summands]

    def __str__(self) -> str:
        parts = [f"{m}x{list(r)}" if m > 1 else str(list(r)) for r, m in self.summands]
        return " + ".join(parts)


class GenericOracle:
    """Memoized Schofield recursion for one acyclic quiver."""

    def __init__(self, quiver: Quiver, cache_cap: int | None = DEFAULT_CACHE_CAP):
        quiver.require_acyclic()
        self.quiver = quiver
        self._E = quiver.euler_matrix
        self._subdims = LRUCache(cache_cap)
        self._ext = LRUCache(cache_cap)
        self._decomp = LRUCache(cache_cap)

    # -- subrepresentations -------------------------------------------------

    def subdims(self, alpha: DimVector) -> np.ndarray:
        """All generic subdimension vectors of ``alpha`` as rows (includes 0 and alpha).

        Rows are ordered by total mass, then lexicographically.
        """
        alpha = tuple(alpha)
        cached = self._subdims.get(alpha)
        if cached is not None:
            return cached[0]
        a = np.asarray(alpha, dtype=np.int64)
        cands = np.array(list(itertools.product(*(range(x + 1) for x in alpha))), dtype=np.int64)
        cands = cands[np.lexsort(cands.T[::-1])]
        cands = cands[np.argsort(cands.sum(axis=1), kind="stable")]
        rest = a - cands
        # ext(s, a-s) >= -<s, a-s>, so a negative pairing rules s out immediately
        pairing = np.einsum("ij,jk,ik->i", cands, self._E, rest)
        keep = np.zeros(len(cands), dtype=bool)
        for i in np.flatnonzero(pairing >= 0):
            s, r = cands[i], rest[i]
            if not s.any() or not r.any():
                keep[i] = True
            else:
                keep[i] = self.ext(tuple(s.tolist()), tuple(r.tolist())) == 0
        subs = cands[keep]
        self._subdims.put(alpha, (subs, subs @ self._E))
        return subs

    def _subdims_times_euler(self, alpha: DimVector) -> np.ndarray:
        cached = self._subdims.get(alpha)
        if cached is None:
            self.subdims(alpha)
            cached = self._subdims.get(alpha)
            if cached is None:  # evicted immediately by a tiny cache cap
                subs = self.subdims(alpha)
                return subs @ self._E
        return cached[1]

    def is_subdim(self, sub: DimVector, alpha: DimVector) -> bool:
        rest = tuple(x - y for x, y in zip(alpha, sub))
        if any(x < 0 for x in rest):
            raise QuiverError(f"{list(sub)} is not <= {list(alpha)}")
        if not any(sub) or not any(rest):
            return True
        return self.ext(tuple(sub), rest) == 0

    # -- ext / hom ----------------------------------------------------------

    def ext(self, a: DimVector, b: DimVector) -> int:
        if not any(a) or not any(b):
            return 0
        key = (a, b)
        value = self._ext.get(key)
        if value is None:
            scores = self._subdims_times_euler(a) @ np.asarray(b, dtype=np.int64)
            # the zero subdimension contributes 0, so the max is never negative
            value = int(-scores.min())
            self._ext.put(key, value)
        return value

    def hom(self, a: DimVector, b: DimVector) -> int:
        value = euler_form(self.quiver, a, b) + self.ext(a, b)
        assert value >= 0, f"negative hom({list(a)}, {list(b)}) = {value}"
        return value

    # -- decomposition ------------------------------------------------------

    def find_split(self, alpha: DimVector, rng: random.Random | None = None) -> DimVector | None:
        """First ``0 < s < alpha`` with mutual ext vanishing, or None if alpha is Schur."""
        subs = self.subdims(alpha)[1:-1]
        order = list(range(len(subs)))
        if rng is not None:
            rng.shuffle(order)
        for i in order:
            s = tuple(subs[i].tolist())
            rest = tuple(x - y for x, y in zip(alpha, s))
            if self.ext(rest, s) == 0:
                return s
        return None

    def decomposition(self, alpha: DimVector, rng: random.Random | None = None) -> Decomposition:
        alpha = tuple(alpha)
        if rng is None:
            cached = self._decomp.get(alpha)
            if cached is not None:
                return cached
        split = self.find_split(alpha, rng)
        if split is None:
            result = Decomposition(((alpha, 1),))
        else:
            rest = tuple(x - y for x, y in zip(alpha, split))
            left = self.decomposition(split, rng)
            right = self.decomposition(rest, rng)
            result = Decomposition.from_pairs(list(left) + list(right))
            for root, mult in result:
                if mult > 1:
                    assert euler_form(self.quiver, root, root) >= 0, (
                        f"anisotropic root {list(root)} with multiplicity {mult}"
                    )
        if rng is None:
            self._decomp.put(alpha, result)
        return result

    def sigma_stable(self, alpha: DimVector, sigma: Sequence[int]) -> bool:
        subs = self.subdims(alpha)[1:-1]
        if len(subs) == 0:
            return True
        return bool((subs @ np.asarray(sigma, dtype=np.int64) < 0).all())

    def cache_sizes(self) -> dict[str, int]:
        return {"subdims": len(self._subdims), "ext": len(self._ext), "decomposition": len(self._decomp)}


_ORACLES: dict[Quiver, GenericOracle] = {}
_ORACLES_LOCK = threading.Lock()


def oracle_for(q: Quiver) -> GenericOracle:
    """Shared per-process oracle for ``q`` (memo tables persist across calls)."""
    with _ORACLES_LOCK:
        oracle = _ORACLES.get(q)
        if oracle is None:
            oracle = GenericOracle(q, _default_cap())
            _ORACLES[q] = oracle
        return oracle


def clear_caches() -> None:
    with _ORACLES_LOCK:
        _ORACLES.clear()


def is_generic_subdim(q: Quiver, sub: Sequence[int], alpha: Sequence[int]) -> bool:
    sub = as_dim_vector(q, sub, "sub")
    alpha = as_dim_vector(q, alpha, "alpha")
    return oracle_for(q).is_subdim(sub, alpha)


def generic_ext(q: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    return oracle_for(q).ext(as_dim_vector(q, a, "a"), as_dim_vector(q, b, "b"))


def generic_hom(q: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    return oracle_for(q).hom(as_dim_vector(q, a, "a"), as_dim_vector(q, b, "b"))


def generic_decomposition(
    q: Quiver, alpha: Sequence[int], rng: random.Random | None = None
) -> Decomposition:
    """Generic decomposition by exhaustive splitting.

    Passing ``rng`` randomizes the split search order (and bypasses the
    decomposition memo); the canonical result must not change.
    """
    alpha = as_dim_vector(q, alpha, "alpha")
    if not any(alpha):
        raise QuiverError("cannot decompose the zero vector")
    return oracle_for(q).decomposition(alpha, rng)


def is_schur_root(q: Quiver, beta: Sequence[int]) -> bool:
    beta = as_dim_vector(q, beta, "beta")
    if not any(beta):
        raise QuiverError("the zero vector is not a root")
    return oracle_for(q).find_split(beta) is None


def generic_sigma_stable(q: Quiver, alpha: Sequence[int], sigma: Sequence[int]) -> bool:
    """True iff every proper nonzero generic subdimension has ``sigma < 0``."""
    alpha = as_dim_vector(q, alpha, "alpha")
    sigma = as_weight(q, sigma)
    if weight_apply(sigma, alpha) != 0:
        raise QuiverError(f"sigma(alpha) = {weight_apply(sigma, alpha)} != 0; stability undefined")
    return oracle_for(q).sigma_stable(alpha, sigma)

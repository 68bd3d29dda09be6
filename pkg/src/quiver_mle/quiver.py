"""Quivers, dimension vectors, weights and the Euler form.

Dimension vectors and weights are plain tuples of Python ints, so every
form evaluation is exact regardless of the size of the entries.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DimVector = tuple[int, ...]
Weight = tuple[int, ...]


class QuiverError(ValueError):
    """Invalid input for a quiver operation (bad shape, negative entry, ...)."""


class CyclicQuiverError(QuiverError):
    """Raised when an operation that needs a DAG receives a cyclic quiver."""


class NotARootError(QuiverError):
    """The vector has <b,b> > 1 and therefore cannot be a root."""

    def __init__(self, vector: DimVector, form_value: int):
        super().__init__(f"{list(vector)} has <b,b> = {form_value} > 1; not a root")
        self.vector = vector
        self.form_value = form_value


class RootClass(enum.Enum):
    REAL = "real"
    ISOTROPIC = "isotropic"
    IMAGINARY_ANISOTROPIC = "imaginary_anisotropic"


@dataclass(frozen=True)
class Quiver:
    """A finite quiver; parallel arrows are repeated ``(tail, head)`` pairs."""

    vertex_count: int
    arrows: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if not isinstance(self.vertex_count, (int, np.integer)) or self.vertex_count < 1:
            raise QuiverError(f"vertex_count must be a positive integer, got {self.vertex_count!r}")
        arrows = tuple((int(t), int(h)) for t, h in self.arrows)
        for t, h in arrows:
            if not (0 <= t < self.vertex_count and 0 <= h < self.vertex_count):
                raise QuiverError(f"arrow {t}->{h} out of range for {self.vertex_count} vertices")
            if t == h:
                raise QuiverError(f"loop at vertex {t} is not supported")
        object.__setattr__(self, "vertex_count", int(self.vertex_count))
        object.__setattr__(self, "arrows", arrows)

    @classmethod
    def star(cls, k: int) -> "Quiver":
        """Star quiver with arms ``j -> 0`` for ``j = 1..k``."""
        if k < 1:
            raise QuiverError(f"star quiver needs k >= 1, got {k}")
        return cls(k + 1, tuple((j, 0) for j in range(1, k + 1)))

    @classmethod
    def kronecker(cls, k: int) -> "Quiver":
        """k parallel arrows from vertex 0 (source) to vertex 1 (target)."""
        if k < 1:
            raise QuiverError(f"Kronecker quiver needs k >= 1, got {k}")
        return cls(2, ((0, 1),) * k)

    @classmethod
    def from_json(cls, data: str | dict) -> "Quiver":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(data["vertices"], tuple(tuple(a) for a in data["arrows"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, QuiverError):
                raise
            raise QuiverError(f"malformed quiver JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "arrows": [list(a) for a in self.arrows]}

    @cached_property
    def arrow_counts(self) -> np.ndarray:
        """``counts[t, h]`` is the number of arrows ``t -> h``."""
        counts = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int64)
        for t, h in self.arrows:
            counts[t, h] += 1
        return counts

    @cached_property
    def euler_matrix(self) -> np.ndarray:
        """Integer matrix E with ``<a, b> = a @ E @ b``."""
        return np.eye(self.vertex_count, dtype=np.int64) - self.arrow_counts

    @cached_property
    def topological_order(self) -> tuple[int, ...] | None:
        """Vertices ordered tails before heads, or None when there is a cycle."""
        indeg = [0] * self.vertex_count
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for t, h in self.arrows:
            indeg[h] += 1
            out[t].append(h)
        ready = [v for v in range(self.vertex_count) if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for h in out[v]:
                indeg[h] -= 1
                if indeg[h] == 0:
                    ready.append(h)
        if len(order) < self.vertex_count:
            return None
        return tuple(order)

    @property
    def is_acyclic(self) -> bool:
        return self.topological_order is not None

    def require_acyclic(self) -> None:
        if not self.is_acyclic:
            raise CyclicQuiverError("operation requires an acyclic quiver")


def as_dim_vector(q: Quiver, values: Iterable[int], name: str = "dimension vector") -> DimVector:
    vec = _as_int_tuple(values, name)
    if len(vec) != q.vertex_count:
        raise QuiverError(f"{name} has length {len(vec)}, quiver has {q.vertex_count} vertices")
    if any(x < 0 for x in vec):
        raise QuiverError(f"{name} {list(vec)} has negative entries")
    return vec


def as_weight(q: Quiver, values: Iterable[int]) -> Weight:
    vec = _as_int_tuple(values, "weight")
    if len(vec) != q.vertex_count:
        raise QuiverError(f"weight has length {len(vec)}, quiver has {q.vertex_count} vertices")
    return vec


def _as_int_tuple(values: Iterable[int], name: str) -> tuple[int, ...]:
    out = []
    for x in values:
        if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
            if isinstance(x, float) and x.is_integer():
                x = int(x)
            else:
                raise QuiverError(f"{name} entries must be integers, got {x!r}")
        out.append(int(x))
    return tuple(out)


def unit_vector(q: Quiver, v: int) -> DimVector:
    return tuple(int(i == v) for i in range(q.vertex_count))


def euler_form(q: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    """Exact value of ``sum_i a[i] b[i] - sum_arrows a[tail] b[head]``."""
    a = as_dim_vector(q, a, "a")
    b = as_dim_vector(q, b, "b")
    diagonal = sum(x * y for x, y in zip(a, b))
    return diagonal - sum(a[t] * b[h] for t, h in q.arrows)


def classify_root(q: Quiver, beta: Sequence[int]) -> RootClass:
    """Real / isotropic / anisotropic imaginary, from the sign of <b,b>.

    The caller is responsible for ``beta`` being a root; a vector with
    ``<b,b> > 1`` is reported with :class:`NotARootError`.
    """
    value = euler_form(q, beta, beta)
    if value == 1:
        return RootClass.REAL
    if value == 0:
        return RootClass.ISOTROPIC
    if value < 0:
        return RootClass.IMAGINARY_ANISOTROPIC
    raise NotARootError(tuple(beta), value)


def schofield_weight(q: Quiver, alpha: Sequence[int]) -> Weight:
    """Weight ``w`` with ``w . b = <alpha, b> - <b, alpha>`` for every ``b``.

    On the star quiver with ``alpha = [n, p_1, ..., p_k]`` this is
    ``[-p, n, ..., n]``.
    """
    alpha = as_dim_vector(q, alpha, "alpha")
    return tuple(
        euler_form(q, alpha, e) - euler_form(q, e, alpha)
        for e in (unit_vector(q, v) for v in range(q.vertex_count))
    )


def weight_apply(w: Sequence[int], beta: Sequence[int]) -> int:
    w = _as_int_tuple(w, "weight")
    beta = _as_int_tuple(beta, "dimension vector")
    if len(w) != len(beta):
        raise QuiverError(f"weight length {len(w)} != vector length {len(beta)}")
    return sum(x * y for x, y in zip(w, beta))

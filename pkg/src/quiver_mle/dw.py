"""Fast generic decomposition by local two-root resolution (Derksen-Weyman style).

The working state is an ordered list of Schur roots with multiplicities.
Starting from the simple roots (heads listed before tails), the loop keeps
the exceptional-sequence ordering

    for i < j:  hom(root_i, root_j) = 0  and  ext(root_i, root_j) = 0.

For such a pair at most one of ``hom(L, E)`` and ``ext(L, E)`` is nonzero
(``E`` earlier, ``L`` later), so the Euler form alone tells them apart:
``<L, E> < 0`` means ``ext(L, E) = -<L, E>``.  While some pair has
``<L, E> < 0`` the two entries are replaced by the generic decomposition of
``c_L * L + c_E * E`` computed on the ``k``-Kronecker quiver,
``k = -<L, E>``, with ``L`` as the source.  When no pair is left the list
is the generic decomposition.

Correctness is defined by agreement with :mod:`quiver_mle.oracle`; running
with ``debug=True`` re-verifies the ordering condition with oracle ext/hom
after every step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .oracle import Decomposition, GenericOracle, oracle_for
from .quiver import DimVector, Quiver, QuiverError, as_dim_vector

log = logging.getLogger(__name__)

DEFAULT_STEP_BUDGET = 10**6

Entry = tuple[DimVector, int]


class EngineError(RuntimeError):
    """Internal invariant breach or budget exhaustion; carries the working sequence."""

    def __init__(self, message: str, sequence: Sequence[Entry] = ()):
        super().__init__(message)
        self.sequence = list(sequence)


def kronecker_canonical(k: int, a: int, b: int) -> list[tuple[tuple[int, int], int]]:
    """Generic decomposition of ``(a, b)`` on the k-Kronecker quiver ``s => t``.

    Coordinates are ``(dim at source, dim at target)``; the Tits form is
    ``x^2 + y^2 - k x y``.  Summands come back in descending lexicographic
    order of the root.
    """
    if k < 1:
        raise QuiverError(f"k must be >= 1, got {k}")
    if a < 0 or b < 0 or (a, b) == (0, 0):
        raise QuiverError(f"invalid Kronecker dimension vector ({a}, {b})")

    if k == 1:
        m = min(a, b)
        out = [((1, 1), m), ((1, 0), a - b), ((0, 1), b - a)]
        return [(r, c) for r, c in out if c > 0]
    if k == 2 and a == b:
        return [((1, 1), a)]
    if a * a + b * b - k * a * b <= 0:
        return [((a, b), 1)]

    # real regime: (a, b) lies in the cone of two consecutive real Schur roots,
    # r_next = k r - r_prev, starting from either simple root
    for prev, cur in (((0, 1), (1, k)), ((1, 0), (k, 1))):
        while min(prev) <= a + b:
            det = prev[0] * cur[1] - prev[1] * cur[0]  # always -1 or 1
            u = (a * cur[1] - b * cur[0]) * det
            v = (prev[0] * b - prev[1] * a) * det
            if u >= 0 and v >= 0:
                return sorted(((r, m) for r, m in ((prev, u), (cur, v)) if m > 0), reverse=True)
            prev, cur = cur, (k * cur[0] - prev[0], k * cur[1] - prev[1])
    raise EngineError(f"no real-root cone found for ({a}, {b}) on K_{k}")


@dataclass
class WorkingSequence:
    quiver: Quiver
    entries: list[Entry] = field(default_factory=list)

    def form(self, u: DimVector, v: DimVector) -> int:
        diagonal = sum(x * y for x, y in zip(u, v))
        return diagonal - sum(u[t] * v[h] for t, h in self.quiver.arrows)

    def total(self) -> DimVector:
        n = self.quiver.vertex_count
        return tuple(sum(m * r[i] for r, m in self.entries) for i in range(n))

    def find_violation(self) -> tuple[int, int] | None:
        """Closest pair ``i < j`` with ``<root_j, root_i> < 0``, or None."""
        size = len(self.entries)
        for gap in range(1, size):
            for i in range(size - gap):
                j = i + gap
                if self.form(self.entries[j][0], self.entries[i][0]) < 0:
                    return i, j
        return None

    def bring_adjacent(self, i: int, j: int) -> int:
        """Reorder so entries ``i`` and ``j`` become neighbours; return the new left index.

        An entry may only hop over a neighbour it is orthogonal to in the
        hopping direction (``<hopper, other> == 0`` when moving left,
        ``<other, hopper> == 0`` when moving right); anything else would
        break the ordering condition.
        """
        roots = [r for r, _ in self.entries]
        if all(self.form(roots[j], roots[l]) == 0 for l in range(i + 1, j)):
            self.entries.insert(i + 1, self.entries.pop(j))
            return i
        if all(self.form(roots[l], roots[i]) == 0 for l in range(i + 1, j)):
            self.entries.insert(j - 1, self.entries.pop(i))
            return j - 1
        raise EngineError(f"cannot bring entries {i} and {j} together", self.entries)


def resolve_adjacent_pair(state: WorkingSequence, i: int) -> WorkingSequence:
    """Replace entries ``i, i+1`` by the local Kronecker decomposition.

    The later root has the extension into the earlier one and plays the
    Kronecker source.
    """
    (target, c_t), (source, c_s) = state.entries[i], state.entries[i + 1]
    k = -state.form(source, target)
    if k < 1:
        raise EngineError(f"pair at {i} has no extension to resolve", state.entries)
    if state.form(target, source) != 0:
        raise EngineError(f"pair at {i} is not orthogonal in sequence order", state.entries)

    def lift(x: int, y: int) -> DimVector:
        return tuple(x * s + y * t for s, t in zip(source, target))

    local = _local_decomposition(
        k, c_s, c_t, state.form(source, source) == 1, state.form(target, target) == 1
    )
    replacement = [(lift(x, y), m) for (x, y), m in local]
    if len(replacement) == 2:
        (r1, _), (r2, _) = replacement
        if state.form(r1, r2) != 0:
            replacement.reverse()
            if state.form(r2, r1) != 0:
                raise EngineError("local summands admit no exceptional order", state.entries)
    state.entries[i : i + 2] = replacement
    return state


def _local_decomposition(
    k: int, a: int, b: int, source_real: bool, target_real: bool
) -> list[tuple[tuple[int, int], int]]:
    """Generic decomposition of ``a * source + b * target`` in (source, target) coordinates.

    Two real roots behave like the k-Kronecker quiver.  An imaginary root
    behaves like a vertex carrying loops; it absorbs at most ``k`` copies
    of a real partner per copy of itself, and the surplus splits off.
    """
    if source_real and target_real:
        return kronecker_canonical(k, a, b)
    if source_real and a > k * b:
        return [((k, 1), b), ((1, 0), a - k * b)]
    if source_real and a == k * b:
        return [((k, 1), b)]
    if target_real and b > k * a:
        return [((1, k), a), ((0, 1), b - k * a)]
    if target_real and b == k * a:
        return [((1, k), a)]
    return [((a, b), 1)]


def _check_invariant(state: WorkingSequence, oracle: GenericOracle) -> None:
    entries = state.entries
    for i, (ri, _) in enumerate(entries):
        for j in range(i + 1, len(entries)):
            rj = entries[j][0]
            if oracle.ext(ri, rj) != 0 or oracle.hom(ri, rj) != 0:
                raise EngineError(
                    f"ordering condition broken between {list(ri)} and {list(rj)}", entries
                )


def dw_decomposition(
    q: Quiver,
    alpha: Sequence[int],
    *,
    debug: bool = False,
    step_budget: int = DEFAULT_STEP_BUDGET,
) -> Decomposition:
    """Generic decomposition of ``alpha`` via local pair resolution."""
    alpha = as_dim_vector(q, alpha, "alpha")
    q.require_acyclic()
    if not any(alpha):
        raise QuiverError("cannot decompose the zero vector")

    order = q.topological_order[::-1]  # heads before tails
    state = WorkingSequence(
        q, [(tuple(int(v == w) for w in range(q.vertex_count)), alpha[v]) for v in order if alpha[v]]
    )
    oracle = oracle_for(q) if debug else None
    if oracle is not None:
        _check_invariant(state, oracle)

    steps = 0
    while (pair := state.find_violation()) is not None:
        steps += 1
        if steps > step_budget:
            raise EngineError(f"step budget {step_budget} exhausted", state.entries)
        i = state.bring_adjacent(*pair)
        resolve_adjacent_pair(state, i)
        log.debug("step %d: %s", steps, state.entries)
        if state.total() != alpha:
            raise EngineError("mass not conserved", state.entries)
        if oracle is not None:
            _check_invariant(state, oracle)

    result = Decomposition.from_pairs(state.entries)
    for root, mult in result:
        if mult > 1 and state.form(root, root) < 0:
            raise EngineError(f"anisotropic root {list(root)} with multiplicity {mult}", state.entries)
    return result

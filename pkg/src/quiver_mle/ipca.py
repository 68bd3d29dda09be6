"""Generic MLE existence for integrated PCA via the star quiver.

An iPCA instance with ``n`` samples and feature groups ``p_1..p_k`` lives on
the star quiver ``Q_k`` (arms ``j -> 0``) with dimension vector
``alpha = [n, p_1, ..., p_k]`` and weight ``sigma = [-p, n, ..., n]``.  A
generic data matrix admits an MLE exactly when every summand ``beta`` of
the generic decomposition of ``alpha`` satisfies
``p * beta[0] == n * (beta[1] + ... + beta[k])``, equivalently when the
summands are pairwise orthogonal for the Euler form.  Both tests are run
and compared.

Uniqueness is reported from King stability of ``alpha`` itself and is
advisory: the scalar subgroup always stabilizes the data, so "finite
stabilizer" can only mean finite modulo scalars.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Sequence

from .dw import dw_decomposition
from .oracle import Decomposition, generic_decomposition, generic_sigma_stable, oracle_cost
from .quiver import (
    DimVector,
    NotARootError,
    Quiver,
    QuiverError,
    RootClass,
    as_dim_vector,
    classify_root,
    euler_form,
    weight_apply,
)

log = logging.getLogger(__name__)

ENGINES = ("oracle", "fast", "both")

# Above this oracle cost the exhaustive stability check is skipped for the
# fast engine; Schur roots are stable for their own Schofield weight, which
# is what sigma is on the star quiver.
STABILITY_ORACLE_LIMIT = 2_000_000


class EngineDisagreement(RuntimeError):
    def __init__(self, oracle: Decomposition, fast: Decomposition):
        super().__init__(f"engines disagree: oracle {oracle} vs fast {fast}")
        self.oracle = oracle
        self.fast = fast


class Stability(enum.Enum):
    STABLE_UNIQUE = "stable_unique"
    POLYSTABLE = "polystable"
    NONE = "none"


@dataclass(frozen=True)
class IpcaInstance:
    n: int
    groups: tuple[int, ...]

    def __post_init__(self):
        groups = tuple(self.groups)
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise QuiverError(f"n must be a positive integer, got {self.n!r}")
        if not groups:
            raise QuiverError("need at least one feature group")
        if any(isinstance(p, bool) or not isinstance(p, int) or p < 1 for p in groups):
            raise QuiverError(f"group sizes must be positive integers, got {list(groups)}")
        object.__setattr__(self, "groups", groups)

    @property
    def k(self) -> int:
        return len(self.groups)

    @property
    def p(self) -> int:
        return sum(self.groups)

    @property
    def alpha(self) -> DimVector:
        return (self.n, *self.groups)

    @property
    def sigma(self) -> tuple[int, ...]:
        return (-self.p, *([self.n] * self.k))

    @property
    def quiver(self) -> Quiver:
        return star_quiver(self.k)


def star_quiver(k: int) -> Quiver:
    return Quiver.star(k)


@dataclass(frozen=True)
class SummandReport:
    root: DimVector
    mult: int
    condition_c: bool
    lhs: int  # p * beta[0]
    rhs: int  # n * (beta[1] + ... + beta[k])
    sigma_value: int
    root_class: RootClass

    def to_json(self, inst: IpcaInstance) -> dict:
        return {
            "root": list(self.root),
            "mult": self.mult,
            "condition_c": self.condition_c,
            "check": f"{inst.p}*{self.root[0]} = {inst.n}*{sum(self.root[1:])}",
            "lhs": self.lhs,
            "rhs": self.rhs,
            "sigma_value": self.sigma_value,
            "root_class": self.root_class.value,
        }


@dataclass
class MleVerdict:
    instance: IpcaInstance
    exists: bool
    stability: Stability
    decomposition: Decomposition
    per_summand: list[SummandReport]
    condition_d: bool
    euler_matrix: list[list[int]]
    engine: str
    consistent: bool
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        inst = self.instance
        return {
            "n": inst.n,
            "groups": list(inst.groups),
            "exists": self.exists,
            "stability": self.stability.value,
            "advisory_uniqueness": True,
            "decomposition": self.decomposition.to_json(),
            "condition_c": [s.condition_c for s in self.per_summand],
            "condition_d": self.condition_d,
            "euler_matrix": self.euler_matrix,
            "engine": self.engine,
            "consistent": self.consistent,
            "alpha": list(inst.alpha),
            "sigma": list(inst.sigma),
            "summands": [s.to_json(inst) for s in self.per_summand],
            "diagnostics": list(self.diagnostics),
        }


def check_condition_c(inst: IpcaInstance, beta: Sequence[int]) -> bool:
    """``p * beta[0] == n * sum(beta[1:])``, cross-checked against ``sigma . beta == 0``."""
    beta = as_dim_vector(inst.quiver, beta, "beta")
    arithmetic = inst.p * beta[0] == inst.n * sum(beta[1:])
    vanishing = weight_apply(inst.sigma, beta) == 0
    assert arithmetic == vanishing, f"condition c paths disagree on {list(beta)}"
    return arithmetic


def check_condition_d(q: Quiver, decomposition: Decomposition) -> tuple[bool, list[list[int]]]:
    """Euler pairing matrix of the summands and whether its off-diagonal vanishes."""
    roots = decomposition.roots
    matrix = [[euler_form(q, a, b) for b in roots] for a in roots]
    ok = all(matrix[i][j] == 0 for i in range(len(roots)) for j in range(len(roots)) if i != j)
    return ok, matrix


def decompose(q: Quiver, alpha: Sequence[int], engine: str = "fast") -> Decomposition:
    """Generic decomposition with the chosen engine; ``both`` raises on disagreement."""
    if engine not in ENGINES:
        raise QuiverError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    if engine == "oracle":
        return generic_decomposition(q, alpha)
    fast = dw_decomposition(q, alpha)
    if engine == "both":
        oracle = generic_decomposition(q, alpha)
        if oracle != fast:
            raise EngineDisagreement(oracle, fast)
    return fast


def _root_class(q: Quiver, root: DimVector) -> RootClass:
    try:
        return classify_root(q, root)
    except NotARootError:
        # decomposition summands are roots; reaching this is an engine bug
        log.error("summand %s is not a root", list(root))
        raise


def mle_verdict(inst: IpcaInstance, engine: str = "fast") -> MleVerdict:
    q = inst.quiver
    decomposition = decompose(q, inst.alpha, engine)

    per_summand = []
    for root, mult in decomposition:
        per_summand.append(
            SummandReport(
                root=root,
                mult=mult,
                condition_c=check_condition_c(inst, root),
                lhs=inst.p * root[0],
                rhs=inst.n * sum(root[1:]),
                sigma_value=weight_apply(inst.sigma, root),
                root_class=_root_class(q, root),
            )
        )
    exists = all(s.condition_c for s in per_summand)
    condition_d, matrix = check_condition_d(q, decomposition)
    consistent = exists == condition_d
    diagnostics = []
    if not consistent:
        msg = f"condition c ({exists}) and condition d ({condition_d}) disagree for {inst}"
        log.error(msg)
        diagnostics.append(msg)

    stability = Stability.NONE
    if exists:
        stability = Stability.POLYSTABLE
        if decomposition.summands == ((inst.alpha, 1),):
            if engine != "fast" or oracle_cost(inst.alpha) <= STABILITY_ORACLE_LIMIT:
                stable = generic_sigma_stable(q, inst.alpha, inst.sigma)
            else:
                stable = True
                diagnostics.append("stability taken from the Schur property (oracle skipped)")
            if stable:
                stability = Stability.STABLE_UNIQUE

    return MleVerdict(
        instance=inst,
        exists=exists,
        stability=stability,
        decomposition=decomposition,
        per_summand=per_summand,
        condition_d=condition_d,
        euler_matrix=matrix,
        engine=engine,
        consistent=consistent,
        diagnostics=diagnostics,
    )

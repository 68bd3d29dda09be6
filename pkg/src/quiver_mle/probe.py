"""Numerical cross-check: flip-flop norm minimization on sampled data.

The data ``X`` (``p x n``) is split into row blocks ``X_j`` of shape
``p_j x n``.  With ``Sigma`` (``n x n``) and ``Delta_j`` (``p_j x p_j``) the
iteration minimizes

    f = sum_j tr(Delta_j^{-1} X_j Sigma^{-1} X_j^T)

over the kernel of the character, i.e. subject to
``p * logdet(Sigma) + n * sum_j logdet(Delta_j) = 0``.  Each half step is the
exact block minimizer, so ``f`` never increases.  When the MLE exists the
factors converge; otherwise they degenerate and their condition numbers
blow up.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ipca import IpcaInstance, mle_verdict

GENERATOR = "numpy.random.PCG64+standard_normal"


class ProbeInputError(ValueError):
    pass


@dataclass(frozen=True)
class ProbeConfig:
    tol: float = 1e-9
    max_iter: int = 10_000
    divergence_threshold: float = 1e12
    trials: int = 1

    def __post_init__(self):
        if not (self.tol > 0 and self.max_iter > 0 and self.divergence_threshold > 0 and self.trials > 0):
            raise ProbeInputError("all probe settings must be positive")


@dataclass
class SampleData:
    X: np.ndarray
    groups: tuple[int, ...]
    seed: int
    generator: str = GENERATOR

    def __post_init__(self):
        if self.X.shape[0] != sum(self.groups):
            raise ProbeInputError(f"X has {self.X.shape[0]} rows, groups sum to {sum(self.groups)}")

    @property
    def blocks(self) -> list[np.ndarray]:
        edges = np.cumsum((0, *self.groups))
        return [self.X[a:b] for a, b in zip(edges[:-1], edges[1:])]


@dataclass
class ProbeReport:
    converged: bool
    iterations: int
    final_objective: float
    cond_estimates: dict
    agreement: bool
    exists: bool
    seed: int | None
    diagnostics: list[str] = field(default_factory=list)
    monotone_violations: int = 0
    objective_trace: list[float] = field(default_factory=list, repr=False)
    sigma: np.ndarray | None = field(default=None, repr=False)
    deltas: list[np.ndarray] | None = field(default=None, repr=False)

    def to_json(self, emit_factors: bool = False) -> dict:
        out = {
            "converged": self.converged,
            "iterations": self.iterations,
            "objective": self.final_objective,
            "agreement": self.agreement,
            "seed": self.seed,
            "diagnostics": list(self.diagnostics),
            "exists": self.exists,
            "cond": {k: (v if np.isfinite(v) else None) for k, v in self.cond_estimates.items()},
            "monotone_violations": self.monotone_violations,
        }
        if emit_factors and self.sigma is not None:
            out["factors"] = {
                "sigma": self.sigma.tolist(),
                "deltas": [d.tolist() for d in self.deltas],
            }
        return out


def sample_representation(inst: IpcaInstance, seed: int) -> SampleData:
    """Standard normal ``p x n`` data, bit-reproducible for a given seed."""
    rng = np.random.Generator(np.random.PCG64(seed))
    X = rng.standard_normal((inst.p, inst.n))
    return SampleData(X=X, groups=inst.groups, seed=seed)


def _cond(mat: np.ndarray) -> float:
    w = np.linalg.eigvalsh(mat)
    if w[0] <= 0:
        return float("inf")
    return float(w[-1] / w[0])


def _logdet(mat: np.ndarray) -> float:
    sign, value = np.linalg.slogdet(mat)
    if sign <= 0:
        return float("nan")
    return float(value)


def _sym(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.T)


def _objective(blocks, sigma_inv, delta_invs) -> float:
    return float(sum(np.trace(di @ b @ sigma_inv @ b.T) for b, di in zip(blocks, delta_invs)))


def flip_flop(
    inst: IpcaInstance,
    data: SampleData,
    cfg: ProbeConfig = ProbeConfig(),
    exists: bool | None = None,
) -> ProbeReport:
    """Run the alternating updates and compare the outcome with the generic verdict.

    ``exists`` is the combinatorial verdict; it is computed when omitted.
    """
    if tuple(data.groups) != inst.groups or data.X.shape != (inst.p, inst.n):
        raise ProbeInputError("data shape does not match the instance")
    if not np.any(data.X):
        raise ProbeInputError("X = 0 admits no MLE")
    if exists is None:
        exists = mle_verdict(inst).exists

    n, p = inst.n, inst.p
    blocks = data.blocks
    sigma = np.eye(n)
    deltas = [np.eye(pj) for pj in inst.groups]
    sigma_inv, delta_invs = sigma.copy(), [d.copy() for d in deltas]
    objective = _objective(blocks, sigma_inv, delta_invs)
    trace = [objective]
    diagnostics: list[str] = []
    violations = 0
    converged = False
    conds: dict = {}
    it = 0

    def degenerate(name: str, mat: np.ndarray) -> bool:
        c = _cond(mat)
        conds[name] = c
        if not np.isfinite(c):
            diagnostics.append(f"rank-deficient {name} update at iteration {it}")
            return True
        if c > cfg.divergence_threshold:
            diagnostics.append(f"{name} condition number {c:.3g} exceeds threshold at iteration {it}")
            return True
        return False

    for it in range(1, cfg.max_iter + 1):
        old_sigma, old_deltas = sigma, deltas

        m = _sym(sum(b.T @ di @ b for b, di in zip(blocks, delta_invs)))
        if degenerate("sigma", m):
            break
        log_scale = (-n * sum(_logdet(d) for d in deltas) / p - _logdet(m)) / n
        sigma = m * np.exp(log_scale)
        sigma_inv = _sym(np.linalg.inv(sigma))

        cs = [_sym(b @ sigma_inv @ b.T) for b in blocks]
        if any(degenerate(f"delta[{j}]", c) for j, c in enumerate(cs)):
            break
        log_scale = (-p * _logdet(sigma) / n - sum(_logdet(c) for c in cs)) / p
        deltas = [c * np.exp(log_scale) for c in cs]

        # gauge: Sigma -> t Sigma, Delta_j -> Delta_j / t leaves f and the constraint alone
        t = np.exp(-_logdet(sigma) / n)
        sigma, deltas = sigma * t, [d / t for d in deltas]
        sigma_inv = _sym(np.linalg.inv(sigma))
        delta_invs = [_sym(np.linalg.inv(d)) for d in deltas]

        new_objective = _objective(blocks, sigma_inv, delta_invs)
        trace.append(new_objective)
        if new_objective > objective * (1 + 1e-8):
            violations += 1
            diagnostics.append(f"objective increased at iteration {it}: {objective!r} -> {new_objective!r}")
        change = abs(objective - new_objective) / max(abs(objective), np.finfo(float).tiny)
        objective = new_objective

        residual = max(
            [np.linalg.norm(sigma - old_sigma) / np.linalg.norm(old_sigma)]
            + [np.linalg.norm(d - od) / np.linalg.norm(od) for d, od in zip(deltas, old_deltas)]
        )
        conds["sigma"] = _cond(sigma)
        for j, d in enumerate(deltas):
            conds[f"delta[{j}]"] = _cond(d)
        if max(conds.values()) > cfg.divergence_threshold:
            diagnostics.append(f"factor condition number exceeds threshold at iteration {it}")
            break
        if change < cfg.tol and residual < 10 * cfg.tol:
            converged = True
            break
    else:
        diagnostics.append(f"no convergence within {cfg.max_iter} iterations")

    report = ProbeReport(
        converged=converged,
        iterations=it,
        final_objective=objective,
        cond_estimates=conds,
        agreement=converged == exists,
        exists=exists,
        seed=data.seed,
        diagnostics=diagnostics,
        monotone_violations=violations,
        objective_trace=trace,
    )
    if converged:
        report.sigma, report.deltas = sigma, deltas
    return report


def fixed_point_residual(data: SampleData, sigma: np.ndarray, deltas: list[np.ndarray]) -> float:
    """Relative mismatch of ``(Sigma, Delta)`` against the unnormalized update equations.

    The updates fix the factors only up to a common positive scale per
    factor, so each side is compared after dividing by its trace.
    """
    blocks = data.blocks
    p, n = data.X.shape
    delta_invs = [np.linalg.inv(d) for d in deltas]
    m = sum(b.T @ di @ b for b, di in zip(blocks, delta_invs)) / p
    sigma_inv = np.linalg.inv(sigma)
    cs = [b @ sigma_inv @ b.T / n for b in blocks]

    def rel(a, b):
        a, b = a / np.trace(a), b / np.trace(b)
        return np.linalg.norm(a - b) / np.linalg.norm(b)

    # the Delta_j share one scale, so compare them jointly
    joint = sum(np.trace(c) for c in cs) / sum(np.trace(d) for d in deltas)
    delta_err = max(np.linalg.norm(c / joint - d) / np.linalg.norm(d) for c, d in zip(cs, deltas))
    return float(max(rel(m, sigma), delta_err))


def pca_closed_form(S: np.ndarray) -> np.ndarray:
    """``det(S)^(1/p) S^{-1}``: the det-one minimizer of ``tr(S Q)``."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ProbeInputError("S must be square")
    if not np.allclose(S, S.T, rtol=1e-12, atol=1e-12 * np.abs(S).max()):
        raise ProbeInputError("S must be symmetric")
    try:
        np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise ProbeInputError("S must be positive definite") from exc
    p = S.shape[0]
    _, logdet = np.linalg.slogdet(S)
    return np.exp(logdet / p) * np.linalg.inv(S)


def minimize_trace_det_one(
    S: np.ndarray, tol: float = 1e-13, max_iter: int = 100_000
) -> tuple[np.ndarray, float]:
    """Minimize ``tr(S Q)`` over SPD ``Q`` with ``det Q = 1`` by projected gradient.

    Steps follow geodesics ``Q^(1/2) expm(-eta G) Q^(1/2)`` with ``G`` the
    traceless part of ``Q^(1/2) S Q^(1/2)``; a traceless exponent keeps the
    determinant at one.
    """
    S = np.asarray(S, dtype=float)
    p = S.shape[0]
    Q = np.eye(p)
    value = float(np.trace(S))
    for _ in range(max_iter):
        w, V = np.linalg.eigh(Q)
        root = (V * np.sqrt(w)) @ V.T
        M = _sym(root @ S @ root)
        G = M - np.trace(M) / p * np.eye(p)
        mu = np.linalg.eigvalsh(M)
        if np.linalg.norm(G) <= tol * np.trace(M):
            break
        eta = 2.0 / (mu[-1] + mu[0])
        gw, gV = np.linalg.eigh(-eta * G)
        Q = _sym(root @ ((gV * np.exp(gw)) @ gV.T) @ root)
        value = float(np.trace(S @ Q))
    return Q, value


def lambda_scale(m: float, n: int, p: int) -> float:
    """Stationary point ``p n / m`` of ``lambda -> lambda m / n - p log(lambda)``."""
    if not m > 0:
        raise ProbeInputError(f"norm m must be positive, got {m}")
    return p * n / m

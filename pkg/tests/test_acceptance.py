"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; the
summary is also printed at the end of every pytest run that includes them.
"""

import contextlib
import itertools
import json
import random
import time

import numpy as np

from quiver_mle import (
    IpcaInstance,
    Quiver,
    dw_decomposition,
    euler_form,
    generic_decomposition,
    generic_ext,
    generic_hom,
    mle_verdict,
    minimize_trace_det_one,
    pca_closed_form,
    sample_representation,
    flip_flop,
)
from quiver_mle.cli import main, sweep_instances
from quiver_mle.oracle import clear_caches

from helpers import numeric_hom, random_dim, random_quiver


@contextlib.contextmanager
def gate(criterion, number, title):
    """Record a FAIL line if the body raises before it records a verdict."""
    try:
        yield
    except BaseException as exc:
        criterion(number, title, False, f"{type(exc).__name__}: {exc}")
        raise


def test_criterion_1_worked_example(criterion, capsys):
    title = "worked example reproduction"
    with gate(criterion, 1, title):
        clear_caches()
        start = time.perf_counter()
        code = main(["check", "--n", "5", "--groups", "4,3,1,1,1"])
        elapsed = time.perf_counter() - start
        out = json.loads(capsys.readouterr().out)
        checks = {s["check"]: s["condition_c"] for s in out["summands"]}
        ok = (
            code == 0
            and out["exists"] is True
            and out["decomposition"]
            == [{"root": [3, 2, 1, 1, 1, 1], "mult": 1}, {"root": [1, 1, 1, 0, 0, 0], "mult": 2}]
            and checks == {"10*3 = 5*6": True, "10*1 = 5*2": True}
            and elapsed < 1.0
        )
        with capsys.disabled():
            criterion(1, title, ok, f"{elapsed:.3f}s, decomposition {out['decomposition']}")
    assert ok


def test_criterion_2_consistency_sweep(criterion, capsys):
    title = "c-verdict equals d-verdict on n<=6, k<=4, p_j<=4"
    with gate(criterion, 2, title):
        clear_caches()
        start = time.perf_counter()
        instances = sweep_instances(range(1, 7), range(1, 5), 4)
        bad = [inst for inst in instances if not mle_verdict(inst, "fast").consistent]
        elapsed = time.perf_counter() - start
        ok = not bad and elapsed < 300
        with capsys.disabled():
            criterion(2, title, ok, f"{len(instances)} instances, {len(bad)} mismatches, {elapsed:.1f}s")
    assert ok, bad[:5]


def test_criterion_3_engine_conformance(criterion, capsys):
    title = "fast engine equals oracle on stars Q1..Q4 and Kronecker K2, K3"
    with gate(criterion, 3, title):
        grids = [(Quiver.star(k), 4) for k in range(1, 5)] + [(Quiver.kronecker(k), 6) for k in (2, 3)]
        checked, mismatches = 0, []
        for q, top in grids:
            for alpha in itertools.product(range(top + 1), repeat=q.vertex_count):
                if not any(alpha):
                    continue
                checked += 1
                if dw_decomposition(q, alpha) != generic_decomposition(q, alpha):
                    mismatches.append((q.arrows, alpha))
        ok = not mismatches
        with capsys.disabled():
            criterion(3, title, ok, f"{checked} vectors, {len(mismatches)} mismatches")
    assert ok, mismatches[:5]


def _validity_problems(q, alpha, d):
    problems = []
    if d.total() != alpha:
        problems.append("mass")
    roots = d.roots
    for i, j in itertools.permutations(range(len(roots)), 2):
        if generic_ext(q, roots[i], roots[j]) != 0:
            problems.append(f"ext{roots[i]}{roots[j]}")
    for root, mult in d:
        if generic_decomposition(q, root).summands != ((root, 1),):
            problems.append(f"not schur {root}")
        if mult > 1 and euler_form(q, root, root) < 0:
            problems.append(f"loop multiplicity {root}x{mult}")
    return problems


def test_criterion_4_decomposition_validity(criterion, capsys):
    title = "decomposition validity on 500 random (quiver, alpha)"
    with gate(criterion, 4, title):
        rng = random.Random(2024)
        failures = []
        for _ in range(500):
            q = random_quiver(rng, max_vertices=6)
            alpha = random_dim(rng, q, 5, max_cost=100_000)
            oracle = generic_decomposition(q, alpha)
            fast = dw_decomposition(q, alpha)
            problems = _validity_problems(q, alpha, oracle) + _validity_problems(q, alpha, fast)
            if fast != oracle:
                problems.append("engines differ")
            if problems:
                failures.append((q.arrows, alpha, problems))
        ok = not failures
        with capsys.disabled():
            criterion(4, title, ok, f"{len(failures)} failing cases")
    assert ok, failures[:5]


def test_criterion_5_k1_law(criterion, capsys):
    title = "k=1: exists iff n == p for n, p <= 6"
    with gate(criterion, 5, title):
        wrong = [
            (n, p)
            for n, p in itertools.product(range(1, 7), repeat=2)
            if mle_verdict(IpcaInstance(n, (p,)), "both").exists != (n == p)
        ]
        ok = not wrong
        with capsys.disabled():
            criterion(5, title, ok, f"36 instances, {len(wrong)} wrong")
    assert ok, wrong


def test_criterion_6_hom_ext_coherence(criterion, capsys):
    title = "hom - ext == Euler form on 1000 random pairs"
    with gate(criterion, 6, title):
        rng = random.Random(6)
        bad, numeric_bad = [], []
        for trial in range(1000):
            q = random_quiver(rng, max_vertices=5, max_arrows=2)
            a = random_dim(rng, q, 3)
            b = random_dim(rng, q, 3)
            hom = generic_hom(q, a, b)
            if hom - generic_ext(q, a, b) != euler_form(q, a, b) or hom < 0:
                bad.append((q.arrows, a, b))
            # independent leg: hom measured on random representations over GF(p)
            if hom != numeric_hom(q, a, b, seed=trial):
                numeric_bad.append((q.arrows, a, b))
        ok = not bad and not numeric_bad
        with capsys.disabled():
            criterion(
                6, title, ok, f"{len(bad)} identity failures, {len(numeric_bad)} disagreements with GF(p) hom"
            )
    assert ok, (bad[:5], numeric_bad[:5])


def test_criterion_7_probe_agreement(criterion, capsys):
    title = "flip-flop verdicts agree with combinatorics on n<=4, k<=3, p_j<=3"
    with gate(criterion, 7, title):
        start = time.perf_counter()
        trials = agree = violations = 0
        disagreements = []
        for inst in sweep_instances(range(1, 5), range(1, 4), 3):
            exists = mle_verdict(inst).exists
            for seed in range(20):
                report = flip_flop(inst, sample_representation(inst, seed), exists=exists)
                trials += 1
                agree += report.agreement
                violations += report.monotone_violations
                if not report.agreement:
                    disagreements.append((inst.n, inst.groups, seed))
        elapsed = time.perf_counter() - start
        rate = agree / trials
        ok = rate >= 0.95 and violations == 0 and elapsed < 600
        with capsys.disabled():
            criterion(
                7,
                title,
                ok,
                f"{trials} trials, agreement {rate:.4f}, {violations} monotone violations, {elapsed:.1f}s",
            )
    assert ok, disagreements[:10]


def test_criterion_8_pca_closed_form(criterion, capsys):
    title = "numerical det-one minimum matches p det(S)^(1/p); closed form has det 1"
    with gate(criterion, 8, title):
        rng = np.random.default_rng(8)
        worst_rel = worst_det = 0.0
        for _ in range(100):
            p = int(rng.integers(1, 5))
            A = rng.standard_normal((p, p))
            S = A @ A.T + 0.05 * np.eye(p)
            target = p * np.linalg.det(S) ** (1 / p)
            _, value = minimize_trace_det_one(S)
            worst_rel = max(worst_rel, abs(value - target) / target)
            worst_det = max(worst_det, abs(np.linalg.det(pca_closed_form(S)) - 1))
        ok = worst_rel < 1e-6 and worst_det < 1e-10
        with capsys.disabled():
            criterion(8, title, ok, f"worst objective rel err {worst_rel:.2e}, worst |det-1| {worst_det:.2e}")
    assert ok

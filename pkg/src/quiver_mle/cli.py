"""Command-line front end: ``check``, ``decompose``, ``sweep`` and ``probe``.

Exit codes: 0 success, 2 invalid input, 3 ``--assert-exists`` failed,
4 engine disagreement, 5 I/O failure.  JSON goes to stdout only.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .dw import EngineError
from .ipca import ENGINES, EngineDisagreement, IpcaInstance, decompose, mle_verdict
from .oracle import CACHE_CAP_ENV
from .probe import ProbeConfig, ProbeInputError, flip_flop, sample_representation
from .quiver import Quiver, QuiverError, as_dim_vector, classify_root, euler_form

EXIT_OK, EXIT_INPUT, EXIT_ASSERT, EXIT_DISAGREE, EXIT_IO = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


def _int_range(text: str) -> range:
    """``"3"``, ``"1..4"`` or ``"1:4"`` (inclusive)."""
    for sep in ("..", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            break
    else:
        lo = hi = text
    try:
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo_i, hi_i + 1)


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _instance(args) -> IpcaInstance:
    return IpcaInstance(args.n, tuple(args.groups))


def cmd_check(args) -> int:
    verdict = mle_verdict(_instance(args), args.engine)
    print(_dumps(verdict.to_json()))
    if args.assert_exists and not verdict.exists:
        return EXIT_ASSERT
    return EXIT_OK


def _load_quiver(args) -> Quiver:
    if args.quiver is not None:
        try:
            with open(args.quiver) as fh:
                return Quiver.from_json(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read quiver file: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"quiver file is not valid JSON: {exc}")
    return Quiver.star(args.star)


def cmd_decompose(args) -> int:
    q = _load_quiver(args)
    q.require_acyclic()
    alpha = as_dim_vector(q, args.dim, "--dim")
    if not any(alpha):
        raise QuiverError("--dim must be nonzero")
    decomposition = decompose(q, alpha, args.engine)
    roots = decomposition.roots
    print(
        _dumps(
            {
                "quiver": q.to_json(),
                "dim": list(alpha),
                "engine": args.engine,
                "decomposition": [
                    {"root": list(r), "mult": m, "root_class": classify_root(q, r).value}
                    for r, m in decomposition
                ],
                "euler_matrix": [[euler_form(q, a, b) for b in roots] for a in roots],
            }
        )
    )
    return EXIT_OK


def sweep_instances(n_range: range, k_range: range, p_max: int) -> list[IpcaInstance]:
    """Instances in canonical order: by k, then n, then group tuple."""
    return [
        IpcaInstance(n, groups)
        for k in k_range
        for n in n_range
        for groups in itertools.product(range(1, p_max + 1), repeat=k)
    ]


def _sweep_line(task: tuple[IpcaInstance, str]) -> str:
    inst, engine = task
    return _dumps(mle_verdict(inst, engine).to_json())


def cmd_sweep(args) -> int:
    if args.p_max < 1:
        raise UsageError("--p-max must be >= 1")
    if min(args.k_range) < 1 or min(args.n_range) < 1:
        raise UsageError("n and k ranges must be positive")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    tasks = [(inst, args.engine) for inst in sweep_instances(args.n_range, args.k_range, args.p_max)]
    if args.jobs == 1:
        lines = map(_sweep_line, tasks)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=args.jobs)
        lines = pool.map(_sweep_line, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs)))
    try:
        out = sys.stdout if args.output == "-" else open(args.output, "w")
    except OSError as exc:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
        print(f"error: cannot open output: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        with pool if pool is not None else _null():
            for line in lines:
                out.write(line + "\n")
        out.flush()
    except OSError as exc:
        print(f"error: write failed: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


class _null:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def cmd_probe(args) -> int:
    inst = _instance(args)
    cfg = ProbeConfig(tol=args.tol, max_iter=args.max_iter, divergence_threshold=args.divergence_threshold)
    seeds = [s for r in args.seeds for s in r]
    exists = mle_verdict(inst).exists
    agree = converged = 0
    for seed in seeds:
        report = flip_flop(inst, sample_representation(inst, seed), cfg, exists=exists)
        agree += report.agreement
        converged += report.converged
        print(_dumps(report.to_json(emit_factors=args.emit_factors)))
    print(
        _dumps(
            {
                "summary": {
                    "n": inst.n,
                    "groups": list(inst.groups),
                    "exists": exists,
                    "trials": len(seeds),
                    "converged": converged,
                    "agreement_rate": agree / len(seeds),
                }
            }
        )
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiver-mle", description="Generic MLE existence for integrated PCA via quiver decompositions."
    )
    parser.add_argument("--cache-cap", type=int, default=None, help="max entries per oracle memo table (0 = unbounded)")
    sub = parser.add_subparsers(dest="command", required=True)

    def engine_arg(p, default="fast"):
        p.add_argument("--engine", choices=ENGINES, default=default)

    p = sub.add_parser("check", help="MLE verdict for one iPCA instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--groups", type=_int_list, required=True)
    p.add_argument("--assert-exists", action="store_true", help="exit 3 when no MLE exists")
    engine_arg(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="generic decomposition of a dimension vector")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--star", type=int)
    src.add_argument("--quiver", help='JSON file {"vertices": N, "arrows": [[t, h], ...]}')
    p.add_argument("--dim", type=_int_list, required=True)
    engine_arg(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("sweep", help="verdicts for a grid of instances, one JSON line each")
    p.add_argument("--n-range", type=_int_range, required=True)
    p.add_argument("--k-range", type=_int_range, required=True)
    p.add_argument("--p-max", type=int, required=True)
    p.add_argument("--output", default="-")
    p.add_argument("--jobs", type=int, default=1)
    engine_arg(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("probe", help="flip-flop numerical probe on sampled data")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--groups", type=_int_list, required=True)
    p.add_argument("--seeds", type=_int_range, action="append", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--divergence-threshold", type=float, default=1e12)
    p.add_argument("--emit-factors", action="store_true")
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cache_cap is not None:
        os.environ[CACHE_CAP_ENV] = str(args.cache_cap)
    try:
        return args.func(args)
    except EngineDisagreement as exc:
        print(_dumps({"error": "engine_disagreement", "oracle": exc.oracle.to_json(), "fast": exc.fast.to_json()}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (QuiverError, ProbeInputError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE

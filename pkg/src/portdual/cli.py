"""Batch command-line front end.

Subcommands: fidelity, matrix, convert, scaling, table, verify.  Output goes
to stdout or to --output (resolved against the PORTDUAL_OUT directory when
relative).  Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import correspondence as co
from . import verify as vf
from .correspondence import CoefficientVector, EigensolverError
from .inversion import DimensionCapError as InversionCapError
from .oracle import DimensionCapError as OracleCapError
from .repsym import DegenerateSpectrumError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

SIG_DIGITS = 12


class UsageError(ValueError):
    pass


def _round_floats(obj):
    """Clamp every float to 12 significant digits for stable output."""
    if isinstance(obj, float):
        return float(f"{obj:.{SIG_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _fmt(x: float) -> str:
    return f"{x:.{SIG_DIGITS}g}"


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    base = os.environ.get("PORTDUAL_OUT")
    if base and not os.path.isabs(output):
        output = os.path.join(base, output)
    with open(output, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit_json(payload: dict, output: str | None):
    _emit(json.dumps(_round_floats(payload), indent=2), output)


def _resolve_n_N(args) -> tuple[int, int]:
    """Calls n and ports N, accepting either flag; they must agree as N = n+1."""
    n, N = args.n, args.N
    if n is None and N is None:
        raise UsageError("provide --n (calls) or --N (ports)")
    if n is not None and N is not None and N != n + 1:
        raise UsageError(f"--n {n} and --N {N} are inconsistent (need N = n+1)")
    if n is None:
        n = N - 1
    if N is None:
        N = n + 1
    if n < 0:
        raise UsageError("need n >= 0")
    return n, N


def _spectral_payload(kind: str, n: int, N: int, d: int, tol: float) -> dict:
    if kind == "pbt":
        res = co.max_eig(co.build_M_pbt(N, d), tol=tol)
    else:
        res = co.max_eig(co.build_M_est(n, d), tol=tol)
    return {
        "task": kind,
        "n": n,
        "N": N,
        "d": d,
        "fidelity": res.eigenvalue,
        "vector": res.vector.values.tolist(),
        "residual": res.residual,
        "iterations": res.iterations,
    }


def cmd_fidelity(args) -> int:
    n, N = _resolve_n_N(args)
    if args.task == "both":
        pbt = _spectral_payload("pbt", n, N, args.d, args.tol)
        est = _spectral_payload("est", n, N, args.d, args.tol)
        payload = {
            "task": "both",
            "n": n,
            "N": N,
            "d": args.d,
            "pbt": pbt,
            "est": est,
            "abs_diff": abs(pbt["fidelity"] - est["fidelity"]),
        }
    else:
        payload = _spectral_payload(args.task, n, N, args.d, args.tol)
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_matrix(args) -> int:
    n, N = _resolve_n_N(args)
    if args.kind == "r":
        rm = co.build_R(n, args.d)
        if args.format == "json":
            payload = {
                "kind": "r",
                "n": n,
                "d": args.d,
                "rows": [a.to_list() for a in rm.rows],
                "cols": [a.to_list() for a in rm.cols],
                "entries": rm.dense().tolist(),
            }
            _emit_json(payload, args.output)
        else:
            buf = io.StringIO()
            writer = csv.writer(buf)
            writer.writerow(rm.cols.labels())
            for row in rm.dense():
                writer.writerow([int(x) for x in row])
            _emit(buf.getvalue(), args.output)
        return EXIT_OK
    mat = co.build_M_pbt(N, args.d) if args.kind == "pbt" else co.build_M_est(n, args.d)
    if args.format == "json":
        _emit_json(mat.to_json_dict(), args.output)
    else:
        _emit(co.matrix_to_csv(mat), args.output)
    return EXIT_OK


def cmd_convert(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        vec = CoefficientVector.from_json_dict(data)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"cannot parse coefficient vector: {exc}")
    n, d = args.n, args.d
    if vec.role == "w":
        if (vec.index.n, vec.index.d) != (n + 1, d):
            raise UsageError(
                f"w must be indexed by (n+1={n+1}, d={d}), file has ({vec.index.n}, {vec.index.d})")
        fid_in = co.fidelity_pbt(vec, n + 1, d)
        out = co.w_to_v(vec, n, d)
        fid_out = co.fidelity_est(out, n, d)
    else:
        if (vec.index.n, vec.index.d) != (n, d):
            raise UsageError(
                f"v must be indexed by (n={n}, d={d}), file has ({vec.index.n}, {vec.index.d})")
        fid_in = co.fidelity_est(vec, n, d)
        out = co.v_to_w(vec, n, d)
        fid_out = co.fidelity_pbt(out, n + 1, d)
    if fid_out < fid_in - 1e-12:
        raise EigensolverError(
            f"conversion decreased the fidelity: {fid_in} -> {fid_out}", fid_in - fid_out)
    payload = {
        "direction": f"{vec.role}_to_{out.role}",
        "n": n,
        "d": d,
        "input_fidelity": fid_in,
        "output_fidelity": fid_out,
        "output": out.to_json_dict(),
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_scaling(args) -> int:
    rows = co.scaling_table(args.d, args.N, tol=args.tol)
    if args.format == "json":
        payload = {
            "d": args.d,
            "rows": [{"N": r.N, "F": r.fidelity, "scaled_gap": r.scaled_gap} for r in rows],
        }
        _emit_json(payload, args.output)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["N", "F", "scaled_gap"])
        for r in rows:
            writer.writerow([r.N, _fmt(r.fidelity), _fmt(r.scaled_gap)])
        _emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_table(args) -> int:
    tasks = ["pbt", "est"] if args.task == "both" else [args.task]
    rows = []
    for d in args.d:
        for n in args.n:
            for task in tasks:
                payload = _spectral_payload(task, n, n + 1, d, args.tol)
                rows.append({"task": task, "n": n, "N": n + 1, "d": d,
                             "F": payload["fidelity"]})
    if args.format == "json":
        _emit_json({"rows": rows}, args.output)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["task", "n", "N", "d", "F"])
        for r in rows:
            writer.writerow([r["task"], r["n"], r["N"], r["d"], _fmt(r["F"])])
        _emit(buf.getvalue(), args.output)
    return EXIT_OK


def _verify_overrides(args) -> dict:
    overrides: dict = {}
    if args.n_max is not None:
        overrides["n_max"] = args.n_max
    if args.d_max is not None:
        overrides["d_max"] = args.d_max
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.samples is not None:
        overrides["mc_samples"] = args.samples
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.d is not None and (args.n is not None or args.N is not None):
        n, N = _resolve_n_N(args)
        overrides["cases"] = ((N, args.d),) if args.suite == "oracle" else ((n, args.d),)
        if args.suite == "oracle":
            overrides["mc_cases"] = ((n, args.d),)
    return overrides


def cmd_verify(args) -> int:
    names = list(vf.SUITES) if args.suite == "all" else [args.suite]
    checks = vf.run_suites(names, **_verify_overrides(args))
    failed = [c for c in checks if not c.passed]
    payload = {
        "suites": names,
        "total": len(checks),
        "failed": len(failed),
        "passed": not failed,
        "checks": [c.to_json_dict() for c in checks],
    }
    _emit_json(payload, args.output)
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="portdual",
        description="Optimal fidelities of deterministic port-based teleportation "
                    "and unitary estimation, protocol conversion, and verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_d=True):
        if needs_d:
            p.add_argument("--d", type=int, required=True, help="local dimension")
        p.add_argument("--n", type=int, default=None, help="estimation calls n")
        p.add_argument("--N", type=int, default=None, help="teleportation ports N = n+1")
        p.add_argument("--output", "-o", default=None,
                       help="output file (default stdout; relative paths resolve "
                            "against PORTDUAL_OUT)")

    p = sub.add_parser("fidelity", help="optimal fidelity via the spectral reduction")
    p.add_argument("--task", choices=["pbt", "est", "both"], required=True)
    add_common(p)
    p.add_argument("--tol", type=float, default=1e-12, help="eigensolver residual bound")
    p.set_defaults(fn=cmd_fidelity)

    p = sub.add_parser("matrix", help="dump the incidence or fidelity matrix")
    p.add_argument("--kind", choices=["pbt", "est", "r"], required=True)
    add_common(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(fn=cmd_matrix)

    p = sub.add_parser("convert", help="convert a coefficient vector between tasks")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True, help="estimation calls n")
    p.add_argument("--input", required=True, help="JSON coefficient vector file")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("scaling", help="fidelity gap table N^2 (1-F)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, nargs="+", required=True, help="port counts")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_scaling)

    p = sub.add_parser("table", help="tabulate fidelities over (n, d) grids")
    p.add_argument("--task", choices=["pbt", "est", "both"], default="both")
    p.add_argument("--d", type=int, nargs="+", required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("verify", help="run a module invariant suite")
    p.add_argument("--suite", choices=[*vf.SUITES, "all"], required=True)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--d-max", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleCapError, InversionCapError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EigensolverError, DegenerateSpectrumError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

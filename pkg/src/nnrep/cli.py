"""``nnrep`` command-line front end.

Exit codes: 0 success/valid, 1 invalid representation, 2 input error,
3 infeasible, 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, reproduce
from .boolfn import (
    LinearThresholdFn,
    SymmetricProfile,
    all_profiles,
    function_from_json,
    intervals,
    is_periodic,
)
from .circuit import ConstantCircuitError, circuit_equiv_check, nn_to_circuit
from .construct import (
    ConstantFunctionError,
    ConstructionError,
    ConstructionParams,
    interval_construction,
    lt_two_anchor,
    parity_based,
    parity_extension,
    parity_extension_solve,
    symmetric_lt_anchor,
)
from .exactnum import format_rational, res_of_matrix
from .nnrepr import AnchorMatrix, verify_representation
from .search import EXHAUSTED, SearchBudget, bnn_exhaustive, is_linear_threshold, nn_grid_search

OK, INVALID, INPUT_ERROR, INFEASIBLE, EXHAUSTED_EXIT = 0, 1, 2, 3, 4
SHOWN_FAILURES = 10
METHODS = ("parity", "parity-ext", "interval", "lt", "symlt")


class InputError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_jsonable) + "\n"


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            # decimals such as 0.57 become exact rationals
            return json.load(fh, parse_float=Fraction)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc


def load_function(path: str):
    try:
        return function_from_json(load_json(path))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a valid function description ({exc})") from exc


def load_anchors(path: str) -> AnchorMatrix:
    try:
        return AnchorMatrix.from_json(load_json(path))
    except InputError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{path}: not a valid anchor file ({exc})") from exc


class Run:
    """Collects artifacts for one command and writes them with a manifest."""

    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.inputs: list[str] = []
        self.params: dict = {}
        self.artifacts: dict[str, str] = {}
        self.start = time.perf_counter()

    def add(self, name: str, text: str):
        if name in self.artifacts:
            raise RuntimeError(f"artifact {name} written twice")
        self.artifacts[name] = text

    def add_json(self, name: str, obj):
        self.add(name, dumps(obj))

    def finish(self, summary: dict, text_lines: list[str], code: int) -> int:
        out = self.args.output_dir
        if out is not None:
            root = Path(out)
            root.mkdir(parents=True, exist_ok=True)
            for name, text in self.artifacts.items():
                p = root / name
                p.parent.mkdir(parents=True, exist_ok=True)
                p.write_text(text)
            manifest = {
                "command": self.command,
                "inputs": self.inputs,
                "parameters": self.params,
                "outputs": sorted(self.artifacts),
                "exit_code": code,
                "timing_seconds": round(time.perf_counter() - self.start, 6),
                "version": __version__,
            }
            (root / "manifest.json").write_text(dumps(manifest))
        if self.args.format == "json":
            sys.stdout.write(dumps(summary))
        else:
            sys.stdout.write("\n".join(text_lines) + "\n")
        return code


def _failure_lines(report_json: dict) -> list[str]:
    return [f"  {f['input']}: {f['reason']}" for f in report_json["failures"][:SHOWN_FAILURES]]


def _as_profile(f, method: str) -> SymmetricProfile:
    if not isinstance(f, SymmetricProfile):
        raise InputError(f"method {method} needs a symmetric function")
    return f


def _as_threshold(f) -> LinearThresholdFn:
    if isinstance(f, LinearThresholdFn):
        return f
    if f.n > 12:
        raise InputError("method lt needs a threshold function")
    sep = is_linear_threshold(f)
    if sep is None:
        raise InputError("method lt needs a linear threshold function; this one is not separable")
    return LinearThresholdFn(sep[0], sep[1])


def _symlt_threshold(f) -> tuple[int, int]:
    if isinstance(f, SymmetricProfile):
        iv = intervals(f)
        if len(iv) == 2 and iv[0].value == 0:
            return f.n, iv[1].lo
    if isinstance(f, LinearThresholdFn) and set(f.weights) == {1} and 1 <= f.threshold <= f.n:
        return f.n, f.threshold
    raise InputError("method symlt needs a symmetric threshold function 1{|X| >= b}")


def cmd_construct(args) -> int:
    run = Run(args, "construct")
    run.inputs = [args.function] + ([args.params] if args.params else [])
    f = load_function(args.function)
    params = ConstructionParams()
    if args.params:
        try:
            params = ConstructionParams.from_json(load_json(args.params))
        except (TypeError, ValueError) as exc:
            raise InputError(f"{args.params}: bad construction parameters ({exc})") from exc
    run.params = {"method": args.method, **params.to_json()}
    m = args.method
    try:
        if m == "parity":
            A = parity_based(_as_profile(f, m))
        elif m == "parity-ext":
            p = _as_profile(f, m)
            A = parity_extension(p)
            if A is None:
                res = parity_extension_solve(p)
                names = [f"a{i + 1}" for i in range(len(intervals(p)))]
                cert = res.certificate.to_json(names)
                run.add_json("certificate.json", cert)
                lines = ["infeasible: no uniform-entry anchors exist", *res.certificate.lines(names)]
                return run.finish({"status": "infeasible", "certificate": cert}, lines, INFEASIBLE)
        elif m == "interval":
            A = interval_construction(_as_profile(f, m), params)
        elif m == "lt":
            A = lt_two_anchor(_as_threshold(f))
        else:
            A = symmetric_lt_anchor(*_symlt_threshold(f))
    except ConstantFunctionError as exc:
        raise InputError(str(exc)) from exc
    except ConstructionError as exc:
        raise InputError(str(exc)) from exc

    report = verify_representation(A, f, jobs=args.jobs)
    rj = report.to_json(SHOWN_FAILURES)
    res = res_of_matrix(A.rows)
    run.add_json("anchors.json", A.to_json())
    run.add_json("report.json", {"verification": rj, "anchors": A.size, "resolution": res})
    summary = {"method": m, "anchors": A.size, "resolution": res, "valid": report.valid,
               "representation": A.to_json()}
    lines = [f"method {m}: {A.size} anchors, resolution {res}, "
             + ("valid" if report.valid else f"INVALID ({report.failure_count} failures)")]
    lines += [" ".join(a["coords"]) + f"  [{a['label']}]" for a in A.to_json()["anchors"]]
    return run.finish(summary, lines, OK if report.valid else INVALID)


def cmd_verify(args) -> int:
    run = Run(args, "verify")
    run.inputs = [args.function, args.anchors]
    f = load_function(args.function)
    A = load_anchors(args.anchors)
    if A.n != f.n:
        raise InputError(f"anchors have dimension {A.n} but the function has {f.n} inputs")
    report = verify_representation(A, f, jobs=args.jobs)
    rj = report.to_json()
    run.add_json("report.json", rj)
    summary = {k: v for k, v in rj.items() if k != "failures"}
    summary["failures"] = rj["failures"][:SHOWN_FAILURES]
    lines = ["valid" if report.valid else f"invalid: {report.failure_count} failing inputs"]
    lines += _failure_lines(rj)
    return run.finish(summary, lines, OK if report.valid else INVALID)


def cmd_analyze(args) -> int:
    run = Run(args, "analyze")
    run.inputs = [args.function]
    f = load_function(args.function)
    out: dict = {"n": f.n}
    lines = [f"n = {f.n}"]
    if isinstance(f, SymmetricProfile):
        iv = intervals(f)
        period = is_periodic(f)
        out["intervals"] = [[s.lo, s.hi, s.value] for s in iv]
        out["interval_count"] = len(iv)
        out["period"] = period
        lines.append("intervals: " + " ".join(f"[{s.lo},{s.hi}]={s.value}" for s in iv))
        lines.append(f"I(f) = {len(iv)}")
        lines.append(f"periodic, T = {period}" if period else "not periodic")
    if f.n <= 12:
        sep = is_linear_threshold(f)
        out["threshold"] = None if sep is None else {"weights": list(sep[0]), "threshold": sep[1]}
        lines.append("not a linear threshold function" if sep is None
                     else f"linear threshold: w = {list(sep[0])}, b = {sep[1]}")
    else:
        out["threshold"] = "skipped (n > 12)"
        lines.append("linear threshold test skipped for n > 12")
    run.add_json("analysis.json", out)
    return run.finish(out, lines, OK)


def cmd_search(args) -> int:
    run = Run(args, "search")
    run.inputs = [args.function] + ([args.budget] if args.budget else [])
    f = load_function(args.function)
    default = SearchBudget() if args.mode == "bnn" else SearchBudget(max_anchors=3)
    budget = default
    if args.budget:
        try:
            budget = SearchBudget.from_json({**default.to_json(), **load_json(args.budget)})
        except (TypeError, ValueError) as exc:
            raise InputError(f"{args.budget}: bad budget ({exc})") from exc
    if f.n > 6:
        raise InputError("exhaustive searches are limited to n <= 6")
    run.params = {"mode": args.mode, **budget.to_json()}
    res = bnn_exhaustive(f, budget) if args.mode == "bnn" else nn_grid_search(f, budget)
    rj = res.to_json()
    run.add_json("search.json", rj)
    if res.status == EXHAUSTED:
        lines = [f"{args.mode} search exhausted after {res.candidates} candidates ({res.scope})"]
        return run.finish(rj, lines, EXHAUSTED_EXIT)
    lines = [f"{args.mode} minimum size {res.size} ({res.scope}, {res.candidates} candidates)"]
    lines += [" ".join(a["coords"]) + f"  [{a['label']}]" for a in rj["witness"]["anchors"]]
    return run.finish(rj, lines, OK)


def cmd_circuit(args) -> int:
    run = Run(args, "circuit")
    run.inputs = [args.anchors, args.function]
    A = load_anchors(args.anchors)
    f = load_function(args.function)
    if A.n != f.n:
        raise InputError(f"anchors have dimension {A.n} but the function has {f.n} inputs")
    report = verify_representation(A, f, jobs=args.jobs)
    if not report.valid:
        rj = report.to_json(SHOWN_FAILURES)
        lines = [f"invalid representation ({report.failure_count} failing inputs); no circuit emitted"]
        return run.finish({"valid": False, "verification": rj}, lines + _failure_lines(rj), INVALID)
    try:
        c = nn_to_circuit(A)
    except ConstantCircuitError as exc:
        out = {"constant": exc.value, "n": A.n, "gates": 0}
        run.add_json("circuit.json", out)
        return run.finish(out, [f"constant circuit: output {exc.value}"], OK)
    eq = circuit_equiv_check(c, f) if f.n <= 24 else None
    run.add_json("circuit.json", c.to_json())
    run.add("netlist.txt", c.netlist())
    out = {"gates": c.gate_count, "thr": len(c.thr_gates), "and": len(c.and_gates),
           "equivalent": eq, "circuit": c.to_json()}
    lines = [f"{c.gate_count} gates ({len(c.thr_gates)} THR, {len(c.and_gates)} AND, 1 OR); "
             f"equivalent: {eq}"]
    return run.finish(out, lines + [c.netlist().rstrip()], OK if eq is not False else INVALID)


def cmd_reproduce(args) -> int:
    run = Run(args, "reproduce")
    if args.list:
        return run.finish({"ids": list(reproduce.REGISTRY)}, list(reproduce.REGISTRY), OK)
    try:
        rows = reproduce.run(args.ids)
    except KeyError as exc:
        raise InputError(exc.args[0]) from exc
    run.params = {"ids": [r["id"] for r in rows]}
    run.add_json("reproduce.json", rows)
    width = max(len(r["id"]) for r in rows)
    lines = []
    for r in rows:
        extra = ""
        if "max_deviation" in r["details"]:
            extra = f"  max deviation {r['details']['max_deviation']}"
        lines.append(f"{r['id']:<{width}}  {r['status']}{extra}")
    passed = all(r["status"] == "pass" for r in rows)
    lines.append(f"{sum(r['status'] == 'pass' for r in rows)}/{len(rows)} passed")
    return run.finish({"results": rows, "all_passed": passed}, lines, OK if passed else INVALID)


def seed_corpus(args) -> int:
    n = args.seed_corpus
    if not 1 <= n <= 16:
        raise InputError("--seed-corpus needs 1 <= n <= 16")
    if args.output_dir is None:
        raise InputError("--seed-corpus needs --output-dir")
    run = Run(args, "seed-corpus")
    run.params = {"n": n}
    for p in all_profiles(n):
        name = "".join(map(str, p.values))
        run.add_json(f"corpus/n{n}/{name}.json", p.to_json())
    count = 1 << (n + 1)
    return run.finish({"profiles": count, "n": n}, [f"wrote {count} profiles for n = {n}"], OK)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nnrep", description="Exact nearest-neighbor representations of Boolean functions.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--jobs", type=int, default=1, help="worker threads for exhaustive sweeps")
    ap.add_argument("--output-dir", help="write artifacts and manifest.json here")
    ap.add_argument("--format", choices=("json", "text"), default="text", help="stdout format")
    ap.add_argument("--seed-corpus", type=int, metavar="N",
                    help="write all 2^(N+1) symmetric profiles of N inputs to the output dir")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("construct", help="build anchors for a function")
    p.add_argument("function")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--params", help="construction parameters JSON")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("verify", help="check anchors against a function")
    p.add_argument("function")
    p.add_argument("anchors")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("analyze", help="intervals, periodicity, threshold witness")
    p.add_argument("function")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("search", help="brute-force minimal representation")
    p.add_argument("function")
    p.add_argument("--mode", choices=("bnn", "grid"), required=True)
    p.add_argument("--budget", help="search budget JSON")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("circuit", help="compile anchors to an OR-AND-THR circuit")
    p.add_argument("anchors")
    p.add_argument("function")
    p.set_defaults(handler=cmd_circuit)

    p = sub.add_parser("reproduce", help="run the worked-example regression suite")
    p.add_argument("ids", nargs="*")
    p.add_argument("--list", action="store_true", help="list example ids")
    p.set_defaults(handler=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.jobs < 1:
        ap.error("--jobs must be at least 1")
    try:
        if args.seed_corpus is not None:
            if args.command is not None:
                ap.error("--seed-corpus runs on its own, without a command")
            return seed_corpus(args)
        if args.command is None:
            ap.print_help(sys.stderr)
            return INPUT_ERROR
        return args.handler(args)
    except InputError as exc:
        print(f"nnrep: error: {exc}", file=sys.stderr)
        return INPUT_ERROR

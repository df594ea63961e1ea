"""Command-line front end.

Every subcommand writes CSV to stdout, preceded by one JSON header line.
Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 numeric
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from importlib import resources

import numpy as np

from . import __version__
from .corpus import SCHEMA_VERSION, CorpusSpec, generate, load_corpus
from .fourier import fourier_transform
from .maximal import box_maximal_average, dyadic_maximal_profile
from .norms import anisotropic_lorentz_norm, frak_norm, lorentz_norm
from .rearrange import dyadic_samples, rearrangement_1d, repeated_rearrangement
from .verify import (
    SUITES,
    apply_baseline,
    max_ratios,
    run_suite,
    sharpness_experiment,
)

REPORT_COLUMNS = ["test_id", "n", "p", "q", "r", "seed", "lhs", "rhs", "ratio", "mode", "status",
                  "tool_version", "schema_version"]
NORMS = ("lorentz", "frak", "anisotropic", "lp")


class UsageError(Exception):
    """Bad parameters; maps to exit code 2."""


def _float(s: str) -> float:
    v = float(s)
    if math.isnan(v):
        raise argparse.ArgumentTypeError("NaN is not a valid parameter")
    return v


def _default_data(name: str) -> str:
    return str(resources.files("steinlab") / "data" / name)


def _header(out, command: str, **params):
    doc = {"tool": "steinlab", "tool_version": __version__, "schema_version": SCHEMA_VERSION,
           "command": command, "params": params}
    out.write(json.dumps(doc, sort_keys=True, default=str) + "\n")


def _csv(out, columns, rows):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(row)


def _num(x) -> str:
    return repr(float(x))


def _spec_from_args(args) -> CorpusSpec:
    params = json.loads(args.params) if args.params else {}
    if not isinstance(params, dict):
        raise UsageError("--params must be a JSON object")
    grid = {"n": args.n}
    if args.count is not None:
        grid["count"] = args.count
    if args.spacing is not None:
        grid["spacing"] = args.spacing
    return CorpusSpec(args.gen, params, args.seed, grid)


def _add_function_args(sp):
    sp.add_argument("--gen", default="gaussian", help="generator name or alias")
    sp.add_argument("--params", default="", help="generator parameters as JSON")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=1, help="dimension")
    sp.add_argument("--count", type=int, default=None, help="cells per axis")
    sp.add_argument("--spacing", type=_float, default=None, help="cell width (power of two)")


def cmd_norm(args, out) -> int:
    spec = _spec_from_args(args)
    f = generate(spec)
    p, q = args.p, args.q if args.q is not None else args.p
    if args.norm == "lorentz":
        value = lorentz_norm(rearrangement_1d(f), p, q)
    elif args.norm == "lp":
        value = lorentz_norm(rearrangement_1d(f), p, p)
    elif args.norm == "frak":
        value = frak_norm(repeated_rearrangement(f), p, q)
    else:
        value = anisotropic_lorentz_norm(f, p, q)
    if not math.isfinite(value):
        raise FloatingPointError(f"norm evaluated to {value}")
    _header(out, "norm", spec=spec.to_json(), norm=args.norm, p=p, q=q)
    _csv(out, ["generator", "seed", "n", "count", "spacing", "norm", "p", "q", "value"],
         [[spec.generator, spec.seed, f.dim, "x".join(map(str, f.spec.count)),
           _num(f.spec.spacing[0]), args.norm, _num(p), _num(q), _num(value)]])
    return 0


def cmd_rearrange(args, out) -> int:
    spec = _spec_from_args(args)
    f = generate(spec)
    _header(out, "rearrange", spec=spec.to_json(), kind=args.kind)
    if args.kind == "1d":
        s = rearrangement_1d(f)
        _csv(out, ["t_right", "value"], [[_num(t), _num(v)] for t, v in zip(s.breakpoints, s.values)])
    else:
        prof = dyadic_samples(repeated_rearrangement(f))
        rows = []
        for idx in np.ndindex(prof.values.shape):
            m = [lo + i for lo, i in zip(prof.lo, idx)]
            rows.append([" ".join(map(str, m)), _num(prof.values[idx])])
        _csv(out, ["m", "value"], rows)
    return 0


def cmd_fourier(args, out) -> int:
    spec = _spec_from_args(args)
    fh = fourier_transform(generate(spec))
    _header(out, "fourier", spec=spec.to_json(), tail_warning=fh.meta.get("tail_warning", 0.0))
    if fh.dim != 1:
        raise UsageError("fourier output is tabulated for n = 1 only")
    y = fh.spec.centers(0)
    _csv(out, ["y", "re", "im"], [[_num(a), _num(b.real), _num(b.imag)] for a, b in zip(y, fh.values)])
    return 0


def cmd_maximal(args, out) -> int:
    spec = _spec_from_args(args)
    f = generate(spec)
    _header(out, "maximal", spec=spec.to_json(), t=args.t)
    if args.t is not None:
        _csv(out, ["t", "value"], [[_num(args.t), _num(box_maximal_average(f, args.t))]])
        return 0
    prof = dyadic_maximal_profile(f)
    rows = []
    for idx in np.ndindex(prof.values.shape):
        m = [lo + i for lo, i in zip(prof.lo, idx)]
        rows.append([" ".join(map(str, m)), _num(prof.values[idx])])
    _csv(out, ["m", "value"], rows)
    return 0


def _read_baseline(path: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    return dict(doc.get("max_ratio", {}))


def _write_baseline(path: str, reports, suite: str):
    """Store max ratios; keys from other suites already in the file are kept."""
    merged = _read_baseline(path) if os.path.exists(path) else {}
    merged.update(max_ratios(reports))
    doc = {"schema_version": SCHEMA_VERSION, "tool_version": __version__,
           "max_ratio": dict(sorted(merged.items()))}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def cmd_verify(args, out, err) -> int:
    corpus_path = args.corpus or _default_data("default_corpus.json")
    try:
        specs = load_corpus(corpus_path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        err.write(f"malformed corpus {corpus_path}: {exc}\n")
        return 2
    baseline_path = args.baseline or _default_data("baseline.json")
    reports = run_suite(args.suite, specs, jobs=args.jobs)

    wrote = False
    has_ratios = any(rep.mode == "ratio" for rep in reports)
    if args.update_baseline or (has_ratios and not os.path.exists(baseline_path)):
        _write_baseline(baseline_path, reports, args.suite)
        wrote = True
        err.write(f"baseline written to {baseline_path}\n")
    elif os.path.exists(baseline_path):
        reports = apply_baseline(reports, _read_baseline(baseline_path))

    _header(out, "verify", suite=args.suite, corpus=os.path.basename(corpus_path),
            entries=len(specs), baseline_written=wrote)
    _csv(out, REPORT_COLUMNS, [[rep.row()[c] for c in REPORT_COLUMNS] for rep in reports])
    failed = [rep for rep in reports if rep.status == "fail"]
    for rep in failed[:20]:
        err.write(f"FAIL {rep.key} lhs={rep.lhs!r} rhs={rep.rhs!r} {rep.note}\n")
    return 1 if failed else 0


def cmd_sharpness(args, out) -> int:
    if args.r_max - args.r_min < 4:
        raise UsageError("need r_max - r_min >= 4")
    rep = sharpness_experiment(args.n, args.p, range(args.r_min, args.r_max + 1))
    _header(out, "sharpness", n=args.n, p=args.p, r_min=args.r_min, r_max=args.r_max,
            slope=rep.slope, classical_slope=rep.classical_slope)
    _csv(out, ["r", "B", "block_sum", "classical"],
         [[r, _num(B), _num(bs), _num(c)] for r, B, bs, c in rep.rows])
    out.write(f"# slope {rep.slope!r} classical_slope {rep.classical_slope!r}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="steinlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"steinlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("norm", help="evaluate a norm of a generated function")
    _add_function_args(sp)
    sp.add_argument("--norm", choices=NORMS, default="lorentz")
    sp.add_argument("--p", type=_float, default=2.0)
    sp.add_argument("--q", type=_float, default=None)

    sp = sub.add_parser("rearrange", help="tabulate f* or the dyadic samples of the repeated one")
    _add_function_args(sp)
    sp.add_argument("--kind", choices=("1d", "repeated"), default="1d")

    sp = sub.add_parser("fourier", help="tabulate the transform of a 1-D function")
    _add_function_args(sp)

    sp = sub.add_parser("maximal", help="box-maximal averages")
    _add_function_args(sp)
    sp.add_argument("--t", type=_float, default=None, help="single threshold (all axes)")

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--corpus", default=None)
    sp.add_argument("--baseline", default=None)
    sp.add_argument("--update-baseline", action="store_true")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)

    sp = sub.add_parser("sharpness", help="growth of the staircase block mass")
    sp.add_argument("--r-min", type=int, default=8)
    sp.add_argument("--r-max", type=int, default=24)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--p", type=_float, default=1.5)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        if args.command == "verify":
            code = cmd_verify(args, buf, err)
        else:
            handler = {"norm": cmd_norm, "rearrange": cmd_rearrange, "fourier": cmd_fourier,
                       "maximal": cmd_maximal, "sharpness": cmd_sharpness}[args.command]
            code = handler(args, buf)
    except (FloatingPointError, OverflowError, ZeroDivisionError) as exc:
        err.write(f"numeric failure: {exc}\n")
        return 3
    except (UsageError, ValueError, TypeError, json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

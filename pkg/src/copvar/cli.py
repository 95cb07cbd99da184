"""Command-line front end.

Usage::

    copvar regions --p 0.5 [--plot regions.svg]
    copvar verify --p 0.2 --samples 10000 --seed 7
    copvar counterexample --p 0.8
    copvar kernel --p 0.25
    copvar laurent --p 0.5 --omega moebius:0.9

Exit codes: 0 success, 1 an asserted check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
import warnings

import numpy as np

from . import cofunc, extremal, regions, schwarz
from .series import DEFAULT_NODES

COMMANDS = ("regions", "verify", "counterexample", "kernel", "laurent")
BOUNDARY_SAMPLES = 64
KERNEL_GRID = 1024
MIN_SEARCH_GRID = 512


class CheckFailed(Exception):
    pass


def _cplx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _disc_dict(disc: regions.Disc) -> dict:
    return {"center": _cplx(disc.center), "radius": disc.radius, "leftmost": disc.leftmost}


# --- commands -------------------------------------------------------------


def run_regions(args) -> dict:
    p = args.p
    results, tangency = {}, {}
    expected_left = {
        "residue": -p * p / (1 - p * p),
        "a0": regions.re_a0_lower_bound(p),
        "a1": -regions.a1_modulus_bound(p),
    }
    for name, make in regions.DISCS.items():
        window = regions.WINDOWS[name]
        entry = {"p_max": window.p_max, "established": window.admits(p)}
        if window.admits(p):
            disc = make(p)
            entry.update(_disc_dict(disc))
            thetas = 2 * math.pi * np.arange(BOUNDARY_SAMPLES) / BOUNDARY_SAMPLES
            entry["boundary"] = [_cplx(regions.boundary_point(p, name, t)) for t in thetas]
            tangency[name] = {
                "leftmost": disc.leftmost,
                "expected": expected_left[name],
                "delta": abs(disc.leftmost - expected_left[name]),
            }
        else:
            entry["status"] = "not established"
        results[name] = entry
    results["bounds"] = {
        "re_a0_lower": regions.re_a0_lower_bound(p),
        "a1_modulus": regions.a1_modulus_bound(p),
    }
    results["tangency"] = tangency
    if args.plot:
        from .plot import regions_svg

        write_atomic(args.plot, regions_svg(p))
    return {"results": results, "violations": {}, "findings": []}


def run_verify(args) -> dict:
    report = regions.verify_samples(args.p, args.samples, args.seed, args.tol, args.max_degree)
    data = report.to_dict()
    violations = {k: v["violations"] for k, v in data["checks"].items() if v["violations"]}
    findings = [
        {"check": k, **v} for k, v in data["findings"].items() if v["exceedances"]
    ]
    out = {"results": data, "violations": violations, "findings": findings}
    if report.total_violations:
        raise CheckFailed(out)
    return out


def _oracle_value(p: float, x: float, which: str, nodes: int) -> float:
    candidate = cofunc.CoCandidate(p, schwarz.moebius(x))
    triple = cofunc.laurent_oracle(candidate, cofunc.default_contour(p, nodes))
    return triple.a_0 if which == "a0" else triple.a_1


def run_counterexample(args) -> dict:
    results, findings = {}, []
    for which in ("a0", "a1"):
        finding = extremal.counterexample_search(args.p, which, args.grid)
        if finding is None:
            results[which] = {"status": "none below threshold", "threshold": extremal.theoretical_threshold(which)}
            continue
        entry = finding.to_dict()
        oracle = _oracle_value(args.p, finding.x, which, args.nodes)
        entry["oracle_value"] = _cplx(oracle)
        entry["oracle_delta"] = abs(oracle - finding.value)
        entry["threshold"] = extremal.theoretical_threshold(which)
        results[which] = entry
        findings.append(entry)
    return {"results": results, "violations": {}, "findings": findings}


def run_kernel(args) -> dict:
    report = extremal.kernel_positivity(args.p, args.grid)
    root = extremal.s_root()
    results = report.summary()
    results.update(
        {
            "s_value": extremal.s_poly(args.p),
            "s_root": root,
            "within_window": args.p <= regions.A1_P_MAX,
            "theta": list(report.theta_grid),
            "values": [_cplx(v) for v in report.values],
        }
    )
    findings = []
    if not report.positive:
        findings.append({"negative_near_theta": report.argmin_theta, "min_real": report.min_real})
    if args.plot:
        from .plot import kernel_svg

        write_atomic(args.plot, kernel_svg(report))
    return {"results": results, "violations": {}, "findings": findings}


def run_laurent(args) -> dict:
    candidate = cofunc.CoCandidate(args.p, args.omega)
    closed = cofunc.laurent_closed(candidate, args.nodes)
    oracle = cofunc.laurent_oracle(candidate, cofunc.default_contour(args.p, args.nodes))
    names = ("a_minus1", "a_0", "a_1")
    deltas = {n: abs(a - b) for n, a, b in zip(names, closed.as_tuple(), oracle.as_tuple())}
    f0, fprime0 = cofunc.normalization_check(candidate, args.nodes)
    memberships = {}
    for (key, make), value in zip(regions.DISCS.items(), closed.as_tuple()):
        if not regions.WINDOWS[key].admits(args.p):
            memberships[key] = {"status": "not established"}
            continue
        excess = make(args.p).excess(value)
        if abs(excess) <= args.tol:
            status = "on boundary"
        else:
            status = "inside" if excess < 0 else "outside"
        memberships[key] = {"status": status, "excess": excess}
    results = {
        "omega": schwarz.format_spec(candidate.omega),
        "certified_member": candidate.certified_member,
        "closed": {n: _cplx(v) for n, v in zip(names, closed.as_tuple())},
        "oracle": {n: _cplx(v) for n, v in zip(names, oracle.as_tuple())},
        "deltas": deltas,
        "normalization": {"f0": _cplx(f0), "fprime0": _cplx(fprime0)},
        "memberships": memberships,
        "livingston_slack": regions.livingston_a0_check(args.p, closed.a_minus1, closed.a_0),
    }
    violations = {n: d for n, d in deltas.items() if d > args.tol}
    out = {"results": results, "violations": violations, "findings": []}
    if violations:
        raise CheckFailed(out)
    return out


RUNNERS = {
    "regions": run_regions,
    "verify": run_verify,
    "counterexample": run_counterexample,
    "kernel": run_kernel,
    "laurent": run_laurent,
}


# --- output ---------------------------------------------------------------


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(f"{prefix}.{i}", v, rows)
    else:
        rows.append((prefix, "" if value is None else value))


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, allow_nan=False) + "\n"
    rows: list = []
    _flatten("", doc, rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows((k, repr(v) if isinstance(v, float) else v) for k, v in rows)
    return buf.getvalue()


def write_atomic(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".copvar-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- argument handling ------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=float, required=True, help="pole location in (0, 1)")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--nodes", type=int, default=DEFAULT_NODES, help="quadrature nodes (even, >= 16)")
    common.add_argument("--tol", type=float, default=regions.MEMBERSHIP_ABS_TOL)
    common.add_argument("--omega", help="Schwarz function, e.g. moebius:0.9 or const:0.3+0.4i")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--plot", help="optional SVG output (regions, kernel)")
    common.add_argument("--max-degree", type=int, default=3, help="Blaschke degree for sampled specs")
    common.add_argument("--grid", type=int, default=None, help="grid size for counterexample/kernel scans")
    common.add_argument("--timings", action="store_true", help="record wall-clock timings (breaks byte-identity)")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copvar", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _validate(parser: argparse.ArgumentParser, args):
    if not (0.0 < args.p < 1.0):
        parser.error(f"--p must lie in (0, 1), got {args.p}")
    if args.samples < 1:
        parser.error("--samples must be >= 1")
    if args.nodes < 16 or args.nodes % 2:
        parser.error("--nodes must be an even integer >= 16")
    if not args.tol > 0:
        parser.error("--tol must be positive")
    if args.max_degree < 0:
        parser.error("--max-degree must be >= 0")
    if args.grid is None:
        args.grid = KERNEL_GRID if args.command == "kernel" else extremal.SEARCH_GRID
    if args.command == "kernel" and args.grid < 256:
        parser.error("--grid must be >= 256 for kernel")
    if args.grid < 2:
        parser.error("--grid must be >= 2")
    if args.command == "laurent":
        if not args.omega:
            parser.error("laurent requires --omega")
        try:
            args.omega = schwarz.parse_spec(args.omega)
        except ValueError as exc:
            parser.error(f"invalid --omega: {exc}")


def _config(args) -> dict:
    omega = args.omega
    if omega is not None and not isinstance(omega, str):
        omega = schwarz.format_spec(omega)
    return {
        "p": args.p,
        "samples": args.samples,
        "seed": args.seed,
        "nodes": args.nodes,
        "tol": args.tol,
        "omega": omega,
        "format": args.format,
        "max_degree": args.max_degree,
        "grid": args.grid,
        "boundary_samples": BOUNDARY_SAMPLES,
        "min_search_grid": MIN_SEARCH_GRID,
        "contour_radius": min(args.p, 1 - args.p) / 2,
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    start = time.perf_counter()
    status = 0
    with warnings.catch_warnings():
        warnings.simplefilter("always", cofunc.ConditioningWarning)
        try:
            body = RUNNERS[args.command](args)
        except CheckFailed as failed:
            body, status = failed.args[0], 1
        except ValueError as exc:
            print(f"copvar: error: {exc}", file=sys.stderr)
            return 2
    doc = {"command": args.command, "config": _config(args), **body}
    doc["timings"] = {"total_seconds": time.perf_counter() - start} if args.timings else {}
    doc = {k: doc[k] for k in ("command", "config", "results", "violations", "findings", "timings")}
    text = render(doc, args.format)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

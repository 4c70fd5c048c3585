"""Command-line front end.

Every command writes one JSON report (``sweep`` writes CSV) to ``--out`` or
stdout. Exit status: 0 on success, 1 on a domain error (the report is then
an ``{"error": {...}}`` object), 2 on I/O or parse errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys

import numpy as np

from . import __version__
from . import calculus, funclass, multipliers, stochastics
from .errors import NrittError
from .matrixkit import Operator, op_norm, resolvent
from .regions import NSECTOR, NSTOLZ, Region, max_angle

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


class InputError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_operator(path, norm=None):
    d = _load_json(path)
    try:
        op = Operator.from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad operator JSON in {path}: {exc}") from exc
    if norm:
        op = Operator(op.entries, norm, op.spectral)
    return op


def _load_operators(path, norm=None):
    d = _load_json(path)
    items = d if isinstance(d, list) else d.get("operators", [d])
    try:
        ops = [Operator.from_json(x) for x in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad operator JSON in {path}: {exc}") from exc
    if norm:
        ops = [Operator(o.entries, norm, o.spectral) for o in ops]
    return ops


def _load_functions(path):
    d = _load_json(path)
    items = d if isinstance(d, list) else [d]
    try:
        return [funclass.from_spec(x) for x in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad function spec in {path}: {exc}") from exc


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _matrix_json(a):
    a = np.asarray(a)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def _config_hash(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    h = hashlib.sha256(json.dumps(cfg, sort_keys=True, default=str).encode())
    for key in ("input", "function", "points"):
        path = getattr(args, key, None)
        if path:
            try:
                with open(path, "rb") as fh:
                    h.update(fh.read())
            except OSError:
                pass
    return h.hexdigest()


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(args, body):
    meta = {"config_hash": _config_hash(args), "seed": args.seed, "version": __version__, "command": args.command}
    doc = {"meta": meta}
    doc.update(body)
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _ritt_kind(args):
    return NSTOLZ if args.kind == "ritt" else NSECTOR


# --------------------------------------------------------------------------- commands


def cmd_classify(args):
    op = _load_operator(args.input, args.norm)
    grid = calculus.angle_grid(args.n, args.grid, _ritt_kind(args))
    fn = calculus.classify_ritt if args.kind == "ritt" else calculus.classify_sectorial
    rep = fn(op, args.n, grid, args.density)
    return _report(args, rep.to_json())


def _single_function(args):
    if not args.function:
        raise InputError("--function is required")
    fs = _load_functions(args.function)
    if len(fs) != 1:
        raise InputError("--function must hold exactly one function spec")
    return fs[0]


def cmd_apply(args):
    op = _load_operator(args.input, args.norm)
    f = _single_function(args)
    if args.kind == "sectorial":
        val, info = calculus.apply_sectorial(op, f, args.n, args.alpha, args.gamma, args.beta, args.tol, full_output=True)
    elif args.extended:
        val, info = calculus.apply_extended(op, f, args.n, args.alpha, args.gamma, args.beta, args.tol, full_output=True)
    else:
        val, info = calculus.apply_ritt(op, f, args.n, args.alpha, args.gamma, args.beta, args.tol, full_output=True)
    return _report(
        args,
        {
            "result": _matrix_json(val),
            "nodes": info.nodes,
            "error_estimate": info.error,
            "angles": {"type": info.angles[0], "contour": info.angles[1], "certificate": info.angles[2]},
        },
    )


def cmd_transfer(args):
    op = _load_operator(args.input, args.norm)
    f = _single_function(args)
    res = calculus.transfer_check(op, f, args.n, args.alpha, args.gamma, args.beta, args.tol)
    return _report(args, {"deviation": res.deviation, "lhs": _matrix_json(res.lhs), "rhs": _matrix_json(res.rhs)})


def cmd_sweep(args):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    if args.rule:
        seq = multipliers.sequence_from_rule(args.rule, args.dim)
        thetas = np.linspace(-math.pi, math.pi, args.grid + 2)[1:]
        thetas = thetas[np.abs(thetas) > 1e-12]
        w.writerow(["angle", "bound", "K_lower", "nodes", "actual", "profile"])
        for row in multipliers.ritt_bound_profile(seq, thetas, args.norm or "p2"):
            w.writerow([repr(row.theta), repr(row.bound), "", 0, repr(row.actual), repr(row.profile)])
    else:
        op = _load_operator(args.input, args.norm)
        family = funclass.stolz_test_family(3) + [funclass.const(1.0)]
        if args.function:
            family += _load_functions(args.function)
        alpha = calculus.type_angle(op, NSTOLZ, args.n)
        if alpha is None:
            raise calculus.NotClassifiable("operator is not n-Ritt on the default grid")
        w.writerow(["angle", "bound", "K_lower", "nodes"])
        for g in calculus.angle_grid(args.n, args.grid, NSTOLZ):
            if g <= alpha:
                continue
            region = Region(NSTOLZ, args.n, float(g))
            bound = calculus._resolvent_bound(op, region, args.density, ritt=True)
            nodes = 0
            ratios = []
            for f in family:
                val, info = calculus.apply_extended(op, f, args.n, alpha, float(g), None, args.tol, full_output=True)
                nodes += info.nodes
                den = float(funclass.sup_norm(f, region))
                ratios.append(op_norm(val) / den if den > 0 else 0.0)
            w.writerow([repr(float(g)), repr(bound), repr(max(ratios)), nodes])
    return out.getvalue()


def cmd_rbound(args):
    ops = _load_operators(args.input, args.norm)
    family_desc = "operators"
    if len(ops) == 1 and args.resolvent_family:
        T = ops[0]
        alpha = calculus.type_angle(T, NSTOLZ, args.n)
        if alpha is None:
            raise calculus.NotClassifiable("operator is not n-Ritt on the default grid")
        beta = args.beta if args.beta is not None else 0.5 * (alpha + max_angle(NSTOLZ, args.n))
        lams = calculus.shell_points(Region(NSTOLZ, args.n, beta), density=4)
        ops = [Operator((l - 1) * resolvent(T, l).value, T.norm_kind) for l in lams]
        family_desc = f"(l-1)R(l,T) on {len(ops)} shell points, beta={beta!r}"
    est = stochastics.estimate_r_bound(ops, trials=args.trials, family_size_max=args.family_size, seed=args.seed)
    return _report(
        args,
        {"C_lower": est.C_lower, "family": family_desc, "trials": est.trials, "witness_indices": est.witness["indices"]},
    )


def cmd_quadratic(args):
    op = _load_operator(args.input, args.norm)
    if not args.function:
        raise InputError("--function is required")
    fam = _load_functions(args.function)
    if args.gamma is None:
        raise InputError("--gamma is required")
    region = Region(_ritt_kind(args), args.n, args.gamma)
    est = stochastics.estimate_quadratic_calculus(op, region, fam, x_samples=args.trials, seed=args.seed, tol=args.tol)
    return _report(args, {"C_lower": est.C_lower, "square_sup": est.witness["square_sup"], "samples": est.trials})


def cmd_multiplier(args):
    seq = multipliers.sequence_from_rule(args.rule, args.dim)
    op = multipliers.multiplier(seq, args.norm or "p2")
    body = {"operator": op.to_json(), "bv_norm": seq.bv_norm}
    if args.classify:
        body["classify"] = calculus.classify_ritt(op, 1).to_json()
    return _report(args, body)


def cmd_carleson(args):
    d = _load_json(args.points)
    pts = d["points"] if isinstance(d, dict) else d
    try:
        z = np.array([complex(p[0], p[1]) if isinstance(p, list) else complex(p) for p in pts])
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"bad points in {args.points}: {exc}") from exc
    deltas = [multipliers.carleson_delta(z, j) for j in range(z.size)]
    return _report(args, {"delta_min": min(deltas), "deltas": deltas, "argmin": int(np.argmin(deltas))})


# --------------------------------------------------------------------------- parser


def _common(p):
    p.add_argument("--input", help="operator JSON")
    p.add_argument("--function", help="function spec JSON (object or list)")
    p.add_argument("--n", type=int, default=1, help="multiplicity n of the regions")
    p.add_argument("--kind", choices=("ritt", "sectorial"), default="ritt")
    p.add_argument("--alpha", type=float, help="type angle (default: from the spectrum)")
    p.add_argument("--gamma", type=float, help="certificate angle")
    p.add_argument("--beta", type=float, help="contour angle")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=stochastics.DEFAULT_SEED)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--grid", type=int, default=calculus.GRID_SIZE, help="number of grid angles")
    p.add_argument("--density", type=int, default=calculus.DEFAULT_DENSITY)
    p.add_argument("--norm", choices=("p1", "p2", "pinf"), help="override the operator's norm kind")


def build_parser():
    parser = argparse.ArgumentParser(prog="nritt", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in [
        ("classify", cmd_classify, "classify an operator as n-Ritt or n-sectorial"),
        ("apply", cmd_apply, "evaluate a function of an operator by contour quadrature"),
        ("transfer", cmd_transfer, "compare f(I-T) with f(1-.)(T)"),
        ("sweep", cmd_sweep, "CSV sweep of calculus-norm estimates or a multiplier profile"),
        ("rbound", cmd_rbound, "lower estimate of an R-bound"),
        ("quadratic", cmd_quadratic, "lower estimate of the quadratic-calculus constant"),
        ("carleson", cmd_carleson, "Carleson separation constant of half-plane points"),
    ]:
        p = sub.add_parser(name, help=help_)
        _common(p)
        p.set_defaults(func=fn)
        if name == "apply":
            p.add_argument("--extended", action="store_true", help="allow psi = c + phi (constant part at 1)")
        if name == "sweep":
            p.add_argument("--rule", help="multiplier rule in n; sweeps the unit-circle profile instead")
            p.add_argument("--dim", type=int, default=10)
        if name in ("rbound", "quadratic"):
            p.add_argument("--trials", type=int, default=64)
            p.add_argument("--family-size", type=int, default=3)
        if name == "rbound":
            p.add_argument(
                "--resolvent-family", action="store_true",
                help="use the sampled family (l-1)R(l,T) of a single operator",
            )
        if name == "carleson":
            p.add_argument("--points", required=True, help="JSON list of points ([re, im] or numbers)")

    mp = sub.add_parser("multiplier", help="diagonal Schauder multipliers")
    msub = mp.add_subparsers(dest="action", required=True)
    gen = msub.add_parser("gen", help="generate a multiplier operator from a rule")
    gen.add_argument("--rule", required=True, help='e.g. "1-2^-n"')
    gen.add_argument("--dim", type=int, required=True)
    gen.add_argument("--norm", choices=("p1", "p2", "pinf"))
    gen.add_argument("--classify", action="store_true", help="also classify it as a Ritt operator")
    gen.add_argument("--seed", type=int, default=stochastics.DEFAULT_SEED)
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_multiplier)
    return parser


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    try:
        text = args.func(args)
    except InputError as exc:
        sys.stderr.write(f"nritt: {exc}\n")
        return EXIT_IO
    except NrittError as exc:
        err = {"error": {"type": exc.code, "message": str(exc)}}
        try:
            _emit(args, _report(args, err))
        except OSError:
            pass
        return EXIT_DOMAIN
    try:
        _emit(args, text)
    except OSError as exc:
        sys.stderr.write(f"nritt: cannot write output: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

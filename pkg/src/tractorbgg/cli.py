"""tractorbgg command line: spectrum, prolong, verify.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or input error.
Reports are JSON (schema_version 1) unless --format table is given.
"""
from __future__ import annotations

import argparse
import json
import sys

from .checks import (SUITE_FUNCS, SUITES, grassmann_chart, grassmann_spectrum_checks,
                     prolongation_closed_form, projective_spectrum_checks)
from .connection import ConnectionDatum, InvariantError, complex_of
from .geometries import (flat_patch, load_geometry, metrizable_patch, sample_projective_patch,
                         unimodular_example)
from .gmodule import adjoint_module, grassmann_lambda2, projective_sym2
from .graded_lie import build_sl_grassmann, build_sl_projective
from .prolong import ProlongationError, prolong_connection, verify_normalized
from .report import Report, serialize

MODULES = ("sym2-std", "lambda2-std", "adjoint")
N_RANGE = range(2, 9)
Q_RANGE = range(3, 7)


class UsageError(Exception):
    pass


def parse_seeds(text):
    """'7' -> [7]; '1..5' -> [1, 2, 3, 4, 5]."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            a, b = int(a), int(b)
            if b < a:
                raise ValueError
            return list(range(a, b + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}; use an integer or a..b") from None


def _geometry_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--projective", action="store_true", help="projective geometry, sl(n+1)")
    g.add_argument("--grassmann", action="store_true", help="Grassmannian geometry, sl(2+q)")
    p.add_argument("-n", type=int, default=3)
    p.add_argument("-q", type=int, default=3)
    p.add_argument("--module", choices=MODULES, default=None)
    p.add_argument("--format", choices=("json", "table"), default="json")


def build_parser():
    ap = argparse.ArgumentParser(prog="tractorbgg", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="exact Kostant Laplacian eigenvalues per slot")
    _geometry_flags(sp)
    sp.add_argument("-j", type=int, default=0, help="chain degree")

    pp = sub.add_parser("prolong", help="prolongation connection for a geometry")
    _geometry_flags(pp)
    src = pp.add_mutually_exclusive_group()
    src.add_argument("--builtin", choices=("flat", "projective-random", "metrizable"))
    src.add_argument("--geometry", metavar="FILE", help="projective geometry JSON")
    pp.add_argument("--seed", type=int, default=0)
    pp.add_argument("--lift", choices=("harmonic", "skewed"), default="harmonic")

    vp = sub.add_parser("verify", help="run an acceptance suite")
    vp.add_argument("suite", help="one of: " + ", ".join(SUITES + ("all",)))
    vp.add_argument("--seed", type=parse_seeds, default=[0])
    vp.add_argument("--degree-bound", type=int, default=None)
    vp.add_argument("--format", choices=("json", "table"), default="json")
    return ap


def _algebra(args):
    if args.grassmann:
        if args.q not in Q_RANGE:
            raise UsageError(f"q must lie in {Q_RANGE.start}..{Q_RANGE.stop - 1}")
        return "grassmann", build_sl_grassmann(args.q)
    if args.n not in N_RANGE:
        raise UsageError(f"n must lie in {N_RANGE.start}..{N_RANGE.stop - 1}")
    return "projective", build_sl_projective(args.n)


def _module(kind, g, name):
    default = "lambda2-std" if kind == "grassmann" else "sym2-std"
    name = name or default
    if name == "adjoint":
        return name, adjoint_module(g)
    if name != default:
        raise UsageError(f"module {name} is not available for the {kind} geometry")
    return name, grassmann_lambda2(g) if kind == "grassmann" else projective_sym2(g)


def cmd_spectrum(args):
    kind, g = _algebra(args)
    name, V = _module(kind, g, args.module)
    cx = complex_of(V)
    if not 0 <= args.j <= cx.m:
        raise UsageError(f"j must lie in 0..{cx.m}")
    size = args.q if kind == "grassmann" else args.n
    params = {"geometry": kind, "n" if kind == "projective" else "q": size,
              "module": name, "j": args.j}
    rep = Report("spectrum", params)
    spec = cx.spectrum(args.j)
    rep.data["spectrum"] = {slot: {str(e): m for e, m in sorted(d.items())}
                            for slot, d in sorted(spec.items())}
    if name != "adjoint" and args.j in (0, 1):
        checks = (grassmann_spectrum_checks(size) if kind == "grassmann"
                  else projective_spectrum_checks(size))
        for key, (ok, w) in checks.items():
            if key.startswith(f"j{args.j}"):
                rep.add(f"spectrum.{key}", ok, w)
    if kind == "grassmann":
        rep.data["sign_convention"] = -1
    return rep


def _projective_patch(args):
    if args.geometry:
        try:
            with open(args.geometry) as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read {args.geometry}: {e}") from None
        try:
            return load_geometry(text), "file"
        except (ValueError, KeyError, TypeError) as e:
            raise UsageError(f"invalid geometry: {e}") from None
    which = args.builtin or "flat"
    if args.n not in N_RANGE:
        raise UsageError(f"n must lie in {N_RANGE.start}..{N_RANGE.stop - 1}")
    if which == "flat":
        return flat_patch(args.n), which
    if which == "projective-random":
        return sample_projective_patch(args.n, args.seed), which
    g, F = unimodular_example(args.n)
    return metrizable_patch(g, F).patch, which


def cmd_prolong(args):
    if args.grassmann:
        if args.geometry or args.builtin not in (None, "flat"):
            raise UsageError("Grassmann prolongation only supports the flat chart builtin")
        if args.q not in Q_RANGE:
            raise UsageError(f"q must lie in {Q_RANGE.start}..{Q_RANGE.stop - 1}")
        gauge = grassmann_chart(args.q, args.seed)
        kind, source = "grassmann", "chart"
    else:
        gauge, source = _projective_patch(args)
        kind = "projective"
    name, V = _module(kind, gauge.algebra, args.module)
    size = gauge.q if kind == "grassmann" else gauge.n
    params = {"geometry": kind, "source": source, "n" if kind == "projective" else "q": size,
              "module": name, "seed": args.seed, "lift": args.lift}
    rep = Report("prolong", params)
    if kind == "projective":
        rep.add("patch.weyl_traces", gauge.weyl_traces_vanish())
        rep.add("patch.first_bianchi", gauge.first_bianchi_holds())
    base = ConnectionDatum(gauge, V)
    try:
        res = prolong_connection(base, args.lift, args.seed)
    except (ProlongationError, InvariantError) as e:
        rep.add("prolong.construction", False, {"error": str(e)})
        return rep
    rep.add("prolong.certificate", *verify_normalized(res.connection))
    if kind == "projective" and name == "sym2-std":
        ok, w, _ = prolongation_closed_form(gauge, args.lift, args.seed)
        rep.add("prolong.closed_form", ok, w)
    rep.data["phi_nnz"] = res.phi.nnz
    rep.data["step_homogeneities"] = [h for h, _ in res.steps]
    if args.format == "json":
        rep.data["phi"] = _phi_entries(res.phi)
        rep.data["steps"] = [{"homogeneity": h, "correction": _phi_entries(c)} for h, c in res.steps]
    rep.data["phi_is_zero"] = res.phi.is_zero()
    return rep


def _phi_entries(m):
    return [[i, j, serialize(v)] for i, j, v in sorted(m.items(), key=lambda t: (t[0], t[1]))]


def cmd_verify(args):
    names = SUITES if args.suite == "all" else (args.suite,)
    if any(n not in SUITE_FUNCS for n in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}, all")
    rep = Report("verify", {"suite": args.suite, "seeds": args.seed,
                            "degree_bound": args.degree_bound})
    for n in names:
        SUITE_FUNCS[n](rep, args.seed, args.degree_bound)
    return rep


COMMANDS = {"spectrum": cmd_spectrum, "prolong": cmd_prolong, "verify": cmd_verify}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        rep = COMMANDS[args.command](args)
        text = rep.to_table() if args.format == "table" else rep.to_json()
    except UsageError as e:
        print(f"tractorbgg: error: {e}", file=sys.stderr)
        return 2
    print(text)
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())

"""
Command line interface, installed as ``fh``.

Complex scalars are written ``re,im`` (a bare real number is also accepted).
A symbol is given either as a JSON document (``--symbol file.json`` or inline
JSON) or with ``--kind`` and the parameter flags.

Exit status: 0 success, 1 a check or computation failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import eigen
from . import harness
from . import symbols as sym
from . import toeplitz as tb
from . import wiener_hopf as wh
from .errors import ConfigError, FHError, ParameterOutOfRange
from .symbols import SymbolKind, SymbolSpec

_KINDS = {k.value.lower(): k for k in SymbolKind}
_KINDS.update({"type1": SymbolKind.TYPE_I, "type2": SymbolKind.TYPE_II,
               "type3": SymbolKind.TYPE_III})


def complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")


def singularity_arg(text: str):
    try:
        theta, a = text.split(":")
        return float(theta), float(a)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected theta:alpha_j but got {text!r}") from None


def _add_symbol_args(p):
    g = p.add_argument_group("symbol")
    g.add_argument("--symbol", help="symbol JSON file or inline JSON object")
    g.add_argument("--kind", help="Singular, TypeI, TypeII or TypeIII")
    g.add_argument("--alpha", type=complex_arg, default=0j)
    g.add_argument("--beta", type=complex_arg, default=0j)
    g.add_argument("--delta", type=complex_arg, default=0j)
    g.add_argument("--gamma", type=complex_arg, default=0j)
    g.add_argument("--z0-angle", type=float, default=0.0, help="TypeII z0 = exp(i angle)")
    g.add_argument("--b-kind", default="one", choices=sym.B_KINDS)
    g.add_argument("--b-power", type=int, default=0)
    g.add_argument("--sing", type=singularity_arg, action="append", default=[],
                   metavar="THETA:ALPHA", help="TypeIII singularity (repeatable)")


def _symbol(args) -> SymbolSpec:
    if args.symbol:
        text = args.symbol
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        try:
            spec = SymbolSpec.from_dict(json.loads(text))
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"bad symbol JSON: {exc}") from exc
    else:
        if not args.kind:
            raise ConfigError("give --symbol or --kind")
        kind = _KINDS.get(args.kind.lower())
        if kind is None:
            raise ConfigError(f"unknown kind {args.kind!r}")
        spec = SymbolSpec(kind, alpha=args.alpha, beta=args.beta, delta=args.delta,
                          gamma=args.gamma, z0=np.exp(1j * args.z0_angle),
                          b_kind=args.b_kind, b_power=args.b_power,
                          singularities=tuple(args.sing))
    return sym.validate(spec)


def _writer(path):
    if path:
        fh = open(path, "w", newline="")
        return fh, csv.writer(fh, lineterminator="\n")
    return None, csv.writer(sys.stdout, lineterminator="\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_symbol_eval(args):
    spec = _symbol(args)
    pts = list(args.z) + [np.exp(1j * t) for t in args.angle]
    if not pts:
        raise ConfigError("give at least one --z or --angle")
    fh, w = _writer(args.out)
    w.writerow(["re_z", "im_z", "re_a", "im_a"])
    for z in pts:
        a = sym.evaluate(spec, z)
        w.writerow([repr(float(z.real)), repr(float(z.imag)), repr(float(a.real)),
                    repr(float(a.imag))])
    if fh:
        fh.close()
    return 0


def cmd_symbol_grid(args):
    spec = _symbol(args)
    nodes = sym.grid_nodes(spec, args.m)
    vals = sym.evaluate_grid(spec, args.m)
    fh, w = _writer(args.out)
    w.writerow(["k", "re_z", "im_z", "re_a", "im_a"])
    for k, (z, a) in enumerate(zip(nodes, vals)):
        w.writerow([k, repr(float(z.real)), repr(float(z.imag)), repr(float(a.real)),
                    repr(float(a.imag))])
    if fh:
        fh.close()
    return 0


def cmd_coeffs(args):
    spec = _symbol(args)
    T = tb.toeplitz_from_symbol(spec, args.n, args.m, tol=args.tol)
    if args.out:
        tb.write_coefficients(args.out, T)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["offset", "re", "im"])
        for k in range(-(T.n - 1), T.n):
            c = T.t(k)
            w.writerow([k, repr(float(c.real)), repr(float(c.imag))])
    if args.decay:
        rep = tb.decay_check(T.coeffs)
        print(f"decay exponent {rep.exponent:.4f} +- {rep.stderr:.4f}, "
              f"summable={rep.summable}", file=sys.stderr)
    return 0


def cmd_spectrum(args):
    if args.coeffs:
        T = tb.read_coefficients(args.coeffs)
    else:
        if args.n is None:
            raise ConfigError("give --n with a symbol, or --coeffs")
        T = tb.toeplitz_from_symbol(_symbol(args), args.n, args.m)
    spectrum = eigen.full_spectrum(T, want_left=args.left)
    if args.out:
        eigen.write_spectrum(args.out, spectrum, args.vectors)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["index", "re_lambda", "im_lambda", "residual"])
        for i, p in enumerate(spectrum):
            w.writerow([i, repr(float(p.eigenvalue.real)),
                        repr(float(p.eigenvalue.imag)), repr(float(p.residual))])
    return 0


def _indices(args, n):
    if args.rho is not None:
        if not 0 < args.rho < 1:
            raise ConfigError("rho must satisfy 0 < rho < 1")
        return [int(np.floor(args.rho * n))]
    if not args.l:
        raise ConfigError("give --l or --rho")
    return args.l


def cmd_predict(args):
    spec = _symbol(args)
    preds = [asy.predict(spec, l, n) for n in args.n for l in _indices(args, n)]
    if args.out:
        asy.write_predictions(args.out, preds, full=args.full)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["family", "l", "n", "re_p", "im_p", "re_E", "im_E"])
        for p in preds:
            E = p.E_full if args.full else p.E_l
            w.writerow([p.family, p.l, p.n, repr(float(p.p_l.real)), repr(float(p.p_l.imag)),
                        repr(float(E.real)), repr(float(E.imag))])
    return 0


def cmd_wh_factorize(args):
    spec = _symbol(args)
    if args.E is not None:
        E = args.E
    elif args.n is not None and args.l is not None:
        E = asy.eigenvalue_full(spec, args.l, args.n)
    else:
        raise ConfigError("give --E, or --n and --l for the predicted eigenvalue")
    S = wh.ShiftedSymbol.from_spec(spec, E, args.m)
    v = wh.winding_number(S)
    F = wh.factorize(S, v)
    doc = F.to_dict()
    if args.out:
        wh.write_factorization(args.out, F)
    else:
        json.dump(doc, sys.stdout, indent=1)
        print()
    if args.vector:
        if args.n is None:
            raise ConfigError("--vector needs --n")
        psi = wh.eigvec_from_factorization(F, args.n)
        with open(args.vector, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["j", "re_psi", "im_psi"])
            for j, c in enumerate(psi):
                w.writerow([j, repr(float(c.real)), repr(float(c.imag))])
    print(f"v = {v}, reconstruction error {F.reconstruction_error:.3e}", file=sys.stderr)
    return 0


def cmd_verify_run(args):
    cfg = harness.load_config(args.config)
    if args.out:
        cfg = harness.validate_config(harness.ExperimentConfig(
            **{**cfg.__dict__, "output_dir": args.out}))
    report = harness.run(cfg)
    for name, c in report.checks.items():
        print(f"{'PASS' if c['passed'] else 'FAIL'} {name}: {c['detail']}")
    for t in report.table:
        if t["flagged"]:
            print(f"FLAG table row {t['row']} (n={t['n']}, l={t['l']}): {t['note']}")
    return 0 if report.passed else 1


def cmd_table(args):
    z0 = np.exp(1j * args.z0_angle)
    rows = harness.table_type2(z0, args.delta, args.gamma, args.l, args.n)
    w = csv.writer(sys.stdout, lineterminator="\n")
    fields = ["row", "b_kind", "re_E_computed", "im_E_computed", "re_E_closed_form",
              "im_E_closed_form", "diff", "asserted", "flagged", "note"]
    w.writerow(fields)
    for r in rows:
        w.writerow([harness._fmt(r[k]) for k in fields])
    bad = [r for r in rows if r["asserted"] and (r["diff"] is None or r["diff"] >= 1e-10)]
    return 1 if bad else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fh", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("symbol", help="evaluate a symbol")
    ssub = ps.add_subparsers(dest="action", required=True)
    pe = ssub.add_parser("eval", help="values at given points of the circle")
    _add_symbol_args(pe)
    pe.add_argument("--z", type=complex_arg, action="append", default=[])
    pe.add_argument("--angle", type=float, action="append", default=[])
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_symbol_eval)
    pg = ssub.add_parser("grid", help="values on the offset grid")
    _add_symbol_args(pg)
    pg.add_argument("--m", type=int, default=64)
    pg.add_argument("--out")
    pg.set_defaults(func=cmd_symbol_grid)

    pc = sub.add_parser("coeffs", help="Fourier coefficients t_{-(n-1)}..t_{n-1}")
    _add_symbol_args(pc)
    pc.add_argument("--n", type=int, required=True)
    pc.add_argument("--m", type=int)
    pc.add_argument("--tol", type=float)
    pc.add_argument("--decay", action="store_true", help="print a decay report to stderr")
    pc.add_argument("--out")
    pc.set_defaults(func=cmd_coeffs)

    pp = sub.add_parser("spectrum", help="all eigenpairs of T_n")
    _add_symbol_args(pp)
    pp.add_argument("--n", type=int)
    pp.add_argument("--m", type=int)
    pp.add_argument("--coeffs", help="coefficient CSV instead of a symbol")
    pp.add_argument("--left", action="store_true")
    pp.add_argument("--out")
    pp.add_argument("--vectors", help="companion eigenvector CSV (with --out)")
    pp.set_defaults(func=cmd_spectrum)

    pr = sub.add_parser("predict", help="asymptotic momenta and eigenvalues")
    _add_symbol_args(pr)
    pr.add_argument("--n", type=int, action="append", required=True)
    pr.add_argument("--l", type=int, action="append", default=[])
    pr.add_argument("--rho", type=float)
    pr.add_argument("--full", action="store_true", help="E at the full complex momentum")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_predict)

    pw = sub.add_parser("wh", help="Wiener-Hopf factorization")
    wsub = pw.add_subparsers(dest="action", required=True)
    pf = wsub.add_parser("factorize")
    _add_symbol_args(pf)
    pf.add_argument("--E", type=complex_arg)
    pf.add_argument("--n", type=int)
    pf.add_argument("--l", type=int)
    pf.add_argument("--m", type=int, default=4096)
    pf.add_argument("--out")
    pf.add_argument("--vector", help="write the reconstructed eigenvector CSV here")
    pf.set_defaults(func=cmd_wh_factorize)

    pv = sub.add_parser("verify", help="experiment runner")
    vsub = pv.add_subparsers(dest="action", required=True)
    prun = vsub.add_parser("run")
    prun.add_argument("--config", required=True)
    prun.add_argument("--out", help="output directory (overrides the config)")
    prun.set_defaults(func=cmd_verify_run)

    pt = sub.add_parser("table", help="Type II eigenvalues for the tabulated b functions")
    pt.add_argument("--z0-angle", type=float, required=True)
    pt.add_argument("--delta", type=complex_arg, required=True)
    pt.add_argument("--gamma", type=complex_arg, required=True)
    pt.add_argument("--l", type=int, required=True)
    pt.add_argument("--n", type=int, required=True)
    pt.set_defaults(func=cmd_table)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FHError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 ok, 1 computation error, 2 bad arguments, 3 failing reproduce rows.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, catalog, report
from .errors import BadK, IsoWillmoreError, NoFormula, UnknownName
from .potential import SpaceFormClass, classify_space_form

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_REPRO = 0, 1, 2, 3


class UsageError(Exception):
    """Bad argument value detected after parsing; message names the flag."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _family(s):
    if s not in catalog.FAMILIES:
        raise argparse.ArgumentTypeError(f"unknown family {s!r} (choose from {', '.join(catalog.FAMILIES)})")
    return s


def _finite(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {s!r}")
    return v


def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {s!r}")
    return v


def _domain(s):
    """disk:R or annulus:A:B."""
    parts = s.split(":")
    try:
        if parts[0] == "disk" and len(parts) == 2:
            R = float(parts[1])
            if R > 0 and math.isfinite(R):
                return ("disk", R)
        elif parts[0] == "annulus" and len(parts) == 3:
            a, b = float(parts[1]), float(parts[2])
            if 0 <= a < b and math.isfinite(b):
                return ("annulus", a, b)
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected disk:R or annulus:A:B with 0 <= A < B, got {s!r}")


def _coords(s):
    try:
        return report.parse_coords(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _member_args(p, group=True, t=True):
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--k", type=int, default=None, help="family index k >= 2 (ignored for moebius)")
    if group:
        p.add_argument("--group", choices=("circle", "boost"), default=None)
    if t:
        p.add_argument("--t", type=_finite, default=0.0)


def build_parser():
    ap = _Parser(prog="isowillmore", description="Isotropic Willmore spheres in S^4 and their minimal pieces in H^4.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("catalog", help="list the example families")

    p = sub.add_parser("classify", help="space form in which a dressed member is minimal")
    _member_args(p)
    p.add_argument("--tol", type=_finite, default=1e-6,
                   help="relative singular-value cutoff of the minimality system (t given to ~7 digits needs ~1e-6)")

    p = sub.add_parser("mesh", help="export a polar grid of the surface as OBJ")
    _member_args(p)
    p.add_argument("--domain", type=_domain, required=True, help="disk:R or annulus:A:B")
    p.add_argument("--nr", type=_positive_int, default=64)
    p.add_argument("--ntheta", type=_positive_int, default=64)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("obj",), default="obj")
    p.add_argument("--coords", type=_coords, default=None, help="poincare[:i,j,k] or ambient3:i,j,k")
    p.add_argument("--form", choices=("auto", "sphere", "hyperbolic"), default="auto")

    p = sub.add_parser("energy", help="Willmore energy in units of pi")
    _member_args(p, group=False)
    p.add_argument("--component", choices=("1", "2", "3", "total"), default=None)

    p = sub.add_parser("sweep", help="component energies over a t-grid (hyperbolic family, boost)")
    p.add_argument("--family", type=_family, default="hyperbolic_family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t-from", type=_finite, required=True)
    p.add_argument("--t-to", type=_finite, required=True)
    p.add_argument("--steps", type=_positive_int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-plot", action="store_true", help="skip the PNG next to the CSV")

    p = sub.add_parser("appendix", help="large-k energy estimate findings")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("solve-energy", help="t' with W(M1) = target (units of pi)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--target", type=_finite, required=True, help="W0 / pi")

    p = sub.add_parser("reproduce", help="evaluate every expected value; JSON report plus figures")
    p.add_argument("--out", required=True)
    p.add_argument("--no-figures", action="store_true")
    return ap


# ----------------------------------------------------------------- commands


def _check_k(args):
    if args.family == "moebius":
        return None
    if args.k is None:
        raise UsageError(f"argument --k: required for {args.family}")
    if args.k < 2:
        raise UsageError(f"argument --k: must be >= 2, got {args.k}")
    return args.k


def cmd_catalog(args, out):
    for name, desc in catalog.FAMILIES.items():
        k = None if name == "moebius" else 2
        forms = ", ".join(catalog.available_formulas(name, k)) or "-"
        label = "formulas" if k is None else f"formulas (k={k})"
        print(f"{name}\t{desc}\tnative group: {catalog.NATIVE_GROUP[name]}\t{label}: {forms}", file=out)
    return EXIT_OK


def cmd_classify(args, out):
    k = _check_k(args)
    p = report.member(args.family, k, args.t, args.group)
    if not 0 < args.tol < 1:
        raise UsageError(f"argument --tol: must lie in (0, 1), got {args.tol}")
    print(classify_space_form(p, args.tol), file=out)
    return EXIT_OK


def cmd_mesh(args, out):
    from .weierstrass import grid_evaluate

    k = _check_k(args)
    p = report.member(args.family, k, args.t, args.group)
    if args.form == "auto":
        form = SpaceFormClass.Hyperbolic if classify_space_form(p) is SpaceFormClass.Hyperbolic else SpaceFormClass.Sphere
    else:
        form = SpaceFormClass.Hyperbolic if args.form == "hyperbolic" else SpaceFormClass.Sphere
    coords = args.coords or (("poincare", (0, 1, 2)) if form is SpaceFormClass.Hyperbolic else ("ambient3", (0, 1, 2)))
    if coords[0] == "poincare" and form is not SpaceFormClass.Hyperbolic:
        raise UsageError("argument --coords: poincare needs a hyperbolic surface (use --form hyperbolic or ambient3)")
    if max(coords[1]) > (3 if coords[0] == "poincare" else 4):
        raise UsageError(f"argument --coords: index out of range in {coords[1]}")
    if args.nr < 2 or args.ntheta < 2:
        raise UsageError("argument --nr/--ntheta: need at least 2 nodes each")
    grid = grid_evaluate(p, args.domain, args.nr, args.ntheta, form)
    nv, nf = report.export_mesh(grid, args.format, coords, args.out)
    print(f"wrote {args.out}: {nv} vertices, {nf} faces ({form})", file=out)
    return EXIT_OK


def _moebius_components():
    e = report.moebius_energies()
    return e["W1"], e["W2"], e["W3"], e["total"]


def cmd_energy(args, out):
    from .energy import component_energies, surface_energy

    k = _check_k(args)
    if args.family == "hyperbolic_family":
        rep = component_energies(k, args.t)
        vals = (rep.W1, rep.W2, rep.W3, rep.total)
    elif args.family == "moebius":
        vals = _moebius_components()
    else:
        if args.component not in (None, "total"):
            raise UsageError("argument --component: sphere_family has a single component; use total")
        W = surface_energy(report.member(args.family, k, args.t), tol=1e-8)
        print(f"{report.fmt(W)}π", file=out)
        return EXIT_OK
    if args.component is None:
        for name, v in zip(("W1", "W2", "W3", "total"), vals):
            print(f"{name}\t{report.fmt(v)}π", file=out)
    else:
        v = vals[3] if args.component == "total" else vals[int(args.component) - 1]
        print(f"{report.fmt(v)}π", file=out)
    return EXIT_OK


def cmd_sweep(args, out):
    from .energy import energy_sweep

    if args.family != "hyperbolic_family":
        raise UsageError("argument --family: sweeps are defined for hyperbolic_family")
    if args.k < 2:
        raise UsageError(f"argument --k: must be >= 2, got {args.k}")
    ts = np.linspace(args.t_from, args.t_to, args.steps)
    rows = energy_sweep(args.k, ts)
    report.write_sweep_csv(rows, args.out)
    bad = [r for r in rows if r.error]
    msg = f"wrote {args.out}: {len(rows)} rows"
    if not args.no_plot:
        from . import plotting

        png = str(Path(args.out).with_suffix(".png"))
        plotting.plot_sweep([r for r in rows if r.error is None], png, k=args.k)
        msg += f", figure {png}"
    print(msg, file=out)
    for r in bad:
        print(f"t={report.fmt(r.t)}: {r.error}", file=sys.stderr)
    return EXIT_COMPUTE if bad else EXIT_OK


def cmd_appendix(args, out):
    from .energy import appendix_bound_report

    rep = appendix_bound_report(args.k)
    print(f"k={rep.k} t0={report.fmt(rep.t0)} a={rep.a:.6g} rho1={report.fmt(rep.rho1)}", file=out)
    print(f"I1={rep.I1:.9g} I2={rep.I2:.9g} R={rep.R:.9g} R_minorant={rep.R_minorant:.9g}", file=out)
    for name, (lhs, rhs, ok) in rep.findings.items():
        print(f"{'PASS' if ok else 'FAIL'}\t{name}\t{lhs:.9g}\t{rhs:.9g}", file=out)
    return EXIT_OK


def cmd_solve_energy(args, out):
    from .energy import find_component_roots, find_energy_bracket, radial_energy, solve_energy_target

    if args.k < 2:
        raise UsageError(f"argument --k: must be >= 2, got {args.k}")
    if args.target <= 0:
        raise UsageError("argument --target: must be positive")
    br = find_energy_bracket(args.k, args.target)
    t = solve_energy_target(args.k, args.target, br, tol=1e-10)
    r1, _ = find_component_roots(args.k, t)
    W = radial_energy(args.k, t, (0.0, r1), 1e-12)
    print(f"t={float(t)!r}\tW1={report.fmt(W)}π", file=out)
    return EXIT_OK


def cmd_reproduce(args, out):
    rep = report.reproduce(args.out, figures=not args.no_figures)
    s = rep.summary
    print(f"wrote {args.out}: {s['pass']} pass, {s['fail']} fail, {s['disputed']} disputed", file=out)
    for r in rep.rows:
        if r["mode"] == "disputed":
            print(f"DISPUTED {r['family']} {r['quantity']}: computed {r['computed']} matches {r['matched']}", file=out)
    for r in rep.failures():
        print(f"FAIL {r['family']} k={r['k']} t={r['t']!r} {r['quantity']}: expected {r['expected']} computed {r['computed']}", file=out)
    return EXIT_REPRO if s["fail"] else EXIT_OK


COMMANDS = {
    "catalog": cmd_catalog,
    "classify": cmd_classify,
    "mesh": cmd_mesh,
    "energy": cmd_energy,
    "sweep": cmd_sweep,
    "appendix": cmd_appendix,
    "solve-energy": cmd_solve_energy,
    "reproduce": cmd_reproduce,
}


def run(argv=None, out=None):
    """Parse argv, run the command, return the exit code."""
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"isowillmore {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownName, BadK, NoFormula) as exc:
        print(f"isowillmore {args.command}: error: argument {_flag_for(exc)}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"isowillmore {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (IsoWillmoreError, ArithmeticError) as exc:
        print(f"isowillmore {args.command}: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


def _flag_for(exc):
    return {BadK: "--k", UnknownName: "--family"}.get(type(exc), "--k")


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

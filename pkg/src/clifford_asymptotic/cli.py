"""Command-line front end: ``clifford-asymptotic <command> [flags]``."""

import argparse
import json
import math
import sys
from pathlib import Path

from . import verify as verification
from .errors import NonHyperbolic, PoleSingularity, StepUnderflow
from .export import export_lines, export_mesh
from .flow import (Branch, IntegratorOptions, integrate_line, poincare1, poincare2,
                   quad_coeff_extract, translation_number)
from .forms import fundamental_forms, hyperbolicity_scan, k_ext
from .surface import EPS_GUARD, paper_h, perturbed_jet
from .variational import paper_family, second_variation


def _human(x):
    x = float(x)
    if abs(x) < 1e-12:
        x = 0.0
    return f"{x:.6g}"


def _ladder(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ladder {text!r}; expected e.g. 0.02,0.01,0.005")


def _opts(args):
    tol = getattr(args, "tol", None)
    if tol is None:
        return IntegratorOptions()
    return IntegratorOptions(rtol=tol, atol=tol)


def _guard(args, eps_values):
    if args.override_eps_guard:
        return
    for eps in eps_values:
        if abs(eps) > EPS_GUARD:
            raise _Usage(f"|eps| = {eps:g} exceeds {EPS_GUARD}; use --override-eps-guard")


class _Usage(Exception):
    pass


def cmd_forms(args):
    _guard(args, [args.eps])
    fp = fundamental_forms(perturbed_jet(args.u, args.v, args.eps, paper_h(),
                                         allow_large_eps=args.override_eps_guard))
    vals = dict(E=fp.E, F=fp.F, G=fp.G, e=fp.e, f=fp.f, g=fp.g, K=k_ext(fp))
    print(" ".join(f"{k}={_human(v)}" for k, v in vals.items()))
    return 0


def cmd_scan(args):
    _guard(args, [args.eps])
    rep = hyperbolicity_scan(args.eps, paper_h(), args.grid or 64)
    rec = rep.to_record()
    for k, v in rec.items():
        print(f"{k}={v}")
    if args.out:
        Path(args.out).write_text(json.dumps(rec, indent=2) + "\n")
    return 0


def cmd_trace(args):
    _guard(args, [args.eps])
    curve = integrate_line(args.u, args.v, Branch.from_arg(args.branch), args.eps,
                           paper_h(), args.span, _opts(args))
    if args.out:
        curve.to_csv(args.out)
    print(f"samples={len(curve.t)} final_w={curve.final:.17g}")
    return 0


def cmd_poincare(args):
    eps_values = args.ladder or [args.eps]
    _guard(args, eps_values)
    h = paper_h()
    starts = [args.v0] if args.v0 is not None else verification.v0_grid(args.grid or 8)
    fn = poincare1 if args.branch == 1 else poincare2
    rows = []
    for eps in eps_values:
        for w0 in starts:
            d = fn(w0, eps, h, _opts(args)) - w0
            rows.append({"eps": eps, "w0": w0, "displacement": d})
            print(f"eps={_human(eps)} w0={_human(w0)} displacement={d:.17g} "
                  f"per_eps2={_human(d / eps**2) if eps else 'nan'}")
    if args.out:
        Path(args.out).write_text(json.dumps(rows, indent=2) + "\n")
    return 0


def cmd_rotation(args):
    _guard(args, [args.eps])
    est = translation_number(Branch.from_arg(args.branch), args.eps, paper_h(), args.iters, _opts(args))
    print(f"rho={est.value:.17g} error_bar={_human(est.error_bar)} iterations={est.iterations}")
    print(f"-12*pi*eps^2={_human(-12 * math.pi * args.eps**2)}")
    return 0


def cmd_coeff(args):
    ladder = args.ladder or list(verification.LADDER)
    _guard(args, ladder)
    rep = quad_coeff_extract(ladder, verification.v0_grid(args.grid or 8), paper_h(), _opts(args))
    print(f"A={_human(rep.quad_coeff)} residual={_human(rep.quad_coeff_err)} "
          f"spread={_human(rep.spread)} target={_human(-12 * math.pi)}")
    if args.out:
        Path(args.out).write_text(rep.to_json(indent=2) + "\n")
    return 0


def cmd_variation(args):
    h = paper_h()
    v0 = args.v0 if args.v0 is not None else 0.0
    fam = paper_family(h) if args.branch == 1 else paper_family(h).swapped()
    tr = second_variation(fam, v0)
    print(f"defect1={tr.defect1:.17g} defect2={tr.defect2:.17g} "
          f"defect2/pi={_human(tr.defect2 / math.pi)}")
    if args.out:
        tr.to_csv(args.out)
    return 0


def cmd_verify(args):
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(errors="backslashreplace")
    only = set(args.only.split(",")) if args.only else None
    results = verification.run_all(args.tolerance_scale, only,
                                   progress=lambda r: print(r.line(), flush=True))
    report = verification.report_dict(results)
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed")
    return 0 if report["pass"] else 1


def cmd_export(args):
    _guard(args, [args.eps])
    h = paper_h()
    if args.out is None:
        raise _Usage("export requires --out")
    if args.what == "mesh":
        mesh = export_mesh(args.eps, h, args.grid or 64, args.out,
                           allow_large_eps=args.override_eps_guard)
        print(f"vertices={len(mesh.vertices)} quads={len(mesh.quads)} -> {args.out}")
    else:
        n = args.grid or 8
        branch = Branch.from_arg(args.branch)
        starts = [(0.0, 2 * math.pi * k / n) if branch is Branch.FIRST else (2 * math.pi * k / n, 0.0)
                  for k in range(n)]
        lines = export_lines(args.eps, h, branch, starts, args.span, args.out, _opts(args))
        print(f"polylines={len(lines)} -> {args.out} (+ .obj)")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="clifford-asymptotic",
        description="Asymptotic lines on perturbed Clifford tori in S^3.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--eps", type=float, default=0.0)
        p.add_argument("--override-eps-guard", action="store_true",
                       help=f"allow |eps| > {EPS_GUARD}")
        return p

    p = add("forms", cmd_forms, "fundamental forms and K_ext at a chart point")
    p.add_argument("--u", type=float, default=0.0)
    p.add_argument("--v", type=float, default=0.0)

    p = add("scan", cmd_scan, "hyperbolicity scan on a uniform grid")
    p.add_argument("--grid", type=int)
    p.add_argument("--out")

    p = add("trace", cmd_trace, "integrate one asymptotic line to CSV (t,w)")
    p.add_argument("--u", type=float, default=0.0)
    p.add_argument("--v", type=float, default=0.0)
    p.add_argument("--span", type=float, default=2 * math.pi)
    p.add_argument("--branch", type=int, choices=(1, 2), default=1)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")

    p = add("poincare", cmd_poincare, "return-map displacement sweep")
    p.add_argument("--v0", type=float)
    p.add_argument("--grid", type=int)
    p.add_argument("--ladder", type=_ladder)
    p.add_argument("--branch", type=int, choices=(1, 2), default=1)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")

    p = add("rotation", cmd_rotation, "translation number of a return map")
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--branch", type=int, choices=(1, 2), default=1)
    p.add_argument("--tol", type=float)

    p = add("coeff", cmd_coeff, "Richardson extraction of the eps^2 drift coefficient")
    p.add_argument("--ladder", type=_ladder)
    p.add_argument("--grid", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")

    p = add("variation", cmd_variation, "first/second variations and period defects")
    p.add_argument("--v0", type=float)
    p.add_argument("--branch", type=int, choices=(1, 2), default=1)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run the acceptance checks; exit 0 iff all pass")
    p.set_defaults(func=cmd_verify)
    p.add_argument("--only", help="comma-separated check numbers")
    p.add_argument("--tolerance-scale", type=float, default=1.0,
                   help="multiply every check tolerance (values < 1 tighten)")
    p.add_argument("--out", help="write the JSON report here")

    p = add("export", cmd_export, "OBJ mesh or asymptotic-line polylines")
    p.add_argument("what", choices=("mesh", "lines"))
    p.add_argument("--grid", type=int)
    p.add_argument("--span", type=float, default=2 * math.pi)
    p.add_argument("--branch", type=int, choices=(1, 2), default=1)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (NonHyperbolic, StepUnderflow, PoleSingularity, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

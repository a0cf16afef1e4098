"""Command-line front end.

Exit status: 0 on success or a passing check, 1 when a check fails or a
model is rejected by validation (a JSON report goes to standard output),
2 on usage, parse or domain errors (one ``blm: error:`` line on standard
error).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import dependence, moments, orders, simulate
from ._numeric import ANALYTIC_TOL, DET_TOL, TIE_TOL
from .core import BlmDistribution
from .errors import BlmError, PreconditionError, ValidationError
from .families import GmoDistribution, MoParams
from .modelspec import SpecError, load

SEED_ENV = "BLM_SEED"
DEFAULT_SEED = 20240101
COMMANDS = ("validate", "eval", "density", "moments", "transform", "sample", "check", "compare",
            "mttf")
CHECK_KINDS = ("tp2", "rr2", "tp_order", "pqd", "theorem6", "theorem7", "ifra", "dfra")
RELATIONS = ("st", "hr", "rh", "lr", "uo", "concordance", "lt", "slepian")
KERNELS = ("survival", "cdf", "density", "copula")

EPILOG = f"""\
environment:
  {SEED_ENV}   default seed for `sample` when --seed is not given (default {DEFAULT_SEED})

exit status:
  0  success / check passed
  1  check failed, inconclusive, or model rejected (JSON report on stdout)
  2  usage, parse or domain error (message on stderr)
"""


class _UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.6e}"


def _csv(v: float) -> str:
    return f"{v:.8e}"


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="blm", description="Bivariate lack-of-memory distributions: evaluate, sample, check.",
        epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_, nspecs=1):
        sp = sub.add_parser(name, help=help_, epilog=EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        if nspecs == 1:
            sp.add_argument("spec", help="JSON model spec file")
        else:
            sp.add_argument("spec", help="JSON model spec of the first law")
            sp.add_argument("spec2", help="JSON model spec of the second law")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--strict", dest="strict", action="store_true", default=True,
                          help="reject models that fail validation (default)")
        mode.add_argument("--permissive", dest="strict", action="store_false",
                          help="build the model even when validation fails")
        return sp

    add("validate", "run the validity checks and print the report")
    sp = add("eval", "joint survival P(X > x, Y > y)")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--y", type=float, required=True)
    sp = add("density", "joint density off the diagonal")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--y", type=float, required=True)
    sp = add("moments", "E[X^i Y^j]: closed form and quadrature oracle (CSV)")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--no-oracle", action="store_true", help="skip the quadrature oracle")
    sp = add("transform", "joint Laplace transform or mgf: closed form and oracle (CSV)")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--kind", choices=("lst", "mgf"), default="lst")
    sp.add_argument("--no-oracle", action="store_true", help="skip the quadrature oracle")
    sp = add("sample", "draw (x, y) pairs (CSV with a provenance comment)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None,
                    help=f"random seed (default: ${SEED_ENV} or {DEFAULT_SEED})")
    sp.add_argument("--stream", type=int, default=0, help="substream id")
    sp.add_argument("--sampler", choices=("auto", "shock", "universal"), default="auto",
                    help="auto: shock model for mo/gmo, universal otherwise")
    sp = add("check", "dependence check on a grid (JSON verdict)")
    sp.add_argument("--kind", choices=CHECK_KINDS, required=True)
    sp.add_argument("--grid", type=int, default=20, help="points per axis")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--order", type=int, default=3, help="r for tp_order")
    sp.add_argument("--kernel", choices=KERNELS, default="survival",
                    help="kernel for tp2, rr2 and tp_order")
    sp = add("compare", "stochastic-order comparison of two laws (JSON verdict)", nspecs=2)
    sp.add_argument("--relation", choices=RELATIONS, required=True)
    sp.add_argument("--grid", type=int, default=20, help="points per axis")
    sp.add_argument("--tol", type=float, default=None)
    sp = add("mttf", "mean time to failure of a series or parallel system")
    sp.add_argument("--system", choices=("series", "parallel"), required=True)
    return p


def _print_json(obj, out):
    out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _build(path, strict):
    return load(path).build(strict=strict)


def _scale(d) -> float:
    if isinstance(d, BlmDistribution):
        return d.theta
    return 1.0 / min(d.F.mean(), d.G.mean())


def _need_blm(d, what):
    if not isinstance(d, BlmDistribution):
        raise _UsageError(f"{what} needs a BLM law (gmo with non-exponential laws is not one)")
    return d


def _oracle_cell(fn):
    try:
        return fn()
    except BlmError:
        return float("nan")


def _cmd_validate(args, out):
    spec = load(args.spec)
    d = spec.build(strict=False)
    if isinstance(d, GmoDistribution):
        ok = d.is_blm
        _print_json({"family": "gmo", "is_blm": ok, "passed": True}, out)
        return 0
    report = d.validity.to_dict()
    report["family"] = spec.family
    report["theta"] = d.theta
    report["atom_mass"] = d.atom_mass() if report["passed"] else None
    _print_json(report, out)
    return 0 if report["passed"] else 1


def _cmd_eval(args, d, out):
    out.write(_fmt(float(d.survival(args.x, args.y))) + "\n")
    return 0


def _cmd_density(args, d, out):
    out.write(_fmt(float(d.density(args.x, args.y))) + "\n")
    return 0


def _cmd_moments(args, d, out):
    d = _need_blm(d, "moments")
    closed = moments.product_moment(d, args.i, args.j)
    oracle = float("nan") if args.no_oracle else _oracle_cell(
        lambda: moments.quadrature_oracle(d, "lemma3_moment", (args.i, args.j)))
    out.write("i,j,closed_form,oracle,abs_diff\n")
    out.write(f"{args.i},{args.j},{_csv(closed)},{_csv(oracle)},{_csv(abs(closed - oracle))}\n")
    return 0


def _cmd_transform(args, d, out):
    d = _need_blm(d, "transform")
    fn, kind = (moments.lst, "lemma1_lst") if args.kind == "lst" else (moments.mgf, "lemma2_mgf")
    closed = fn(d, args.s, args.t)
    oracle = float("nan") if args.no_oracle else _oracle_cell(
        lambda: moments.quadrature_oracle(d, kind, (args.s, args.t)))
    out.write("kind,s,t,closed_form,oracle,abs_diff\n")
    out.write(f"{args.kind},{_csv(args.s)},{_csv(args.t)},{_csv(closed)},{_csv(oracle)},"
              f"{_csv(abs(closed - oracle))}\n")
    return 0


def _cmd_sample(args, spec, d, out):
    seed = args.seed if args.seed is not None else _default_seed()
    rng = simulate.RngStream(seed, args.stream)
    shock = args.sampler == "shock" or (args.sampler == "auto" and spec.family in ("mo", "gmo"))
    if shock and spec.family == "mo":
        batch = simulate.sample_mo(MoParams(**spec.parameters), args.n, rng)
    elif shock and spec.family == "gmo":
        batch = simulate.sample_gmo(d, args.n, rng)
    elif shock:
        raise _UsageError(f"the shock sampler needs family mo or gmo, not {spec.family}")
    else:
        if isinstance(d, GmoDistribution):
            d = d.to_blm()
        batch = simulate.sample_blm(d, args.n, rng)
    meta = json.dumps(spec.to_dict(), sort_keys=True, separators=(",", ":"))
    out.write(f"# sampler={batch.sampler_id} seed={batch.seed} stream={batch.stream} "
              f"n={batch.n} model={meta}\n")
    out.write("x,y\n")
    out.writelines(f"{_csv(x)},{_csv(y)}\n" for x, y in zip(batch.x, batch.y))
    return 0


def _kernel(d, name):
    return {"survival": dependence.survival_kernel, "cdf": dependence.cdf_kernel,
            "density": dependence.density_kernel,
            "copula": dependence.survival_copula_kernel}[name](d)


def _kernel_grid(d, name, n):
    if name == "copula":
        return dependence.Grid.unit(n)
    if name == "density":
        return dependence.Grid.off_diagonal(_scale(d), n)
    return dependence.Grid.geometric(_scale(d), n)


def _tol(args, default):
    return default if args.tol is None else args.tol


def _cmd_check(args, d, out):
    if args.grid < 2:
        raise _UsageError("--grid needs at least 2 points per axis")
    kind = args.kind
    g = dependence.Grid.geometric(_scale(d), args.grid)
    if kind in ("tp2", "rr2", "tp_order"):
        k = _kernel(d, args.kernel)
        kg = _kernel_grid(d, args.kernel, args.grid)
        tol = _tol(args, DET_TOL)
        if kind == "tp2":
            rep = dependence.tp2_check(k, kg, tol)
        elif kind == "rr2":
            rep = dependence.rr2_check(k, kg, tol)
        else:
            if args.order < 2:
                raise _UsageError("--order must be at least 2")
            rep = dependence.tp_order_check(k, kg, args.order, tol)
    elif kind == "pqd":
        rep = dependence.pqd_check(d, g, _tol(args, ANALYTIC_TOL))
    elif kind == "theorem6":
        rep = dependence.theorem6_condition(_need_blm(d, kind), g, _tol(args, DET_TOL))
    elif kind == "theorem7":
        rep = dependence.theorem7_density_condition(_need_blm(d, kind), g,
                                                    _tol(args, DET_TOL))
    else:
        v = orders.bivariate_ifra_check(d, [0.25, 0.5, 0.75], g, kind.upper(),
                                        _tol(args, ANALYTIC_TOL))
        res = v.to_dict()
        res["kind"] = kind
        _print_json(res, out)
        return 0 if v.holds == "yes" else 1
    res = rep.to_dict()
    res["kind"] = kind
    _print_json(res, out)
    return 0 if rep.passed else 1


def _cmd_compare(args, d1, d2, out):
    rel = args.relation
    n = args.grid
    if n < 2:
        raise _UsageError("--grid needs at least 2 points per axis")
    if rel in orders.UNIVARIATE_RELATIONS:
        xs = dependence.Grid.geometric(max(_scale(d1), _scale(d2)), n).xs
        tol = _tol(args, TIE_TOL)
        vx = orders.univariate_order(d1.F, d2.F, rel, xs, tol)
        vy = orders.univariate_order(d1.G, d2.G, rel, xs, tol)
        both = ("yes" if vx.holds == vy.holds == "yes"
                else "no" if "no" in (vx.holds, vy.holds) else "inconclusive")
        res = {"relation": rel, "holds": both, "X": vx.to_dict(), "Y": vy.to_dict()}
        _print_json(res, out)
        return 0 if both == "yes" else 1
    d1, d2 = _need_blm(d1, "compare"), _need_blm(d2, "compare")
    g = dependence.Grid.geometric(max(d1.theta, d2.theta), n)
    tol = _tol(args, ANALYTIC_TOL)
    if rel == "slepian":
        v = orders.slepian_check(d1, d2, g, tol)
    else:
        v = orders.compare_blm(d1, d2, {"lt": "Lt"}.get(rel, rel), g, tol)
    _print_json(v.to_dict(), out)
    return 0 if v.holds == "yes" else 1


def _cmd_mttf(args, d, out):
    out.write(_fmt(moments.mttf(_need_blm(d, "mttf"), args.system)) + "\n")
    return 0


def run(argv=None, out=None, err=None) -> int:
    """Parse ``argv`` and execute one command; returns the exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    with np.errstate(all="ignore"):
        return _dispatch(args, out, err)


def _dispatch(args, out, err) -> int:
    try:
        if args.command == "validate":
            return _cmd_validate(args, out)
        try:
            spec = load(args.spec)
            d = spec.build(strict=args.strict)
            if args.command == "compare":
                d2 = _build(args.spec2, args.strict)
        except ValidationError as exc:
            rep = exc.report.to_dict() if exc.report is not None else {"passed": False}
            rep["error"] = str(exc)
            _print_json(rep, out)
            return 1
        if args.command == "sample":
            return _cmd_sample(args, spec, d, out)
        if args.command == "compare":
            return _cmd_compare(args, d, d2, out)
        handler = {"eval": _cmd_eval, "density": _cmd_density, "moments": _cmd_moments,
                   "transform": _cmd_transform, "check": _cmd_check, "mttf": _cmd_mttf}
        return handler[args.command](args, d, out)
    except (SpecError, _UsageError, PreconditionError, BlmError, ValueError) as exc:
        err.write(f"blm: error: {exc}\n")
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

"""Command-line entry point.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage or
configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .biortho import expand, family_system, gram_schmidt_biortho, synthesize
from .errors import BiorthoError
from .exppoly import ExpPoly, ep_to_laplace, laplace_eval
from .laguerre import MAX_INDEX, FamilyTag, Params, family_fn, family_laplace
from .numeric_base import MAX_RULE_ORDER, gauss_laguerre_rule
from .operators import Report
from .suite import LAPLACE_POINT_TOL, LAPLACE_POINTS, full_report, quadrature_laplace

FORMATS = ("json", "csv", "text")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class CliConfig:
    alpha: float = 1.0
    beta: float = 2.0
    nmax: int = 12
    tol: float = 1e-9
    order: int = 80
    format: str = "json"
    seed: int = 42

    def __post_init__(self):
        for name in ("alpha", "beta"):
            if not getattr(self, name) >= 0.5:
                raise UsageError(f"{name} below 1/2")
        if not 1 <= self.nmax <= MAX_INDEX:
            raise UsageError(f"nmax must be in 1..{MAX_INDEX}")
        if not self.tol > 0:
            raise UsageError("tol must be positive")
        if not 1 <= self.order <= MAX_RULE_ORDER:
            raise UsageError(f"order must be in 1..{MAX_RULE_ORDER}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")

    @property
    def params(self) -> Params:
        return Params(self.alpha, self.beta)


def _config(args) -> CliConfig:
    return CliConfig(args.alpha, args.beta, args.nmax, args.tol, args.order, args.format, args.seed)


# --------------------------------------------------------------------------
# output helpers


def _write_json(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def _write_csv(header, rows, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, float) else x for x in row])


def _write_table(header, rows, out):
    out.write("  ".join(f"{h:>24}" for h in header) + "\n")
    for row in rows:
        out.write("  ".join(f"{x:>24.17g}" if isinstance(x, float) else f"{x!s:>24}" for x in row) + "\n")


def write_report(report: Report, fmt: str, out):
    if fmt == "json":
        _write_json(report.to_dict(), out)
        return
    header = ["check", "alpha", "beta", "n", "residual", "tol", "pass"]
    rows = [[e.check, e.params.get("alpha", ""), e.params.get("beta", ""), "" if e.n is None else e.n,
             e.residual, e.tol, "true" if e.passed else "false"] for e in report.entries]
    if fmt == "csv":
        _write_csv(header, rows, out)
    else:
        for e in report.entries:
            n = "-" if e.n is None else e.n
            out.write(f"{'PASS' if e.passed else 'FAIL'}  {e.check:<44} n={n!s:<3} "
                      f"residual={e.residual:.3e}  tol={e.tol:.1e}\n")
        out.write(f"all_pass={str(report.all_pass).lower()}\n")


def _emit(fmt, header, rows, extra: dict, out):
    if fmt == "json":
        obj = dict(extra)
        obj["rows"] = [dict(zip(header, (float(x) if isinstance(x, float) else x for x in row))) for row in rows]
        _write_json(obj, out)
    elif fmt == "csv":
        _write_csv(header, rows, out)
        for key, value in extra.items():
            if isinstance(value, float):
                sys.stderr.write(f"{key}: {value!r}\n")
    else:
        _write_table(header, rows, out)
        for key, value in extra.items():
            out.write(f"{key}: {value}\n")


# --------------------------------------------------------------------------
# commands


def run_verify(cfg: CliConfig, out) -> int:
    report = full_report(cfg.params, cfg.nmax, cfg.tol, cfg.order, cfg.seed)
    write_report(report, cfg.format, out)
    return 0 if report.all_pass else 1


def _input_function(args, params: Params) -> ExpPoly:
    chosen = [x is not None for x in (args.gamma, args.family, args.input)]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --gamma, --family or --input")
    if args.gamma is not None:
        if not args.gamma > 0:
            raise UsageError("gamma must be positive")
        return ExpPoly.exp(args.gamma)
    if args.family is not None:
        if not 0 <= args.index <= MAX_INDEX:
            raise UsageError(f"index must be in 0..{MAX_INDEX}")
        return family_fn(args.family, args.index, params)
    try:
        with open(args.input) as fh:
            return ExpPoly.from_json_obj(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read ExpPoly JSON from {args.input}: {exc}") from None


def run_expand(cfg: CliConfig, f: ExpPoly, out) -> int:
    system = family_system(cfg.params, cfg.nmax)
    c = expand(f, system, cfg.nmax, "phi")
    d = expand(f, system, cfg.nmax, "psi")
    residual = float((f - synthesize(c, system, "phi")).norm())
    rows = [[k, float(c[k]), float(d[k])] for k in range(cfg.nmax)]
    extra = {"params": cfg.params.as_dict(), "nmax": cfg.nmax, "residual": residual}
    _emit(cfg.format, ["k", "c_k", "d_k"], rows, extra, out)
    return 0


def run_synth(cfg: CliConfig, coeffs, side: str, mode: str, out) -> int:
    system = family_system(cfg.params, min(len(coeffs) + 1, MAX_INDEX + 1))
    f = synthesize(coeffs, system, side, mode)
    if cfg.format == "json":
        _write_json(f.to_json_obj(), out)
    else:
        rows = [[float(r), k, float(c)] for r, p in f.terms for k, c in enumerate(p.coeffs)]
        (_write_csv if cfg.format == "csv" else _write_table)(["rate", "power", "coeff"], rows, out)
    return 0


def run_gs(cfg: CliConfig, out) -> int:
    """Biorthonormalise e^{-alpha t}[(alpha+beta)t]^n against e^{-beta t}[(alpha+beta)t]^n."""
    a, b = cfg.alpha, cfg.beta
    fs = [ExpPoly([(a, [0] * n + [(a + b) ** n])]) for n in range(cfg.nmax)]
    gs = [ExpPoly([(b, [0] * n + [(a + b) ** n])]) for n in range(cfg.nmax)]
    phis, psis = gram_schmidt_biortho(fs, gs)
    rows, worst = [], 0.0
    for n in range(cfg.nmax):
        sign = (-1) ** n
        refs = family_fn("phi", n, cfg.params) * sign, family_fn("psi", n, cfg.params) * sign
        rp = float((phis[n] - refs[0]).norm() / refs[0].norm())
        rq = float((psis[n] - refs[1]).norm() / refs[1].norm())
        worst = max(worst, rp, rq)
        rows.append([n, rp, rq])
    tol = max(cfg.tol, 1e-8)
    extra = {"params": cfg.params.as_dict(), "max_residual": worst, "tol": tol, "pass": worst <= tol}
    _emit(cfg.format, ["n", "phi_residual", "psi_residual"], rows, extra, out)
    return 0 if worst <= tol else 1


def run_laplace(cfg: CliConfig, f: ExpPoly, closed, points, out) -> int:
    F = ep_to_laplace(f)
    rows, worst = [], 0.0
    for s in points:
        exact = laplace_eval(F, s).real
        quad = quadrature_laplace(f, s, cfg.order)
        ref = laplace_eval(closed, s).real if closed is not None else exact
        err = max(abs(exact - ref), abs(quad - ref))
        worst = max(worst, err)
        rows.append([float(s), ref, exact, quad])
    tol = max(cfg.tol, LAPLACE_POINT_TOL)
    extra = {"transform": F.to_json_obj(), "max_abs_error": worst, "tol": tol, "pass": worst <= tol}
    _emit(cfg.format, ["s", "closed_form", "exact_algebra", "quadrature"], rows, extra, out)
    return 0 if worst <= tol else 1


def run_quad_check(cfg: CliConfig, out) -> int:
    rule = gauss_laguerre_rule(cfg.order)
    logw = np.log(rule.modified_weights) - rule.nodes
    worst = 0.0
    for k in range(2 * cfg.order):
        # sum_i w_i t_i^k against k!, in log space
        val = math.fsum(np.exp(logw + k * np.log(rule.nodes) - math.lgamma(k + 1)))
        worst = max(worst, abs(val - 1))
    tol = 1e-11 if cfg.order <= 80 else 1e-10
    rows = [[i, float(t), float(w)] for i, (t, w) in enumerate(zip(rule.nodes, rule.modified_weights))]
    extra = {"order": cfg.order, "max_monomial_rel_error": worst, "tol": tol, "pass": worst <= tol}
    _emit(cfg.format, ["i", "node", "modified_weight"], rows, extra, out)
    return 0 if worst <= tol else 1


# --------------------------------------------------------------------------
# parser


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=float, default=1.0)
    common.add_argument("--beta", type=float, default=2.0)
    common.add_argument("--nmax", type=int, default=12)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--order", type=int, default=80, help="quadrature order")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--seed", type=int, default=42, help="seed for random probes")

    parser = argparse.ArgumentParser(prog="laguerre-biortho",
                                     description="Biisometric Laguerre shifts and biorthogonal Laguerre families.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify", parents=[common], help="run every identity check")

    def add_input(p):
        p.add_argument("--gamma", type=float, help="use f(t) = exp(-gamma t)")
        p.add_argument("--family", choices=[t.value for t in FamilyTag], help="use a family member")
        p.add_argument("--index", type=int, default=0)
        p.add_argument("--input", help="ExpPoly JSON file")

    add_input(sub.add_parser("expand", parents=[common], help="expansion coefficients c_k, d_k"))

    p = sub.add_parser("synth", parents=[common], help="sum a coefficient series")
    p.add_argument("--coeffs", type=_parse_floats, required=True, help="comma separated coefficients")
    p.add_argument("--side", choices=("phi", "psi"), default="phi")
    p.add_argument("--mode", choices=("identity", "V", "W", "Vstar", "Wstar"), default="identity")

    sub.add_parser("gs", parents=[common], help="Gram-Schmidt biorthonormalisation of monomial families")

    p = sub.add_parser("laplace", parents=[common], help="Laplace transform: closed form vs algebra vs quadrature")
    add_input(p)
    p.add_argument("--s", type=_parse_floats, default=list(LAPLACE_POINTS), help="evaluation points")

    sub.add_parser("quad-check", parents=[common], help="inspect a Gauss-Laguerre rule")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        cfg = _config(args)
        if args.command == "verify":
            code = run_verify(cfg, buf)
        elif args.command == "expand":
            code = run_expand(cfg, _input_function(args, cfg.params), buf)
        elif args.command == "synth":
            code = run_synth(cfg, args.coeffs, args.side, args.mode, buf)
        elif args.command == "gs":
            code = run_gs(cfg, buf)
        elif args.command == "laplace":
            f = _input_function(args, cfg.params)
            closed = None
            if args.family in ("phi", "psi"):
                closed = family_laplace(args.family, args.index, cfg.params)
            if any(not s > -min(f.rates, default=1) for s in args.s):
                raise UsageError("every s must lie right of the transform's poles")
            code = run_laplace(cfg, f, closed, args.s, buf)
        else:
            code = run_quad_check(cfg, buf)
    except (UsageError, BiorthoError) as exc:
        sys.stderr.write(f"laguerre-biortho {args.command}: error: {exc}\n")
        return 2
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())

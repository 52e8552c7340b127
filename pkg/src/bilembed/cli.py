"""Command-line surface: ``bilembed <subcommand> [options]``.

Exit codes: 0 success, 2 invalid arguments, 3 numerical non-convergence,
4 precondition violation. Diagnostics go to standard error.

With ``--out DIR`` every subcommand writes ``<command>.json`` (result plus an
embedded copy of the manifest without timings), ``<command>.manifest.json``
(the full manifest, timings included) and, for scans, ``<command>.csv`` whose
first line is a header. ``--plot`` adds a static ``<command>.svg``.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path as FsPath

import numpy as np

from .errors import NonConvergent, PreconditionViolation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGENT = 3
EXIT_PRECONDITION = 4

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_IMAG = re.compile(rf"^([+-]?)({_NUM})?\*?i$")
_FULL = re.compile(rf"^([+-]?{_NUM})([+-])({_NUM})?\*?i$")


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``a+bi``, ``a-bi``, ``bi``, ``i`` or ``-i``; whitespace is ignored."""
    s = re.sub(r"\s+", "", str(text))
    if _REAL.match(s):
        return complex(float(s), 0.0)
    m = _IMAG.match(s)
    if m:
        mag = float(m.group(2)) if m.group(2) else 1.0
        return complex(0.0, -mag if m.group(1) == "-" else mag)
    m = _FULL.match(s)
    if m:
        mag = float(m.group(3)) if m.group(3) else 1.0
        return complex(float(m.group(1)), -mag if m.group(2) == "-" else mag)
    raise argparse.ArgumentTypeError(f"cannot parse complex number {text!r} (use a+bi, a-bi, i, -i)")


def _tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int = 0
    tool_version: str = field(default_factory=_tool_version)
    timings: dict = field(default_factory=dict)

    def to_record(self, with_timings: bool = True) -> dict:
        rec = asdict(self)
        if not with_timings:
            rec.pop("timings")
        return rec


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def _dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _write_csv(path, header, rows):
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])


class UsageError(Exception):
    """Arguments parse but do not describe a valid request."""


def _plot(path, series, xlabel, ylabel, title, logx=False, logy=False):
    """Static line chart; ``series`` is a list of ``(label, xs, ys, style)``."""
    import matplotlib

    matplotlib.rcParams["svg.hashsalt"] = "bilembed"
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    for label, xs, ys, style in series:
        ax.plot(xs, ys, style, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})


# ---------------------------------------------------------------------------
# parameters


def _add_tuple_args(sp, need_beta=True):
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--beta", type=float, default=None,
                    help="defaults to the value on the homogeneity line" if not need_beta else None)
    sp.add_argument("--sigma", type=parse_complex)
    sp.add_argument("--tau", type=parse_complex)
    sp.add_argument("--sigma1", type=parse_complex, help="reduced symbol, instead of --sigma")
    sp.add_argument("--tau1", type=parse_complex, help="reduced symbol, instead of --tau")


def _tuple(args, need_beta=True):
    from .params import BEParams, beta_on_line, unreduce

    if args.beta is None:
        if need_beta:
            raise UsageError("--beta is required")
        args.beta = beta_on_line(args.k, args.l, args.alpha)
    if args.sigma is not None and args.tau is not None:
        if args.sigma1 is not None or args.tau1 is not None:
            raise UsageError("give either --sigma/--tau or --sigma1/--tau1, not both")
        sigma, tau = args.sigma, args.tau
    elif args.sigma1 is not None and args.tau1 is not None:
        if args.sigma is not None or args.tau is not None:
            raise UsageError("give either --sigma/--tau or --sigma1/--tau1, not both")
        sigma, tau = unreduce(args.k, args.l, args.sigma1, args.tau1)
    else:
        raise UsageError("need --sigma and --tau, or --sigma1 and --tau1")
    try:
        return BEParams(args.k, args.l, args.alpha, args.beta, sigma, tau)
    except PreconditionViolation:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _params_record(p):
    return {"k": p.k, "l": p.l, "alpha": p.alpha, "beta": p.beta, "sigma": p.sigma, "tau": p.tau}


# ---------------------------------------------------------------------------
# subcommands; each returns (result dict, csv (header, rows) or None, plot spec or None)


def cmd_classify(args):
    from .classifier import classify

    p = _tuple(args)
    return {"parameters": _params_record(p), "verdict": classify(p).to_record()}, None, None


def cmd_obstruct(args):
    from .obstruction import obstruction_by_quadrature, obstruction_integral

    if args.sigma1 is None or args.tau1 is None:
        raise UsageError("need --sigma1 and --tau1")
    closed = obstruction_integral(args.k, args.l, args.alpha, args.sigma1, args.tau1)
    oracle = obstruction_by_quadrature(args.k, args.l, args.alpha, args.sigma1, args.tau1)
    diff = abs(closed.value - oracle.value)
    scale = max(abs(closed.value), abs(oracle.value))
    agree = diff <= 1e-8 if scale <= 1e-8 else diff <= args.rtol * scale
    res = {"k": args.k, "l": args.l, "alpha": args.alpha, "sigma1": args.sigma1, "tau1": args.tau1,
           "case": closed.case_tag.value, "gamma": closed.gamma, "value": closed.value,
           "abs_value": abs(closed.value), "oracle": oracle.value, "abs_difference": diff, "agree": agree}
    if not agree:
        raise NonConvergent(f"closed form {closed.value} and oracle {oracle.value} disagree")
    return res, None, None


def cmd_kernel_scan(args):
    from .kernelscan import KernelScanConfig, Path, scan_uniform_bound

    if args.sigma1 is None or args.tau1 is None:
        raise UsageError("need --sigma1 and --tau1")
    path = Path.ELLIPTIC if args.path == "elliptic" else Path.NON_ELLIPTIC
    b = args.b if args.b else list(np.concatenate([-np.logspace(-2, 3, 10)[::-1], np.logspace(-2, 3, 10)]))
    cfg = KernelScanConfig(args.k, args.l, args.sigma1, args.tau1, tuple(args.eps), tuple(args.R), tuple(b),
                           a=args.a)
    rep = scan_uniform_bound(cfg, path)
    res = {"path": path.value, "sup_abs": rep.sup_abs, "argmax": list(rep.argmax), "stabilized": rep.stabilized,
           "sup_doubled": rep.sup_doubled, "sup_by_R": rep.sup_by_R, "certified": rep.certified,
           "errors": [list(e) for e in rep.errors]}
    csv = (["epsilon", "R", "b", "re", "im", "abs"], list(rep.rows()))
    sup = rep.sup_by_R
    plot = ([("running sup", list(cfg.R_grid), list(sup), "o-")], "R", "sup |K|", "kernel scan", True, False)
    return res, csv, plot


def cmd_oscillatory(args):
    from .contour import oscillatory_exp_integral, vdc_pieces

    rows, pieces = [], []
    for b in args.b:
        r = oscillatory_exp_integral(b, args.alpha, args.R, args.sign)
        rows.append((b, r.value.real, r.value.imag, abs(r.value), r.error_estimate, r.a_priori_bound))
        if args.vdc:
            for lo, hi, val, bound in vdc_pieces(b, args.alpha, args.sign, args.R):
                pieces.append({"b": b, "lo": lo, "hi": hi, "abs_integral": val, "bound": bound,
                               "ok": val <= bound})
    res = {"alpha": args.alpha, "R": args.R, "sign": args.sign, "sup_abs": max(r[3] for r in rows),
           "a_priori_bound": rows[0][5]}
    if args.vdc:
        res["vdc_pieces"] = pieces
        res["vdc_ok"] = all(pc["ok"] for pc in pieces)
    csv = (["b", "re", "im", "abs", "error_estimate", "a_priori_bound"], rows)
    bs = [abs(r[0]) for r in rows]
    plot = ([("|I(b)|", bs, [r[3] for r in rows], "o")], "|b|", "|integral|", "oscillatory integral", True, False)
    return res, csv, plot


def cmd_witness_elliptic(args):
    from .classifier import classify
    from .witness import elliptic_sweep

    p = _tuple(args, need_beta=False)
    sw = elliptic_sweep(p, ts=tuple(args.t), n=args.n)
    rows = list(sw.rows())
    header = list(rows[0].keys())
    res = {"parameters": _params_record(p), "verdict": classify(p).to_record(), "slope": sw.fit.slope,
           "intercept": sw.fit.intercept, "r_squared": sw.fit.rvalue ** 2, "h_ratio": sw.h_ratio,
           "product_ratio": sw.product_ratio}
    logt = [r["log_t"] for r in rows]
    plot = ([("|<F,G>|", logt, [r["abs_product"] for r in rows], "o-"),
             ("predicted", logt, [r["predicted_abs"] for r in rows], "--"),
             ("||h||_1", logt, [r["h_l1"] for r in rows], "s-")], "log t", "value", "elliptic witness", False, False)
    return res, (header, [[r[h] for h in header] for r in rows]), plot


def cmd_knapp(args):
    from .witness import knapp_report

    p = _tuple(args, need_beta=False)
    rep = knapp_report(p, ns=tuple(args.n))
    rows = list(rep.rows())
    header = list(rows[0].keys())
    fits = {name: {"slope": f.slope, "intercept": f.intercept, "r_squared": f.r_squared}
            for name, f in (("l2_sq", rep.l2_fit), ("image_l1", rep.l1_fit), ("linear_ratio", rep.linear_ratio_fit))}
    res = {"parameters": _params_record(p), "zeta": list(rep.zeta), "fits": fits}
    ns = [r["n"] for r in rows]
    plot = ([(h, ns, [r[h] for r in rows], "o-") for h in header[1:]], "n", "value", "Knapp sequence", True, True)
    return res, (header, [[r[h] for h in header] for r in rows]), plot


def cmd_selftest(args):
    from .acceptance import run

    results = []
    for r in run(args.criteria):
        print(r.line(), flush=True)
        results.append(r.to_record())
    res = {"passed": all(r["passed"] for r in results), "criteria": results}
    return res, None, None


COMMANDS = {
    "classify": cmd_classify,
    "obstruct": cmd_obstruct,
    "kernel-scan": cmd_kernel_scan,
    "oscillatory": cmd_oscillatory,
    "witness-elliptic": cmd_witness_elliptic,
    "knapp": cmd_knapp,
    "selftest": cmd_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", type=FsPath, help="directory for JSON/CSV/SVG outputs")
    common.add_argument("--plot", action="store_true", help="also write a static SVG line chart")
    common.add_argument("--seed", type=int, default=0, help="recorded in the manifest")

    ap = _Parser(prog="bilembed", description="Bilinear embedding estimates: classification and numerical witnesses.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("classify", parents=[common], help="verdict for a parameter tuple")
    _add_tuple_args(sp)

    sp = sub.add_parser("obstruct", parents=[common], help="obstruction integral, closed form and oracle")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, default=2)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--sigma1", type=parse_complex, required=True)
    sp.add_argument("--tau1", type=parse_complex, required=True)
    sp.add_argument("--rtol", type=float, default=1e-6)

    sp = sub.add_parser("kernel-scan", parents=[common], help="reduced kernel on an (epsilon, R, b) grid")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--sigma1", type=parse_complex, required=True)
    sp.add_argument("--tau1", type=parse_complex, required=True)
    sp.add_argument("--path", choices=("elliptic", "nonelliptic"), default="elliptic")
    sp.add_argument("--eps", type=float, nargs="+", default=[1e-3, 1e-2, 1e-1])
    sp.add_argument("--R", type=float, nargs="+", default=[10.0, 100.0, 1000.0])
    sp.add_argument("--b", type=float, nargs="+", help="default: +-logspace(-2, 3, 10)")
    sp.add_argument("--a", type=float, default=1 / (2 * math.pi))

    sp = sub.add_parser("oscillatory", parents=[common], help="int_0^R exp(i(b e^x + sign e^(alpha x))) dx")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--b", type=float, nargs="+", required=True)
    sp.add_argument("--R", type=float, default=math.exp(10))
    sp.add_argument("--sign", type=int, choices=(-1, 1), default=1)
    sp.add_argument("--vdc", action="store_true", help="also run the Van der Corput piece checks")

    sp = sub.add_parser("witness-elliptic", parents=[common], help="elliptic counterexample sweep over t")
    _add_tuple_args(sp, need_beta=False)
    sp.add_argument("--t", type=float, nargs="+", default=[float(2 ** j) for j in range(4, 11)])
    sp.add_argument("--n", type=int, default=1024)

    sp = sub.add_parser("knapp", parents=[common], help="Knapp sequence exponents")
    _add_tuple_args(sp, need_beta=False)
    sp.add_argument("--n", type=int, nargs="+", default=[4, 8, 16, 32])

    sp = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    sp.add_argument("--criteria", type=int, nargs="*", help="subset of criterion numbers")
    return ap


def _manifest_parameters(args) -> dict:
    skip = {"command", "out", "plot", "seed"}
    return {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in skip}


_COMPLEX_OPTS = ("--sigma", "--tau", "--sigma1", "--tau1")


def _glue_complex(argv):
    """Rewrite ``--sigma1 -i`` as ``--sigma1=-i`` so a leading minus is not read as a flag."""
    out, it = [], iter(argv)
    for a in it:
        if a in _COMPLEX_OPTS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_glue_complex(argv))
    except UsageError as exc:
        print(f"bilembed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    manifest = RunManifest(args.command, _manifest_parameters(args), args.seed)
    np.random.seed(args.seed)
    t0 = time.perf_counter()
    try:
        res, csv, plot = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"bilembed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergent as exc:
        print(f"bilembed {args.command}: did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    except PreconditionViolation as exc:
        print(f"bilembed {args.command}: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    manifest.timings["compute_seconds"] = time.perf_counter() - t0
    res = dict(res, manifest=manifest.to_record(with_timings=False))
    if args.command != "selftest":
        sys.stdout.write(_dumps(res))
    if args.out is not None:
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        base = args.command
        (out / f"{base}.json").write_text(_dumps(res), encoding="utf-8")
        (out / f"{base}.manifest.json").write_text(_dumps(manifest.to_record()), encoding="utf-8")
        if csv is not None:
            _write_csv(out / f"{base}.csv", *csv)
        if args.plot and plot is not None:
            _plot(out / f"{base}.svg", *plot)
    if args.command == "selftest" and not res["passed"]:
        return 1
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

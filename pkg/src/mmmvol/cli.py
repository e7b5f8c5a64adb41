"""Command line interface: ``mmmvol <subcommand> [options]``.

Exit status is 0 on success, 1 on numeric errors or failed verification and
2 on usage errors.  Errors go to stderr as ``ERROR <code>: <message>``.
"""

import argparse
import json
import math
import sys
from importlib import resources

import numpy as np

from . import mmm
from .asymptotics import (convergence_report, large_time_limit, rr_estimate_mmm,
                          small_time_limit)
from .errors import MmmError
from .implied import implied_vol_mmm
from .oracle import mc_call_price
from .surface import export, generate
from .verify import run_checks

FIXTURE = "sp500_2009-01-27.json"


class UsageError(Exception):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v):
    return "nan" if v is None or (isinstance(v, float) and math.isnan(v)) else format(v, ".17g")


def parse_grid(text, log=False):
    """``a:b:n`` -> n points from a to b inclusive, linear or geometric."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid {text!r} must look like a:b:n")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid {text!r} must look like a:b:n") from None
    if n < 1 or not (a > 0.0 and b >= a):
        raise UsageError(f"grid {text!r} needs 0 < a <= b and n >= 1")
    if n == 1:
        return [a]
    pts = np.geomspace(a, b, n) if log else np.linspace(a, b, n)
    return [float(v) for v in pts]


def load_config(path=None):
    """ModelParams from a JSON file with keys S, r, alpha, eta (the bundled fixture by default)."""
    try:
        if path is None:
            text = resources.files("mmmvol").joinpath("data", FIXTURE).read_text()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    try:
        return mmm.ModelParams.from_dict(data)
    except MmmError as exc:
        raise UsageError(f"bad config: {exc}") from None


def dump_config(params):
    return json.dumps(params.to_dict(), indent=2) + "\n"


def _add_globals(p, suppress):
    d = {"default": argparse.SUPPRESS} if suppress else {}
    p.add_argument("--config", help="JSON file with keys S, r, alpha, eta", **d)
    p.add_argument("--spot", type=float, help="override S", **d)
    p.add_argument("--rate", type=float, help="override r", **d)
    p.add_argument("--alpha", type=float, help="override alpha", **d)
    p.add_argument("--eta", type=float, help="override eta", **d)
    p.add_argument("--threads", type=int, help="worker threads (default 1)",
                   **(d or {"default": 1}))
    p.add_argument("--dump-config", action="store_true",
                   help="print the effective config as JSON and exit", **d)


def build_parser():
    p = _Parser(prog="mmmvol", description="Minimal Market Model prices and implied volatility.")
    _add_globals(p, suppress=False)
    # global options are also accepted after the subcommand
    common = _Parser(add_help=False)
    _add_globals(common, suppress=True)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    add = sub.add_parser
    sub.add_parser = lambda name, **kw: add(name, parents=[common], **kw)

    s = sub.add_parser("price", help="model price of a call, put or zero-coupon bond")
    s.add_argument("--strike", type=float)
    s.add_argument("--expiry", type=float, required=True)
    s.add_argument("--kind", choices=("call", "put", "zcb"), default="call")

    s = sub.add_parser("iv", help="implied volatility of the model call price")
    s.add_argument("--strike", type=float, required=True)
    s.add_argument("--expiry", type=float, required=True)

    s = sub.add_parser("limits", help="small- and large-expiry implied volatility limits")
    s.add_argument("--strike", type=float, required=True)
    s.add_argument("--digits", type=int, default=5, help="significant digits (default 5)")

    s = sub.add_parser("rr", help="finite-expiry Roper-Rutkowski estimate")
    s.add_argument("--strike", type=float, required=True)
    s.add_argument("--expiry", type=float, required=True)
    s.add_argument("--forward", action="store_true", help="use forward log-moneyness")

    s = sub.add_parser("surface", help="implied volatility surface export")
    s.add_argument("--strikes", required=True, help="a:b:n")
    s.add_argument("--expiries", required=True, help="a:b:n")
    s.add_argument("--out", default="-", help="output path, '-' for stdout")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--log-expiries", action="store_true", help="geometric expiry spacing")

    s = sub.add_parser("converge", help="convergence table towards both limits")
    s.add_argument("--strike", type=float, required=True)
    s.add_argument("--small-expiries", help="a:b:n (default 1e-4, 1e-3, 1e-2)")
    s.add_argument("--large-expiries", help="a:b:n (default 50, 100, 200, 400)")
    s.add_argument("--log-expiries", action="store_true", help="geometric spacing for both grids")

    s = sub.add_parser("mc-check", help="analytic price against Monte Carlo")
    s.add_argument("--strike", type=float, required=True)
    s.add_argument("--expiry", type=float, required=True)
    s.add_argument("--paths", type=int, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--antithetic", action="store_true")

    s = sub.add_parser("verify", help="run the invariant suite")
    s.add_argument("--seed", type=int, default=0)
    return p


def _params(args):
    params = load_config(args.config)
    over = {"S": args.spot, "r": args.rate, "alpha": args.alpha, "eta": args.eta}
    data = params.to_dict()
    data.update({k: v for k, v in over.items() if v is not None})
    try:
        return mmm.ModelParams.from_dict(data)
    except MmmError as exc:
        raise UsageError(f"bad parameters: {exc}") from None


def _cmd_price(params, args, out):
    if args.kind == "zcb":
        out.write(f"zcb {_fmt(mmm.zcb_price(params, args.expiry))}\n")
        return 0
    if args.strike is None:
        raise UsageError("--strike is required for call and put prices")
    v = mmm.option_price(params, args.strike, args.expiry, args.kind)
    out.write(f"{args.kind} {_fmt(v)}\n")
    return 0


def _cmd_iv(params, args, out):
    res = implied_vol_mmm(params, args.strike, args.expiry)
    out.write(f"iv {_fmt(res.vol)}\n")
    out.write(f"iterations {res.iterations}\n")
    out.write(f"residual {_fmt(res.residual)}\n")
    out.write(f"bracket {_fmt(res.bracket[0])} {_fmt(res.bracket[1])}\n")
    out.write(f"call {_fmt(mmm.call_price(params, args.strike, args.expiry))}\n")
    return 0


def _cmd_limits(params, args, out):
    d = args.digits
    out.write(f"small_time_limit {small_time_limit(params, args.strike):#.{d}g}\n")
    out.write(f"large_time_limit {large_time_limit(params):#.{d}g}\n")
    return 0


def _cmd_rr(params, args, out):
    est = rr_estimate_mmm(params, args.strike, args.expiry, forward=args.forward)
    out.write(f"rr_estimate {_fmt(est)}\n")
    out.write(f"small_time_limit {_fmt(small_time_limit(params, args.strike))}\n")
    return 0


def _cmd_surface(params, args, out):
    strikes = parse_grid(args.strikes)
    expiries = parse_grid(args.expiries, log=args.log_expiries)
    grid = generate(params, strikes, expiries, workers=args.threads)
    if args.out == "-":
        export(grid, args.format, out)
    else:
        export(grid, args.format, args.out)
        out.write(f"wrote {len(strikes) * len(expiries)} cells to {args.out} "
                  f"({len(grid.failures)} failed)\n")
    return 0


SMALL_EXPIRIES = [1e-4, 1e-3, 1e-2]
LARGE_EXPIRIES = [50.0, 100.0, 200.0, 400.0]


def _cmd_converge(params, args, out):
    small = SMALL_EXPIRIES
    if args.small_expiries is not None:
        small = parse_grid(args.small_expiries, log=args.log_expiries)
    large = LARGE_EXPIRIES
    if args.large_expiries is not None:
        large = parse_grid(args.large_expiries, log=args.log_expiries)
    rep = convergence_report(params, args.strike, small, large, workers=args.threads)
    out.write(f"strike {_fmt(rep.strike)}\n")
    out.write(f"small_time_limit {_fmt(rep.limit_small)}\n")
    out.write(f"large_time_limit {_fmt(rep.limit_large)}\n")
    out.write("regime,expiry,iv,iv_error,rr,rr_error,status\n")
    for row in rep.estimates:
        limit = rep.limit_small if row.regime == "small" else rep.limit_large
        iv_err = None if row.iv is None else abs(row.iv - limit)
        rr_err = None if row.rr is None else abs(row.rr - limit)
        out.write(",".join([row.regime, _fmt(row.T), _fmt(row.iv), _fmt(iv_err),
                            _fmt(row.rr), _fmt(rr_err), row.status]) + "\n")
    out.write(f"flags {' '.join(rep.flags) if rep.flags else 'none'}\n")
    return 0


def _cmd_mc_check(params, args, out):
    if args.paths < 1000:
        raise UsageError("--paths must be at least 1000")
    analytic = mmm.call_price(params, args.strike, args.expiry)
    est = mc_call_price(params, args.strike, args.expiry, args.paths, args.seed,
                        workers=args.threads, antithetic=args.antithetic)
    out.write(f"analytic {_fmt(analytic)}\n")
    out.write(f"mc_mean {_fmt(est.mean)}\n")
    out.write(f"mc_stderr {_fmt(est.stderr)}\n")
    out.write(f"z_score {est.z_score(analytic):.6f}\n")
    return 0


def _cmd_verify(params, args, out):
    results = run_checks(params, seed=args.seed, workers=args.threads)
    passed = 0
    for name, ok, detail in results:
        passed += ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    out.write(f"{passed}/{len(results)} checks passed\n")
    return 0 if passed == len(results) else 1


COMMANDS = {
    "price": _cmd_price,
    "iv": _cmd_iv,
    "limits": _cmd_limits,
    "rr": _cmd_rr,
    "surface": _cmd_surface,
    "converge": _cmd_converge,
    "mc-check": _cmd_mc_check,
    "verify": _cmd_verify,
}


def run(argv=None, out=None, err=None):
    """Execute one command and return the exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        params = _params(args)
        if args.dump_config:
            out.write(dump_config(params))
            return 0
        if args.command is None:
            raise UsageError("a subcommand is required")
        return COMMANDS[args.command](params, args, out)
    except UsageError as exc:
        err.write(f"ERROR usage: {exc}\n")
        return 2
    except MmmError as exc:
        err.write(f"ERROR {exc.code}: {exc}\n")
        return 1
    except OSError as exc:
        err.write(f"ERROR io: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

Subcommands: ``construct``, ``verify``, ``series``, ``buchstab``, ``phi``.
Exit codes: 0 success, 1 counterexample found, 2 usage or precondition
error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from .analytic import build_buchstab, phi_rough, warlimont_error_ratio, warlimont_estimate
from .arith import DEFAULT_MEMORY_BUDGET, build_factor_table
from .errors import (
    EmptyResultError,
    InvalidArgumentError,
    OutOfRangeError,
    ParseError,
    ResourceLimitError,
)
from .lang import parse_recipe, realize
from .metrics import ratio_series, verify_mc2

DEFAULT_CAPACITY = 10**6
EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(v):
    """Reals at 12 significant digits; integers verbatim; None as empty."""
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def _positive_int(raw):
    """Positive integer; ``1e6`` style is accepted when exact."""
    raw = raw.strip()
    try:
        v = int(raw)
    except ValueError:
        try:
            f = float(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {raw!r}")
        if not f.is_integer():
            raise argparse.ArgumentTypeError(f"not an integer: {raw!r}")
        v = int(f)
    if v < 1:
        raise argparse.ArgumentTypeError(f"not a positive integer: {raw!r}")
    return v


def _int_list(raw):
    return [_positive_int(p) for p in raw.split(",") if p.strip()]


def expand_geometric(start, factor, count):
    if start < 1 or factor < 2 or count < 1:
        raise UsageError("--geometric needs start >= 1, factor >= 2, count >= 1")
    return [start * factor**i for i in range(count)]


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


@dataclass
class RunConfig:
    capacity: int
    threads: int = 1
    out: str | None = None
    memory_budget: int = DEFAULT_MEMORY_BUDGET

    def require(self, n, what):
        if n > self.capacity:
            raise OutOfRangeError(f"{what}={n} exceeds capacity {self.capacity} (raise --capacity)")


_CONFIG_TYPES = {"capacity": _positive_int, "threads": _positive_int, "x": _positive_int,
                 "y": _positive_int, "method": str, "checkpoints": _int_list, "geometric": _int_list,
                 "out": str, "umax": float, "h": float, "memory_budget": _positive_int}


def _resolve(args):
    file_cfg = {}
    if args.config:
        file_cfg = read_config(args.config)
        unknown = set(file_cfg) - set(_CONFIG_TYPES)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, value in file_cfg.items():
        if getattr(args, key, None) is None and hasattr(args, key):
            try:
                setattr(args, key, _CONFIG_TYPES[key](value))
            except (argparse.ArgumentTypeError, ValueError) as e:
                raise UsageError(f"config {key}: {e}")
    capacity = args.capacity
    if capacity is None:
        env = os.environ.get("MULCOMP_CAPACITY")
        try:
            capacity = _positive_int(env) if env else DEFAULT_CAPACITY
        except argparse.ArgumentTypeError as e:
            raise UsageError(f"MULCOMP_CAPACITY: {e}")
    return RunConfig(capacity, args.threads or 1, args.out,
                     args.memory_budget or DEFAULT_MEMORY_BUDGET)


def _table(cfg):
    return build_factor_table(max(cfg.capacity, 2), threads=cfg.threads,
                              memory_budget=cfg.memory_budget)


def _write(cfg, lines):
    text = "".join(line + "\n" for line in lines)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_pair(recipe_text, t):
    pair, info = realize(parse_recipe(recipe_text), t)
    if pair is None:
        raise EmptyResultError(f"recipe yields no certified pair: {info}")
    return pair, info


# -- commands -----------------------------------------------------------------------

def cmd_construct(args, cfg):
    recipe = parse_recipe(args.recipe)
    t = _table(cfg)
    _, info = realize(recipe, t)
    lines = [f"# mulcomp {__version__} construct", f"# capacity={cfg.capacity}"]
    lines += [f"{k}={fmt(v)}" for k, v in info.items()]
    _write(cfg, lines)
    return EXIT_OK


def cmd_verify(args, cfg):
    recipe = parse_recipe(args.recipe)
    if args.x is None:
        raise UsageError("verify needs --x")
    cfg.require(args.x, "x")
    t = _table(cfg)
    pair, _ = _build_pair(str(recipe), t)
    method = args.method or ("both" if pair.rule is not None else "scan")
    report = verify_mc2(pair, args.x, method, t, cfg.threads)
    lines = ["n,status,a,b"] + [",".join(map(fmt, r)) for r in report.failure_rows()]
    _write(cfg, lines)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.verified else EXIT_COUNTEREXAMPLE


def _checkpoints(args):
    if args.checkpoints and args.geometric:
        raise UsageError("give either --checkpoints or --geometric, not both")
    if args.geometric:
        if len(args.geometric) != 3:
            raise UsageError("--geometric takes start,factor,count")
        return expand_geometric(*args.geometric)
    if args.checkpoints:
        return args.checkpoints
    raise UsageError("series needs --checkpoints or --geometric")


def cmd_series(args, cfg):
    recipe = parse_recipe(args.recipe)
    cps = _checkpoints(args)
    cfg.require(max(cps), "checkpoint")
    t = _table(cfg)
    pair, _ = _build_pair(str(recipe), t)
    series = ratio_series(pair, cps, t, cfg.threads)
    lines = ["x,A,B,r1,r2,r3,r4"]
    lines += [",".join(fmt(v) for v in (r.x, r.a, r.b, r.r1, r.r2, r.r3, r.r4)) for r in series.rows]
    _write(cfg, lines)
    return EXIT_OK


def buchstab_rows(u_max, h):
    """``(u, omega)`` at output step ``h``; the solver runs at a step of at most 1e-3."""
    m_out = round(1.0 / h)
    if m_out < 1 or abs(m_out * h - 1.0) > 1e-9:
        raise InvalidArgumentError(f"--h {h} must divide 1 evenly")
    m_int = m_out * math.ceil(1000 / m_out)
    tbl = build_buchstab(u_max, 1.0 / m_int)
    stride = m_int // m_out
    return [(1.0 + i / m_out, float(tbl.values[i * stride]))
            for i in range((len(tbl.values) - 1) // stride + 1)]


def cmd_buchstab(args, cfg):
    rows = buchstab_rows(args.umax if args.umax is not None else 20.0,
                         args.h if args.h is not None else 0.01)
    _write(cfg, ["u,omega"] + [f"{fmt(u)},{fmt(w)}" for u, w in rows])
    return EXIT_OK


def cmd_phi(args, cfg):
    if args.x is None or args.y is None:
        raise UsageError("phi needs --x and --y")
    cfg.require(max(args.x, args.y), "x")
    t = _table(cfg)
    tbl = build_buchstab(args.umax if args.umax is not None else 20.0, 1e-3)
    exact = phi_rough(args.x, args.y, t)
    try:
        est = warlimont_estimate(args.x, args.y, tbl, t)
        ratio = warlimont_error_ratio(args.x, args.y, tbl, t)
    except OutOfRangeError:
        est = ratio = None
    _write(cfg, ["phi_exact,warlimont_estimate,error_ratio", f"{exact},{fmt(est)},{fmt(ratio)}"])
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--capacity", type=_positive_int, default=None,
                        help="factor table size (default: $MULCOMP_CAPACITY or 10^6)")
    common.add_argument("--config", default=None, help="key = value defaults file")
    common.add_argument("--threads", type=_positive_int, default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--memory-budget", type=_positive_int, default=None, dest="memory_budget",
                        help="bytes allowed for the factor table")

    p = argparse.ArgumentParser(prog="mulcomp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", parents=[common], help="describe a construction")
    c.add_argument("recipe")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="exhaustively verify n = a*b up to X")
    v.add_argument("recipe")
    v.add_argument("--x", type=_positive_int, default=None)
    v.add_argument("--method", choices=("witness", "scan", "both"), default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("series", parents=[common], help="counts and ratio functionals as CSV")
    s.add_argument("recipe")
    s.add_argument("--checkpoints", type=_int_list, default=None)
    s.add_argument("--geometric", type=_int_list, default=None, help="start,factor,count")
    s.set_defaults(func=cmd_series)

    b = sub.add_parser("buchstab", parents=[common], help="tabulate the Buchstab function")
    b.add_argument("--umax", type=float, default=None)
    b.add_argument("--h", type=float, default=None)
    b.set_defaults(func=cmd_buchstab)

    f = sub.add_parser("phi", parents=[common], help="exact rough count and its estimate")
    f.add_argument("--x", type=_positive_int, default=None)
    f.add_argument("--y", type=_positive_int, default=None)
    f.add_argument("--umax", type=float, default=None)
    f.set_defaults(func=cmd_phi)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        return args.func(args, cfg)
    except ParseError as e:
        print(f"mulcomp: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, InvalidArgumentError, OutOfRangeError, EmptyResultError, OSError) as e:
        print(f"mulcomp: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimitError, MemoryError) as e:
        print(f"mulcomp: resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())

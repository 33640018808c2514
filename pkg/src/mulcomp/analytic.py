"""Buchstab function, rough-number counts and Mertens-type checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import mertens_product
from .errors import InvalidArgumentError, OutOfRangeError

EULER_GAMMA = 0.57721566490153286060651209008240243
EXP_GAMMA = 1.78107241799019798523650410310717954
EXP_NEG_GAMMA = 0.56145948356688516982414321479088078

DEFAULT_U_MAX = 20.0


@dataclass(frozen=True)
class BuchstabTable:
    u_max: float
    h: float
    values: np.ndarray
    lipschitz: float  # max |omega(u+h) - omega(u)| / h over the grid

    @property
    def grid(self):
        return 1.0 + self.h * np.arange(len(self.values))


def _steps_per_unit(h):
    m = round(1.0 / h)
    if m < 1 or abs(m * h - 1.0) > 1e-9:
        raise InvalidArgumentError(f"h={h} must divide 1 evenly")
    return m


def build_buchstab(u_max=DEFAULT_U_MAX, h=1e-3):
    """Solve ``(u w(u))' = w(u-1)``, ``w(u) = 1/u`` on ``[1, 2]``, by the method of steps.

    ``g = u w`` is advanced with the trapezoid rule; the delayed values
    ``w(u-1)`` always come from the interval already on the grid.
    """
    if not 0 < h <= 0.01:
        raise InvalidArgumentError(f"step h={h} must lie in (0, 0.01]")
    if u_max < 2:
        raise InvalidArgumentError(f"u_max={u_max} must be >= 2")
    m = _steps_per_unit(h)
    n = round((u_max - 1.0) * m)
    if abs(n / m - (u_max - 1.0)) > 1e-9:
        raise InvalidArgumentError(f"u_max - 1 = {u_max - 1} is not a multiple of h={h}")

    u = 1.0 + np.arange(n + 1) / m
    w = np.empty(n + 1)
    w[: m + 1] = 1.0 / u[: m + 1]
    w[m] = 0.5
    g = 1.0
    half = 0.5 / m
    for i in range(m + 1, n + 1):
        g += half * (w[i - 1 - m] + w[i - m])
        w[i] = g / u[i]
    lip = float(np.max(np.abs(np.diff(w))) * m) if n else 0.0
    w.flags.writeable = False
    return BuchstabTable(float(u_max), 1.0 / m, w, lip)


def eval_buchstab(tbl, u):
    """Linear interpolation on the grid; exact at grid points."""
    if not 1.0 <= u <= tbl.u_max + 1e-12:
        raise OutOfRangeError(f"u={u} outside [1, {tbl.u_max}]")
    pos = (u - 1.0) / tbl.h
    i = round(pos)
    if abs(pos - i) < 1e-9:
        return float(tbl.values[min(i, len(tbl.values) - 1)])
    i = int(math.floor(pos))
    frac = pos - i
    return float(tbl.values[i] * (1.0 - frac) + tbl.values[i + 1] * frac)


def phi_rough(x, y, t):
    """Count of ``n <= x`` with no prime factor below ``y`` (``n = 1`` included)."""
    if y < 2:
        raise OutOfRangeError(f"y={y} must be >= 2")
    t.check(x, "x")
    return 1 + int(np.count_nonzero(t.spf[2 : x + 1] >= y))


def _u(x, y, tbl):
    if y < 2 or x < 2:
        raise OutOfRangeError("need x >= 2 and y >= 2")
    u = math.log(x) / math.log(y)
    if not 1.0 - 1e-12 <= u <= tbl.u_max:
        raise OutOfRangeError(f"u = log x / log y = {u:.6g} outside [1, {tbl.u_max}]")
    return min(max(u, 1.0), tbl.u_max)


def warlimont_estimate(x, y, tbl, t):
    """``e^gamma w(u) x prod_{p<y} (1 - 1/p)`` with ``u = log x / log y``."""
    u = _u(x, y, tbl)
    return EXP_GAMMA * eval_buchstab(tbl, u) * x * mertens_product(y, t)


def warlimont_error_ratio(x, y, tbl, t):
    """Empirical constant: ``|phi - estimate| log x / (x prod_{p<y} (1 - 1/p))``."""
    est = warlimont_estimate(x, y, tbl, t)
    return abs(phi_rough(x, y, t) - est) * math.log(x) / (x * mertens_product(y, t))


def loglog_deviation(n, t):
    """``sum_{p<N} 1/p - log log N``."""
    if n < 3:
        raise OutOfRangeError(f"N={n} must be >= 3")
    t.check(n, "N")
    ps = t.primes[: np.searchsorted(t.primes, n, "left")]
    return math.fsum((1.0 / ps).tolist()) - math.log(math.log(n))


def sqrt_window_sum(x, t):
    """Sum of ``1/p`` over primes ``sqrt(x) <= p <= x``; tends to ``log 2``."""
    t.check(x, "x")
    ps = t.primes
    lo = math.isqrt(x - 1) + 1
    sel = ps[np.searchsorted(ps, lo, "left"):np.searchsorted(ps, x, "right")]
    return math.fsum((1.0 / sel).tolist())

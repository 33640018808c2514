"""Exhaustive complement verification and counting-function diagnostics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .sets import BLOCK, _blocks, _check_checkpoints, indicator

METHODS = ("witness", "scan", "both")


@dataclass(frozen=True)
class VerificationReport:
    pair: object
    x: int
    method: str
    missing: tuple
    witness_failures: tuple  # (n, a, b)
    agree: bool | None = None  # only for method="both"

    @property
    def verified(self):
        return not self.missing and not self.witness_failures and self.agree is not False

    def summary(self):
        head = "PASS" if self.verified else "FAIL"
        line = (f"{head} pair={self.pair} verified_up_to={self.x} method={self.method} "
                f"missing={len(self.missing)} witness_failures={len(self.witness_failures)}")
        if self.agree is not None:
            line += f" methods_agree={'yes' if self.agree else 'no'}"
        first = min([n for n in self.missing] + [w[0] for w in self.witness_failures], default=None)
        if first is not None:
            line += f" first_counterexample={first}"
        return line

    def failure_rows(self):
        """``(n, status, a, b)`` rows sorted by ``n``; ``a``/``b`` empty for missing."""
        rows = [(n, "missing", "", "") for n in self.missing]
        rows += [(n, "witness-failure", a, b) for n, a, b in self.witness_failures]
        return sorted(rows, key=lambda r: (r[0], r[1]))


def _witness_valid(pair, x, t, threads):
    a_ind = indicator(pair.a_desc, x, t, threads)
    b_ind = indicator(pair.b_desc, x, t, threads)
    ok = np.zeros(x + 1, dtype=bool)
    bad = []

    def run(block):
        lo, hi = block
        n = np.arange(lo, hi, dtype=np.int64)
        a, b = pair.decompose_array(n, t)
        good = (a * b == n) & (a >= 1) & (b >= 1) & (a <= x) & (b <= x)
        good[good] &= a_ind[a[good]] & b_ind[b[good]]
        ok[lo:hi] = good
        return [(int(n[i]), int(a[i]), int(b[i])) for i in np.flatnonzero(~good)]

    blocks = _blocks(1, x, BLOCK)
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    for p in parts:
        bad.extend(p)
    return ok, bad


def _scan_covered(pair, x, t, threads):
    """Mark every product ``a * b <= x``, iterating over the sparser side."""
    a_ind = indicator(pair.a_desc, x, t, threads)
    b_ind = indicator(pair.b_desc, x, t, threads)
    outer, inner = (b_ind, a_ind) if b_ind.sum() <= a_ind.sum() else (a_ind, b_ind)
    covered = np.zeros(x + 1, dtype=bool)
    for s in np.flatnonzero(outer).tolist():
        covered[s :: s] |= inner[1 : x // s + 1]
    return covered


def verify_mc2(pair, x, method, t, threads=1):
    """Check that every ``n <= x`` is ``a * b`` with ``a`` in A and ``b`` in B.

    ``witness`` validates the pair's decomposition rule at each ``n``;
    ``scan`` marks all products independently of the rule; ``both`` runs
    the two and compares the sets of representable ``n``.
    """
    if method not in METHODS:
        raise InvalidArgumentError(f"method must be one of {METHODS}")
    if method in ("witness", "both") and pair.rule is None:
        raise InvalidArgumentError(f"{pair} has no decomposition rule; use method=scan")
    t.check(x, "X")
    missing, failures, agree = (), (), None
    if method in ("witness", "both"):
        ok, bad = _witness_valid(pair, x, t, threads)
        failures = tuple(bad)
        if method == "witness":
            missing = tuple(n for n, _, _ in bad)
    if method in ("scan", "both"):
        covered = _scan_covered(pair, x, t, threads)
        missing = tuple(np.flatnonzero(~covered[1:]) + 1)
        missing = tuple(int(n) for n in missing)
        if method == "both":
            agree = bool(np.array_equal(ok[1:], covered[1:]))
    return VerificationReport(pair, x, method, missing, failures, agree)


@dataclass(frozen=True)
class RatioRow:
    x: int
    a: int
    b: int
    r1: float
    r2: float | None
    r3: float | None
    r4: float | None


@dataclass(frozen=True)
class RatioSeries:
    pair: object
    rows: tuple


def ratio_row(x, a, b):
    hi, lo = max(a, b), min(a, b)
    r1 = a * b / x
    r2 = hi * math.log(lo) / x if lo >= 2 else None
    r3 = hi * math.sqrt(math.log(lo)) / x if lo >= 2 else None
    r4 = hi * math.sqrt(math.log(x)) / x if x >= 2 else None
    return RatioRow(x, a, b, r1, r2, r3, r4)


def ratio_series(pair, checkpoints, t, threads=1):
    """Exact ``A(x)``, ``B(x)`` at each checkpoint and the four ratio functionals.

    Ratios involving ``log min{A, B}`` are ``None`` when the minimum is below 2,
    and ``r4`` is ``None`` at ``x = 1``.
    """
    cps = _check_checkpoints(checkpoints, t)
    ca = np.cumsum(indicator(pair.a_desc, cps[-1], t, threads))
    cb = np.cumsum(indicator(pair.b_desc, cps[-1], t, threads))
    return RatioSeries(pair, tuple(ratio_row(x, int(ca[x]), int(cb[x])) for x in cps))


def coverage_upper_bound(pair, x, threshold, side, t):
    """Upper bound on how many ``n <= x`` the pair can represent.

    With ``side="A"``: ``sum_{a<threshold} B(x/a) + sum_{threshold<=a<=x} x/a``
    over ``a`` in A; ``side="B"`` swaps the roles. A value below ``x`` proves
    the pair fails at ``x``.
    """
    if threshold < 1:
        raise InvalidArgumentError("threshold must be >= 1")
    if side not in ("A", "B"):
        raise InvalidArgumentError("side must be 'A' or 'B'")
    t.check(x, "x")
    outer, inner = (pair.a_desc, pair.b_desc) if side == "A" else (pair.b_desc, pair.a_desc)
    members = np.flatnonzero(indicator(outer, x, t))
    cum_inner = np.cumsum(indicator(inner, x, t))
    small = members[members < threshold]
    large = members[members >= threshold]
    head = int(cum_inner[x // small].sum()) if small.size else 0
    return head + math.fsum((x / large).tolist())


@dataclass(frozen=True)
class TrendReport:
    checkpoints: tuple
    ratios: tuple
    decreasing: bool
    heuristic: bool = True  # a finite trend, never a limit claim


def little_o_trend(series):
    """``B(x)/x`` at each checkpoint and whether it strictly decreases."""
    cps = series.checkpoints
    if len(cps) < 4:
        raise InvalidArgumentError("little_o_trend needs at least 4 checkpoints")
    if cps[-1] < 1000 * cps[0]:
        raise InvalidArgumentError("checkpoints must span at least 3 decades")
    ratios = tuple(c / x for x, c in zip(cps, series.counts))
    dec = all(a > b for a, b in zip(ratios, ratios[1:]))
    return TrendReport(tuple(cps), ratios, dec)

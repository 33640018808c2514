"""Explicit multiplicative-complement constructions.

Each construction yields a :class:`ComplementPair`: two integer-set
descriptors plus, where one exists, a decomposition rule mapping every ``n``
to a witness ``(a, b)`` with ``a * b == n``.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from .arith import factor_stats, factorize, prime_mask
from .errors import EmptyResultError, InvalidArgumentError, OutOfRangeError
from .sets import (
    ALL_PRIMES,
    EvenValuationAtFirstK,
    ExplicitInts,
    ExplicitPrimes,
    Intervals,
    IntSetDesc,
    PrimeSetDesc,
    SquarefreeOverFirstK,
    SquarefreeOverQ,
    SquarefreePartAvoidsQ,
    Thinned,
    count,
    first_k_primes,
    largest_prime_factor,
)

_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def _sub(k):
    return str(k).translate(_SUBSCRIPT)


# -- target functions -------------------------------------------------------------

def _x_over_logx_loglogx(x):
    lx = math.log(x)
    return x / (lx * math.log(lx))


_TARGETS = {
    "x": (lambda x: float(x), 1),
    "x/logx": (lambda x: x / math.log(x), 2),
    "x/logx-loglogx": (_x_over_logx_loglogx, 16),
    "sqrtx": (math.sqrt, 1),
    "zero": (lambda x: 0.0, 1),
}


@dataclass(frozen=True)
class TargetFunction:
    """A named closed-form growth function with the start of its domain."""

    name: str

    def __post_init__(self):
        if self.name not in _TARGETS:
            raise InvalidArgumentError(
                f"unknown target function {self.name!r}; known: {', '.join(_TARGETS)}")

    @property
    def x_min(self):
        return _TARGETS[self.name][1]

    def __call__(self, x):
        if x < self.x_min:
            raise OutOfRangeError(f"f={self.name} is undefined below {self.x_min}")
        return _TARGETS[self.name][0](x)

    def __str__(self):
        return self.name


# -- pairs ----------------------------------------------------------------------------

@dataclass(frozen=True)
class OddValuationSplit:
    """``a`` = product of the primes of Q with odd valuation, ``b = n / a``."""

    q: PrimeSetDesc

    def __str__(self):
        return f"odd-valuation-split({self.q})"


@dataclass(frozen=True)
class SmallPrimeParitySplit:
    """``b`` = product of the first ``k`` primes with odd valuation, ``a = n / b``."""

    k: int

    def __str__(self):
        return f"small-prime-parity-split(k={self.k})"


@dataclass(frozen=True)
class ComplementPair:
    a_desc: IntSetDesc
    b_desc: IntSetDesc
    rule: OddValuationSplit | SmallPrimeParitySplit | None = None
    label: str = ""

    def decompose(self, n, t):
        if self.rule is None:
            raise InvalidArgumentError("pair has no decomposition rule")
        t.check(n)
        if isinstance(self.rule, OddValuationSplit):
            mask = self.rule.q.mask(t)
            a = math.prod(p for p, e in factorize(n, t) if e & 1 and mask[p])
            return a, n // a
        small = set(first_k_primes(self.rule.k).primes)
        b = math.prod(p for p, e in factorize(n, t) if e & 1 and p in small)
        return n // b, b

    def decompose_array(self, n, t):
        """Vectorized :meth:`decompose` over an int64 array."""
        if self.rule is None:
            raise InvalidArgumentError("pair has no decomposition rule")
        if isinstance(self.rule, OddValuationSplit):
            a = factor_stats(n, t, self.rule.q.mask(t)).q_odd
            return a, n // a
        b = factor_stats(n, t, first_k_primes(self.rule.k).mask(t)).q_odd
        return n // b, b

    def __str__(self):
        return self.label or f"pair(A={self.a_desc};B={self.b_desc})"


def lemma_q_pair(q):
    """Squarefree-over-Q times squarefree-part-avoids-Q."""
    return ComplementPair(SquarefreeOverQ(q), SquarefreePartAvoidsQ(q),
                          OddValuationSplit(q), f"lemma-q({q})")


def vegeseset_pair(k):
    """Even valuation at the first ``k`` primes times their ``2^k`` squarefree products."""
    if k < 1:
        raise InvalidArgumentError("k must be >= 1")
    return ComplementPair(EvenValuationAtFirstK(k), SquarefreeOverFirstK(k),
                          SmallPrimeParitySplit(k), f"vegeseset(k={k})")


def explicit_pair(a_values, b_values):
    a, b = ExplicitInts(tuple(a_values)), ExplicitInts(tuple(b_values))
    return ComplementPair(a, b, None, f"explicit(A={','.join(map(str, a.values))};"
                                      f"B={','.join(map(str, b.values))})")


def vegeseset_lower_bound(b_desc, x, t):
    """Product of ``1 - 1/p`` over the largest prime factors of members of a finite B."""
    t.check(x, "x")
    if not b_desc.finite:
        raise InvalidArgumentError(f"{b_desc} is not a finite set")
    if isinstance(b_desc, SquarefreeOverFirstK):
        v = set(first_k_primes(b_desc.k).primes)
    else:
        v = {largest_prime_factor(n, t) for n in b_desc.elements(t) if n > 1}
    return math.prod(1.0 - 1.0 / p for p in sorted(v))


# -- interval schedule -------------------------------------------------------------------

@dataclass(frozen=True)
class ScheduleEntry:
    k: int
    m: int | None
    n: int | None
    certified: bool
    binding: str = ""
    recip_sum: float | None = None
    count_at_m: int | None = None      # A(M_k), when M_k fits the table
    ratio_bound: float | None = None   # 2^{pi(N_{k-1})} / f(M_k)


@dataclass
class IntervalSchedule:
    f: TargetFunction
    cap: int
    entries: list
    q: Intervals | None = None

    @property
    def certified(self):
        return [e for e in self.entries if e.certified]


def _smallest_m(f, lo, need, cap):
    """Smallest integer ``m`` in ``[lo, cap]`` with ``f(m) > need`` (f nondecreasing)."""
    lo = max(lo, f.x_min)
    if lo > cap:
        return None
    if f(lo) > need:
        return lo
    step = 1
    hi = lo + step
    while hi <= cap and not f(hi) > need:
        lo = hi
        step *= 2
        hi = lo + step
    hi = min(hi, cap)
    if not f(hi) > need:
        return None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) > need:
            hi = mid
        else:
            lo = mid
    return hi


def liminffx_schedule(f, k_max, cap, t):
    """Greedy interval schedule ``(M_k, N_k]`` certified up to ``cap``.

    For each ``k`` the smallest ``M_k`` exceeding both the primorial of
    ``N_{k-1}`` and ``N_{k-1}`` itself with ``k 2^{N_{k-1}} < f(M_k)``, then the
    smallest ``N_k`` with the prime reciprocal sum over ``(M_k, N_k]`` at least 1.
    """
    if k_max < 1:
        raise InvalidArgumentError("k_max must be >= 1")
    if cap > t.capacity:
        raise OutOfRangeError(f"cap={cap} exceeds table capacity {t.capacity}")
    primes = t.primes
    entries = []
    prev_n = 0
    for k in range(1, k_max + 1):
        if entries and not entries[-1].certified:
            entries.append(ScheduleEntry(k, None, None, False, f"depends on uncertified entry {k - 1}"))
            continue
        primorial = math.prod(int(p) for p in primes[: np.searchsorted(primes, prev_n, "right")])
        if primorial + 1 > cap:
            entries.append(ScheduleEntry(k, None, None, False, f"M{_sub(k)} > {primorial}"))
            continue
        need = k * 2**prev_n
        m = _smallest_m(f, max(primorial, prev_n) + 1, need, cap)
        if m is None:
            entries.append(ScheduleEntry(k, None, None, False, f"f(M{_sub(k)}) > {need}"))
            continue
        start = np.searchsorted(primes, m, "right")
        stop = np.searchsorted(primes, cap, "right")
        cum = np.cumsum(1.0 / primes[start:stop])
        j = int(np.searchsorted(cum, 1.0 - 1e-9, "left"))
        # settle the crossing with compensated sums
        while j < len(cum) and math.fsum((1.0 / primes[start : start + j + 1]).tolist()) < 1.0:
            j += 1
        while j > 0 and math.fsum((1.0 / primes[start : start + j]).tolist()) >= 1.0:
            j -= 1
        if j >= len(cum):
            entries.append(ScheduleEntry(k, m, None, False, f"N{_sub(k)} > {cap}"))
            continue
        n = int(primes[start + j])
        s = math.fsum((1.0 / primes[start : start + j + 1]).tolist())
        pi_prev = int(np.searchsorted(primes, prev_n, "right"))
        entries.append(ScheduleEntry(k, m, n, True, "", s, None, 2.0**pi_prev / f(m)))
        prev_n = n

    certified = [e for e in entries if e.certified]
    q = Intervals(tuple((e.m, e.n) for e in certified)) if certified else None
    if q is not None:
        a = SquarefreeOverQ(q)
        entries = [
            e if not e.certified or e.m > t.capacity
            else ScheduleEntry(e.k, e.m, e.n, True, "", e.recip_sum, count(a, e.m, t), e.ratio_bound)
            for e in entries
        ]
    return IntervalSchedule(f, cap, entries, q)


# -- thinned R-set ------------------------------------------------------------------------

@dataclass
class RSetResult:
    r: tuple
    c1: float
    f: TargetFunction
    x_min: int
    x_max: int
    n0: int | None
    q: Thinned | None
    max_window: float | None = None   # max window sum at the chosen N0
    n0_limit: int = 1000
    certified_up_to: int = field(init=False)

    def __post_init__(self):
        self.certified_up_to = self.x_max


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, v):
        s = self.s + v
        if abs(self.s) >= abs(v):
            self.c += (self.s - s) + v
        else:
            self.c += (v - s) + self.s
        self.s = s

    @property
    def value(self):
        return self.s + self.c


def _rset_rule(count_before, recip_before, p, f, c1):
    return count_before + 1 <= f(p) / math.exp((2.0 / c1) * recip_before)


def _build_r(f, c1, x_min, x_max, t):
    ps = t.primes
    cand = ps[np.searchsorted(ps, x_min, "left"):np.searchsorted(ps, x_max, "right")]
    r = []
    acc = _Neumaier()
    for p in cand.tolist():
        if _rset_rule(len(r), acc.value, p, f, c1):
            r.append(p)
            acc.add(1.0 / p)
    return cand, r


def window_sum_max(seq, x_max):
    """Max over ``x <= x_max`` of the sum of ``1/s`` for ``s`` in ``seq`` with ``sqrt(x) <= s <= x``."""
    seq = [s for s in seq if s <= x_max]
    if not seq:
        return 0.0
    prefix = np.concatenate([[0.0], np.cumsum(1.0 / np.asarray(seq, dtype=np.float64))])
    best = 0.0
    # between consecutive members the window only loses terms, so maxima sit at members
    for j, x in enumerate(seq):
        lo = bisect.bisect_left(seq, math.isqrt(x - 1) + 1 if x > 1 else 1)
        best = max(best, prefix[j + 1] - prefix[lo])
    return float(best)


def limsupfxyes_build(f, c1, x_max, t, x_min=None, n0_limit=1000):
    """Sequential R-set and its ``N0``-thinning.

    A prime ``p`` joins R iff ``R(p-1) + 1 <= f(p) / exp((2/c1) sum_{r in R, r<p} 1/r)``.
    ``N0`` is the least positive integer whose thinned window sums stay below
    ``c1 log 2 / 2`` for every ``x <= x_max``; that certification holds up to
    ``x_max`` only.
    """
    if c1 <= 0:
        raise InvalidArgumentError("c1 must be positive")
    t.check(x_max, "X")
    x_min = f.x_min if x_min is None else max(x_min, f.x_min)
    cand, r = _build_r(f, c1, x_min, x_max, t)
    if len(cand) == 0:
        raise EmptyResultError(f"no prime in [{x_min}, {x_max}]")
    limit = c1 * math.log(2) / 2
    n0 = best = None
    for cand_n0 in range(1, n0_limit + 1):
        w = window_sum_max(r[cand_n0 - 1 :: cand_n0], x_max)
        if w < limit:
            n0, best = cand_n0, w
            break
    rset = ExplicitPrimes(tuple(r))
    q = Thinned(rset, n0) if n0 is not None else None
    return RSetResult(tuple(r), c1, f, x_min, x_max, n0, q, best, n0_limit)


def replay_rset(res, t):
    """Re-derive R from scratch and compare; True iff identical."""
    _, r = _build_r(res.f, res.c1, res.x_min, res.x_max, t)
    return tuple(r) == res.r


def replay_rule(res, t):
    """Check every candidate prime against the inclusion rule using the stored R.

    Independent of the builder's loop: membership and running sums are
    recomputed from the stored set with exact rational prefix sums.
    """
    from fractions import Fraction

    ps = t.primes
    cand = ps[np.searchsorted(ps, res.x_min, "left"):np.searchsorted(ps, res.x_max, "right")]
    members = set(res.r)
    recip = Fraction(0)
    cnt = 0
    for p in cand.tolist():
        ok = cnt + 1 <= res.f(p) / math.exp((2.0 / res.c1) * float(recip))
        if ok != (p in members):
            return False
        if p in members:
            cnt += 1
            recip += Fraction(1, p)
    return True


@dataclass(frozen=True)
class AkfxRow:
    k: int
    count: int
    bound: float
    passed: bool


def akfx_check(q, f, c1, x, k_max, t):
    """Compare ``A_k(x)`` (squarefree, exactly k prime factors, all in Q) to its bound."""
    t.check(x, "x")
    stats = factor_stats(np.arange(1, x + 1, dtype=np.int64), t, q.mask(t))
    ok = stats.squarefree & stats.all_in_q
    counts = np.bincount(stats.omega[ok], minlength=k_max + 1)
    qs = q.enumerate(t)
    s = math.fsum((1.0 / qs[qs < x]).tolist())
    lam = 2.0 / c1 * s
    fx = f(x)
    rows = []
    for k in range(1, k_max + 1):
        bound = math.exp(1.0 / c1) * fx * lam ** (k - 1) / (math.factorial(k - 1) * math.exp(lam))
        a_k = int(counts[k]) if k < len(counts) else 0
        rows.append(AkfxRow(k, a_k, bound, a_k <= bound))
    return rows


__all__ = [
    "TargetFunction", "ComplementPair", "OddValuationSplit", "SmallPrimeParitySplit",
    "lemma_q_pair", "vegeseset_pair", "explicit_pair", "vegeseset_lower_bound",
    "ScheduleEntry", "IntervalSchedule", "liminffx_schedule",
    "RSetResult", "limsupfxyes_build", "replay_rset", "replay_rule", "window_sum_max",
    "AkfxRow", "akfx_check", "ALL_PRIMES", "prime_mask",
]

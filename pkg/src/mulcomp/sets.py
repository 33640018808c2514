"""Describable sets of primes and of positive integers.

Descriptors are small immutable values. Their ``str`` is the single-line
textual form understood by :func:`mulcomp.lang.parse_int_set` and
:func:`mulcomp.lang.parse_prime_set`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import factor_stats, factorize, prime_mask, squarefree_part
from .errors import InvalidArgumentError, OutOfRangeError

BLOCK = 1 << 20


# -- prime sets ---------------------------------------------------------------

class PrimeSetDesc:
    def mask(self, t):
        """Boolean indicator over ``[0, t.capacity]``; cached on the table."""
        key = ("qmask", self)
        if key not in t.cache:
            m = self._mask(t)
            m.flags.writeable = False
            t.cache[key] = m
        return t.cache[key]

    def contains(self, p, t):
        t.check(p, "p")
        return bool(self.mask(t)[p])

    def enumerate(self, t, hi=None):
        ps = t.primes[self.mask(t)[t.primes]]
        return ps if hi is None else ps[: np.searchsorted(ps, hi, "right")]

    def reciprocal_sum(self, lo, hi, t):
        """Sum of ``1/q`` over members in ``(lo, hi]``."""
        t.check(hi, "hi")
        ps = self.enumerate(t)
        sel = ps[np.searchsorted(ps, lo, "right"):np.searchsorted(ps, hi, "right")]
        return math.fsum((1.0 / sel).tolist())


@dataclass(frozen=True)
class ExplicitPrimes(PrimeSetDesc):
    primes: tuple

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", ps)
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise InvalidArgumentError("explicit prime list must be strictly increasing")
        for p in ps:
            if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
                raise InvalidArgumentError(f"{p} is not prime")

    def _mask(self, t):
        return prime_mask(self.primes, t.capacity)

    def __str__(self):
        return "explicit:[" + ",".join(map(str, self.primes)) + "]"


@dataclass(frozen=True)
class Intervals(PrimeSetDesc):
    """All primes in a union of half-open intervals ``(M_k, N_k]``."""

    intervals: tuple

    def __post_init__(self):
        iv = tuple((int(m), int(n)) for m, n in self.intervals)
        object.__setattr__(self, "intervals", iv)
        if not iv:
            raise InvalidArgumentError("intervals: need at least one (M,N]")
        for (m, n), nxt in zip(iv, iv[1:] + (None,)):
            if not 0 <= m < n:
                raise InvalidArgumentError(f"interval ({m},{n}] needs M < N")
            if nxt is not None and not n < nxt[0]:
                raise InvalidArgumentError("intervals must be disjoint and increasing")

    def _mask(self, t):
        m = np.zeros(t.capacity + 1, dtype=bool)
        for lo, hi in self.intervals:
            m[lo + 1 : min(hi, t.capacity) + 1] = True
        m &= t.spf == np.arange(t.capacity + 1)
        m[:2] = False
        return m

    def __str__(self):
        return "intervals:" + ",".join(f"({m},{n}]" for m, n in self.intervals)


@dataclass(frozen=True)
class ResidueClass(PrimeSetDesc):
    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidArgumentError("modulus must be >= 1")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def _mask(self, t):
        ps = t.primes
        return prime_mask(ps[ps % self.modulus == self.residue], t.capacity)

    def __str__(self):
        if self.modulus == 1:
            return "all"
        return f"residue:{self.residue} mod {self.modulus}"


ALL_PRIMES = ResidueClass(1, 0)


@dataclass(frozen=True)
class Thinned(PrimeSetDesc):
    """Every ``n0``-th member ``r_{n0}, r_{2 n0}, ...`` of ``base``."""

    base: PrimeSetDesc
    n0: int

    def __post_init__(self):
        if self.n0 < 1:
            raise InvalidArgumentError("n0 must be >= 1")

    def _mask(self, t):
        return prime_mask(self.base.enumerate(t)[self.n0 - 1 :: self.n0], t.capacity)

    def __str__(self):
        return f"thinned({self.base},n0={self.n0})"


# -- integer sets ---------------------------------------------------------------

class IntSetDesc:
    finite = False

    def member(self, n, t):
        raise NotImplementedError

    def indicator_block(self, n, t):
        """Vectorized membership for an int64 array ``n``."""
        raise NotImplementedError


@dataclass(frozen=True)
class AllInts(IntSetDesc):
    def member(self, n, t):
        t.check(n)
        return True

    def indicator_block(self, n, t):
        return np.ones(n.shape, dtype=bool)

    def __str__(self):
        return "all"


@dataclass(frozen=True)
class ExplicitInts(IntSetDesc):
    values: tuple
    finite = True

    def __post_init__(self):
        vs = tuple(sorted(set(int(v) for v in self.values)))
        if vs and vs[0] < 1:
            raise InvalidArgumentError("explicit sets hold positive integers")
        object.__setattr__(self, "values", vs)

    def member(self, n, t):
        t.check(n)
        return n in self.values

    def indicator_block(self, n, t):
        return np.isin(n, np.asarray(self.values, dtype=np.int64))

    def elements(self, t):
        return list(self.values)

    def __str__(self):
        return "explicit(" + ",".join(map(str, self.values)) + ")"


@dataclass(frozen=True)
class SquarefreeOverQ(IntSetDesc):
    """Squarefree ``n`` whose prime factors all lie in Q (1 included)."""

    q: PrimeSetDesc

    def member(self, n, t):
        mask = self.q.mask(t)
        return all(e == 1 and mask[p] for p, e in factorize(n, t))

    def indicator_block(self, n, t):
        s = factor_stats(n, t, self.q.mask(t))
        return s.squarefree & s.all_in_q

    def __str__(self):
        return f"sf-over-q({self.q})"


@dataclass(frozen=True)
class SquarefreePartAvoidsQ(IntSetDesc):
    """``n`` whose squarefree part has no prime factor in Q."""

    q: PrimeSetDesc

    def member(self, n, t):
        mask = self.q.mask(t)
        return not any(e & 1 and mask[p] for p, e in factorize(n, t))

    def indicator_block(self, n, t):
        return factor_stats(n, t, self.q.mask(t)).q_odd == 1

    def __str__(self):
        return f"sfpart-avoids-q({self.q})"


def first_k_primes(k):
    """The first ``k`` primes as an :class:`ExplicitPrimes` descriptor."""
    ps, c = [], 2
    while len(ps) < k:
        if all(c % p for p in ps if p * p <= c):
            ps.append(c)
        c += 1
    return ExplicitPrimes(tuple(ps))


@dataclass(frozen=True)
class EvenValuationAtFirstK(IntSetDesc):
    """``n = m r^2`` with ``m`` coprime to the first ``k`` primes."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgumentError("k must be >= 1")

    @property
    def q(self):
        return first_k_primes(self.k)

    def member(self, n, t):
        small = set(self.q.primes)
        return all(e % 2 == 0 for p, e in factorize(n, t) if p in small)

    def indicator_block(self, n, t):
        return factor_stats(n, t, self.q.mask(t)).q_odd == 1

    def __str__(self):
        return f"evenval(k={self.k})"


@dataclass(frozen=True)
class SquarefreeOverFirstK(IntSetDesc):
    """The ``2^k`` squarefree products of the first ``k`` primes."""

    k: int
    finite = True

    def __post_init__(self):
        if self.k < 1:
            raise InvalidArgumentError("k must be >= 1")

    def elements(self, t=None):
        out = [1]
        for p in first_k_primes(self.k).primes:
            out += [v * p for v in out]
        return sorted(out)

    def member(self, n, t):
        t.check(n)
        small = set(first_k_primes(self.k).primes)
        return all(e == 1 and p in small for p, e in factorize(n, t))

    def indicator_block(self, n, t):
        return np.isin(n, np.asarray(self.elements(), dtype=np.int64))

    def __str__(self):
        return f"sf-first-k(k={self.k})"


# -- operations -------------------------------------------------------------------

def member(d, n, t):
    t.check(n)
    return bool(d.member(n, t))


def _blocks(lo, hi, block=BLOCK):
    return [(a, min(a + block, hi + 1)) for a in range(lo, hi + 1, block)]


def indicator(d, x, t, threads=1):
    """Membership of ``0..x`` as a bool array (index 0 is False).

    The range is split into fixed blocks; with ``threads > 1`` blocks are
    evaluated concurrently and written into disjoint slices, so the result
    does not depend on the thread count.
    """
    t.check(x, "x")
    key = ("ind", d)
    if key in t.cache and len(t.cache[key]) > x:
        return t.cache[key][: x + 1]
    out = np.zeros(x + 1, dtype=bool)

    def run(b):
        lo, hi = b
        out[lo:hi] = d.indicator_block(np.arange(lo, hi, dtype=np.int64), t)

    blocks = _blocks(1, x)
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(run, blocks))
    else:
        for b in blocks:
            run(b)
    out.flags.writeable = False
    t.cache[key] = out
    return out


def count(d, x, t, threads=1):
    """``A(x)``: number of members ``<= x``."""
    return int(np.count_nonzero(indicator(d, x, t, threads)))


@dataclass(frozen=True)
class CountingSeries:
    desc: IntSetDesc
    checkpoints: tuple
    counts: tuple


def _check_checkpoints(checkpoints, t):
    cps = [int(c) for c in checkpoints]
    if not cps:
        raise InvalidArgumentError("need at least one checkpoint")
    if any(a >= b for a, b in zip(cps, cps[1:])):
        raise InvalidArgumentError("checkpoints must be strictly increasing")
    if cps[0] < 1:
        raise OutOfRangeError("checkpoints must be positive")
    t.check(cps[-1], "checkpoint")
    return cps


def counting_series(d, checkpoints, t, threads=1):
    cps = _check_checkpoints(checkpoints, t)
    cum = np.cumsum(indicator(d, cps[-1], t, threads))
    return CountingSeries(d, tuple(cps), tuple(int(cum[c]) for c in cps))


def reciprocal_sum_abel(d, N, t):
    """``(direct, abel)`` evaluations of the sum of ``1/a`` over members ``a <= N``.

    ``abel`` is the summation-by-parts form
    ``sum_{n<N} A(n)/(n(n+1)) + A(N)/N``; both are exactly equal in exact
    arithmetic.
    """
    ind = indicator(d, N, t)
    members = np.flatnonzero(ind)
    direct = math.fsum((1.0 / members).tolist())
    cum = np.cumsum(ind)
    n = np.arange(1, N, dtype=np.float64)
    abel = math.fsum((cum[1:N] / (n * (n + 1.0))).tolist()) + cum[N] / N
    return direct, abel


def largest_prime_factor(n, t):
    fs = factorize(n, t)
    return fs[-1][0] if fs else 1


__all__ = [
    "PrimeSetDesc", "ExplicitPrimes", "Intervals", "ResidueClass", "Thinned", "ALL_PRIMES",
    "IntSetDesc", "AllInts", "ExplicitInts", "SquarefreeOverQ", "SquarefreePartAvoidsQ",
    "EvenValuationAtFirstK", "SquarefreeOverFirstK", "first_k_primes",
    "member", "indicator", "count", "CountingSeries", "counting_series",
    "reciprocal_sum_abel", "largest_prime_factor", "squarefree_part",
]

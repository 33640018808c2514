"""Sieve-backed integer arithmetic.

Everything downstream factors through a smallest-prime-factor table, so a
single :class:`FactorTable` built once per run serves membership tests,
counting scans and the analytic quantities.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError, OutOfRangeError, ResourceLimitError

SEGMENT_SIZE = 1 << 22
DEFAULT_MEMORY_BUDGET = 4 << 30  # bytes


@dataclass(frozen=True, eq=False)
class FactorTable:
    capacity: int
    spf: np.ndarray = field(repr=False)
    # derived arrays (prime masks, indicators) keyed by their producer
    cache: dict = field(default_factory=dict, repr=False)

    def check(self, n, what="n"):
        if n > self.capacity:
            raise OutOfRangeError(f"{what}={n} exceeds table capacity {self.capacity}")
        if n < 1:
            raise OutOfRangeError(f"{what}={n} must be a positive integer")

    def is_prime(self, n):
        return 2 <= n <= self.capacity and int(self.spf[n]) == n

    @cached_property
    def primes(self):
        """All primes up to capacity, ascending (int64)."""
        idx = np.arange(self.capacity + 1, dtype=np.int64)
        return idx[2:][self.spf[2:] == idx[2:]]

    def nth_primes(self, k):
        """The first ``k`` primes."""
        if k > len(self.primes):
            raise OutOfRangeError(f"table holds only {len(self.primes)} primes, {k} requested")
        return self.primes[:k]


def _sieve_segment(spf, lo, hi, base):
    seg = spf[lo:hi]
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        view = seg[start - lo :: p]
        view[view == 0] = p


def build_factor_table(capacity, *, segment_size=SEGMENT_SIZE, threads=1,
                       memory_budget=DEFAULT_MEMORY_BUDGET):
    """Smallest-prime-factor table over ``[0, capacity]``.

    Built segment by segment from the base primes up to ``sqrt(capacity)``;
    entries left untouched by every base prime are primes and point at
    themselves. Entries 0 and 1 are 0.
    """
    if capacity < 2:
        raise InvalidArgumentError(f"capacity must be >= 2, got {capacity}")
    dtype = np.int32 if capacity < 2**31 - 1 else np.int64
    need = (capacity + 1) * np.dtype(dtype).itemsize
    if need > memory_budget:
        raise ResourceLimitError(
            f"capacity {capacity} needs {need} bytes, budget is {memory_budget}")

    spf = np.zeros(capacity + 1, dtype=dtype)
    root = math.isqrt(capacity)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if small[p]:
            small[p * p :: p] = False
    base = np.flatnonzero(small)

    bounds = [(lo, min(lo + segment_size, capacity + 1))
              for lo in range(0, capacity + 1, segment_size)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(lambda b: _sieve_segment(spf, b[0], b[1], base), bounds))
    else:
        for lo, hi in bounds:
            _sieve_segment(spf, lo, hi, base)

    idx = np.arange(capacity + 1, dtype=dtype)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf[:2] = 0
    spf.flags.writeable = False
    return FactorTable(capacity, spf)


def factorize(n, t):
    """``[(p, e), ...]`` with strictly increasing primes; ``[]`` for ``n == 1``."""
    t.check(n)
    out = []
    while n > 1:
        p = int(t.spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def valuation(n, p, t):
    t.check(n)
    prime = t.is_prime(p) if p <= t.capacity else all(p % d for d in range(2, math.isqrt(p) + 1))
    if p < 2 or not prime:
        raise InvalidArgumentError(f"{p} is not prime")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def squarefree_part(n, t):
    """Product of the primes dividing ``n`` to an odd power."""
    m = 1
    for p, e in factorize(n, t):
        if e & 1:
            m *= p
    return m


def _check_range(lo, hi, t):
    if lo < 1 or hi < lo:
        raise OutOfRangeError(f"bad range [{lo}, {hi}]")
    t.check(hi, "hi")


def primes_in(lo, hi, t):
    _check_range(lo, hi, t)
    ps = t.primes
    return ps[np.searchsorted(ps, lo, "left"):np.searchsorted(ps, hi, "right")].tolist()


def prime_reciprocal_sum(lo, hi, t):
    """Sum of ``1/p`` over primes in the half-open range ``(lo, hi]``."""
    _check_range(lo, hi, t)
    ps = t.primes
    sel = ps[np.searchsorted(ps, lo, "right"):np.searchsorted(ps, hi, "right")]
    return math.fsum((1.0 / sel).tolist())


def mertens_product(y, t):
    """``prod_{p < y} (1 - 1/p)``."""
    if y < 2:
        raise OutOfRangeError(f"y={y} must be >= 2")
    t.check(y, "y")
    ps = t.primes[: np.searchsorted(t.primes, y, "left")]
    return math.exp(math.fsum(np.log1p(-1.0 / ps).tolist()))


def prime_mask(primes, capacity):
    """Boolean indicator over ``[0, capacity]`` of the given primes."""
    mask = np.zeros(capacity + 1, dtype=bool)
    primes = np.asarray(primes, dtype=np.int64)
    mask[primes[primes <= capacity]] = True
    return mask


@dataclass
class FactorStats:
    """Per-element facts gathered in one pass over the factorizations of ``n``.

    ``q_odd`` is the product of primes in Q dividing ``n`` to an odd power.
    """

    n: np.ndarray
    sfp: np.ndarray
    q_odd: np.ndarray
    squarefree: np.ndarray
    all_in_q: np.ndarray
    omega: np.ndarray


def factor_stats(n, t, q_mask):
    """Vectorized factorization pass over an int array ``n`` (all >= 1)."""
    n = np.asarray(n, dtype=np.int64)
    if n.size and int(n.max()) > t.capacity:
        raise OutOfRangeError(f"n={int(n.max())} exceeds table capacity {t.capacity}")
    rem = n.copy()
    sfp = np.ones_like(n)
    q_odd = np.ones_like(n)
    last = np.zeros_like(n)
    squarefree = np.ones(n.shape, dtype=bool)
    all_in_q = np.ones(n.shape, dtype=bool)
    omega = np.zeros(n.shape, dtype=np.int64)

    idx = np.flatnonzero(rem > 1)
    while idx.size:
        r = rem[idx]
        p = t.spf[r].astype(np.int64)
        rem[idx] = r // p
        repeat = last[idx] == p
        squarefree[idx[repeat]] = False
        omega[idx[~repeat]] += 1
        last[idx] = p
        # primes arrive in nondecreasing order, so p | s iff p has odd count so far
        s = sfp[idx]
        hit = s % p == 0
        sfp[idx] = np.where(hit, s // p, s * p)
        inq = q_mask[p]
        all_in_q[idx[~inq]] = False
        qi = idx[inq]
        if qi.size:
            qs = q_odd[qi]
            pq = p[inq]
            q_odd[qi] = np.where(qs % pq == 0, qs // pq, qs * pq)
        idx = idx[rem[idx] > 1]
    return FactorStats(n, sfp, q_odd, squarefree, all_in_q, omega)

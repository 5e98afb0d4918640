"""Prime tables built by a segmented numpy sieve.

The table keeps the first N primes (as uint32) together with prefix sums of
their reciprocals.  Prefix sums are accumulated blockwise: every block of
``_BLOCK`` reciprocals is summed with ``math.fsum`` and the block totals are
accumulated exactly as rationals, so the only floating error inside a prefix
is the naive cumsum within one block.  That gives the a-priori bound

    |prefix[i] - sum_{j<=i} 1/p_j| <= (_BLOCK + 4) * 2**-53 * prefix[i]

which :meth:`PrimeTable.recip_sum_bounds` widens into a certified interval.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

import numpy as np

_BLOCK = 1024
_UNIT = 2.0**-53
_SEGMENT = 1 << 22

# enough for the first 3e7 primes (p_{3e7} ~ 5.7e8)
MAX_PRIMES = 30_000_000


class SieveBudgetError(MemoryError):
    """Requested more primes than the configured sieve budget allows."""


def iter_prime_segments(limit: int):
    """Yield increasing uint32 arrays that together hold every prime <= limit."""
    if limit < 2:
        return
    root = math.isqrt(limit)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if small[p]:
            small[p * p :: p] = False
    base = np.nonzero(small)[0]
    yield base.astype(np.uint32)
    lo = root + 1
    while lo <= limit:
        hi = min(lo + _SEGMENT, limit + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            seg[start - lo :: p] = False
        yield (np.nonzero(seg)[0] + lo).astype(np.uint32)
        lo = hi


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit, via a segmented sieve of Eratosthenes."""
    chunks = list(iter_prime_segments(limit))
    if not chunks:
        return np.zeros(0, dtype=np.uint32)
    return np.concatenate(chunks)


def _upper_bound_nth_prime(n: int) -> int:
    # Rosser's bound p_n < n(log n + log log n) for n >= 6
    if n < 6:
        return 15
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 10


def prefix_error(s):
    """A-priori bound on the float error of a stored reciprocal prefix ``s``.

    Works elementwise on arrays.  Two extra units cover one subtraction of
    prefixes by the caller.
    """
    return (_BLOCK + 6) * _UNIT * s + 1e-300


def _blockwise_prefix(recips: np.ndarray) -> np.ndarray:
    n = len(recips)
    out = np.empty(n, dtype=np.float64)
    carry = Fraction(0)
    for start in range(0, n, _BLOCK):
        block = recips[start : start + _BLOCK]
        local = np.cumsum(block)
        offset = float(carry)
        out[start : start + len(block)] = offset + local
        carry += Fraction(math.fsum(block))
    return out


class PrimeTable:
    """The first ``count`` primes with reciprocal prefix sums.

    Extension is guarded by a lock; reading an already-built range is safe
    from any thread.
    """

    def __init__(self, count: int = 0, max_primes: int = MAX_PRIMES):
        self.max_primes = max_primes
        self._lock = threading.Lock()
        self.primes = np.zeros(0, dtype=np.uint32)
        self._prefix = np.zeros(0, dtype=np.float64)
        if count:
            self.ensure(count)

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def limit(self) -> int:
        return int(self.primes[-1]) if len(self.primes) else 1

    def ensure(self, count: int) -> None:
        if count <= len(self.primes):
            return
        if count > self.max_primes:
            raise SieveBudgetError(f"{count} primes requested, budget is {self.max_primes}")
        with self._lock:
            if count <= len(self.primes):
                return
            target = max(count, 2 * len(self.primes), 1000)
            target = min(target, self.max_primes)
            primes = primes_up_to(_upper_bound_nth_prime(target))[:target]
            recips = 1.0 / primes.astype(np.float64)
            prefix = _blockwise_prefix(recips)
            self.primes, self._prefix = primes, prefix

    def nth(self, i: int) -> int:
        """The i-th prime, 1-based."""
        if i < 1:
            raise ValueError("prime index starts at 1")
        self.ensure(i)
        return int(self.primes[i - 1])

    def recip_prefix(self, count: int) -> np.ndarray:
        """Float prefix sums; element i is sum_{j<=i+1} 1/p_j (not certified)."""
        self.ensure(count)
        return self._prefix[:count]

    def recip_prefix_with_zero(self, count: int) -> np.ndarray:
        """Array S with S[i] = float prefix over the first i primes, i = 0..count."""
        self.ensure(count)
        return np.concatenate([[0.0], self._prefix[:count]])

    def recip_sum_bounds(self, t: int) -> tuple[float, float]:
        """Certified [lo, hi] around sum_{i<=t} 1/p_i."""
        if t < 0:
            raise ValueError("t must be non-negative")
        if t == 0:
            return 0.0, 0.0
        self.ensure(t)
        s = float(self._prefix[t - 1])
        err = prefix_error(s)
        return math.nextafter(s - err, -math.inf), math.nextafter(s + err, math.inf)


_default: PrimeTable | None = None
_default_lock = threading.Lock()


def default_table() -> PrimeTable:
    global _default
    with _default_lock:
        if _default is None:
            _default = PrimeTable()
        return _default


def nth_prime(i: int, table: PrimeTable | None = None) -> int:
    return (table if table is not None else default_table()).nth(i)


def prime_recip_sum(t: int, table: PrimeTable | None = None) -> tuple[float, float]:
    """Certified interval around the sum of the reciprocals of the first t primes."""
    return (table if table is not None else default_table()).recip_sum_bounds(t)


def prime_pi(x: int) -> int:
    """Exact prime-counting function by streaming the sieve."""
    return sum(len(seg) for seg in iter_prime_segments(int(x)))


def prime_recip_sum_upto(x: int) -> float:
    """sum_{p<=x} 1/p to within ~1e-15 relative, streaming (no table kept)."""
    return math.fsum(math.fsum(1.0 / seg.astype(np.float64)) for seg in iter_prime_segments(int(x)))


def log_primorial(n: int, table: PrimeTable | None = None) -> float:
    """sum_{i<=n} log p_i, compensated."""
    if n == 0:
        return 0.0
    tab = table if table is not None else default_table()
    tab.ensure(n)
    return math.fsum(np.log(tab.primes[:n].astype(np.float64)))

"""Strong-pseudoprime testing.

Below 3.3e24 the first twelve prime bases are a proof of primality (this
covers every 64-bit integer).  Above that we run the same twelve bases plus
``rounds`` further bases drawn from a generator seeded by ``n`` itself, so the
verdict for a given integer never changes between runs.
"""

from __future__ import annotations

import random

_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_DETERMINISTIC_LIMIT = 3317044064679887385961981

DEFAULT_ROUNDS = 40

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


def _is_strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int, rounds: int = DEFAULT_ROUNDS) -> bool:
    """Return True if ``n`` is prime (proven below 2**64, 40+ MR rounds above)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _DETERMINISTIC_BASES:
        if not _is_strong_probable_prime(n, a, d, s):
            return False
    if n < _DETERMINISTIC_LIMIT:
        return True
    rng = random.Random(n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        if not _is_strong_probable_prime(n, a, d, s):
            return False
    return True

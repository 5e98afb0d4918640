"""Integer factorization with an explicit effort budget.

Trial division by the primes below ``trial_limit`` comes first, then Brent's
variant of Pollard rho on whatever composite cofactor is left.  Every cofactor
reported as prime has passed :func:`is_prime`.  When the rho loop exhausts its
iteration budget we raise :class:`FactorizationIncomplete` instead of guessing.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

from .primality import is_prime

TRIAL_LIMIT = 10**6
RHO_ITERATIONS = 2 * 10**6


class FactorizationIncomplete(ArithmeticError):
    """Raised when the effort budget runs out with a composite cofactor left."""

    def __init__(self, n: int, cofactor: int, found: dict[int, int]):
        self.n = n
        self.cofactor = cofactor
        self.found = dict(found)
        super().__init__(f"factorization of {n} incomplete: composite cofactor {cofactor} ({len(str(cofactor))} digits)")


@dataclass(frozen=True)
class Factorization:
    """A positive integer with its prime factorization, primes increasing."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"factors must be strictly increasing with positive exponents: {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    @classmethod
    def from_dict(cls, counts: dict[int, int]) -> Factorization:
        items = tuple(sorted((p, e) for p, e in counts.items() if e))
        return cls(math.prod(p**e for p, e in items), items)

    @classmethod
    def from_primes(cls, primes: Iterable[int]) -> Factorization:
        """Squarefree number with the given distinct primes."""
        return cls.from_dict({p: 1 for p in primes})

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def omega(self) -> int:
        return len(self.factors)

    def rad(self) -> int:
        return math.prod(self.primes)

    def W(self) -> int:
        return 2 ** len(self.factors)

    def phi(self) -> int:
        out = self.n
        for p, _ in self.factors:
            out = out // p * (p - 1)
        return out

    def rho(self) -> Fraction:
        return Fraction(self.phi(), self.n)

    def radical(self) -> Factorization:
        return Factorization.from_primes(self.primes)

    def squarefree_divisors(self) -> Iterator[tuple[int, int]]:
        """Yield ``(d, mu(d))`` for every squarefree divisor ``d``."""
        ps = self.primes
        for k in range(len(ps) + 1):
            sign = -1 if k % 2 else 1
            for combo in combinations(ps, k):
                yield math.prod(combo), sign

    def is_prime_certified(self) -> bool:
        return all(is_prime(p) for p in self.primes)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if f.omega() % 2 else 1


@lru_cache(maxsize=4)
def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def effort_scale() -> float:
    raw = os.environ.get("PRIMSIEVE_EFFORT")
    if not raw:
        return 1.0
    try:
        value = float(int(raw))
    except ValueError:
        raise ValueError(f"PRIMSIEVE_EFFORT must be an integer, got {raw!r}") from None
    return max(value, 0.0)


def _brent(n: int, c: int, budget: int) -> tuple[int | None, int]:
    """One Brent-rho run with constant ``c``. Returns (factor or None, iterations used)."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = y
    used = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(128, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += 128
        used += 2 * r
        r *= 2
        if g == 1 and used > budget:
            return None, used
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return (g if g != n else None), used


def _split(n: int, budget: int) -> tuple[int | None, int]:
    if math.isqrt(n) ** 2 == n:
        return math.isqrt(n), 0
    spent = 0
    for c in range(1, 64):
        d, used = _brent(n, c, budget - spent)
        spent += used
        if d:
            return d, spent
        if spent >= budget:
            break
    return None, spent


def factorize(
    n: int,
    hints: Iterable[int] | None = None,
    *,
    trial_limit: int = TRIAL_LIMIT,
    rho_iterations: int | None = None,
) -> Factorization:
    """Completely factor ``n``.

    ``hints`` are candidate primes divided out first; non-divisors and
    non-primes among them are ignored.  ``rho_iterations`` caps the total work
    of the rho stage (default scaled by ``PRIMSIEVE_EFFORT``).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if rho_iterations is None:
        rho_iterations = int(RHO_ITERATIONS * effort_scale())
    counts: dict[int, int] = {}
    rest = n

    def take(p: int) -> None:
        nonlocal rest
        while rest % p == 0:
            rest //= p
            counts[p] = counts.get(p, 0) + 1

    for h in hints or ():
        if h > 1 and rest % h == 0 and is_prime(h):
            take(h)
    for p in _small_primes(trial_limit):
        if p * p > rest:
            break
        if rest % p == 0:
            take(p)
    if rest == 1:
        return Factorization.from_dict(counts)
    if rest < trial_limit * trial_limit or is_prime(rest):
        counts[rest] = counts.get(rest, 0) + 1
        return Factorization.from_dict(counts)

    stack = [rest]
    budget = rho_iterations
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d, used = _split(m, budget)
        budget -= used
        if d is None:
            leftover = m * math.prod(stack)
            raise FactorizationIncomplete(n, leftover, counts)
        stack.extend([d, m // d])
    return Factorization.from_dict(counts)


def cyclotomic_value(d: int, x: int) -> int:
    """Phi_d(x) as an exact integer, from the Mobius product over divisors of d."""
    num, den = 1, 1
    for e in range(1, d + 1):
        if d % e:
            continue
        mu = _mobius_small(d // e)
        if mu == 1:
            num *= x**e - 1
        elif mu == -1:
            den *= x**e - 1
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def _mobius_small(n: int) -> int:
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def prime_power_base(q: int) -> tuple[int, int]:
    """(b, k) with q = b**k and b prime."""
    if q < 2:
        raise ValueError("q must be at least 2")
    for b in _small_primes(10**6):
        if q % b == 0:
            k = 0
            while q % b == 0:
                q //= b
                k += 1
            if q != 1:
                raise ValueError("q is not a prime power")
            return b, k
    if is_prime(q):
        return q, 1
    raise ValueError("q is not a prime power (or its base exceeds the trial bound)")


def aurifeuillean_split(b: int, d: int, value: int) -> list[int]:
    """Split Phi_d(b) along the algebraic factors of b^n + 1 for b in {2, 3}.

    4x^4 + 1 and 27x^6 + 1 factor as polynomials, so Phi_d(2) with
    d = 4 mod 8 and Phi_d(3) with d = 6 mod 12 fall into two halves found by gcd.
    """
    if b == 2 and d % 8 == 4:
        m = d // 4
    elif b == 3 and d % 12 == 6:
        m = d // 6
    else:
        return [value]
    half = b**m - b ** ((m + 1) // 2) + 1
    g = math.gcd(value, half)
    if 1 < g < value:
        return [g, value // g]
    return [value]


def power_minus_one_pieces(q: int, r: int) -> list[int]:
    """Coprime-ish pieces multiplying to q**r - 1: Phi_d(b), d | kr, with algebraic splits."""
    b, k = prime_power_base(q)
    n = k * r
    pieces = []
    for d in range(1, n + 1):
        if n % d == 0:
            pieces.extend(aurifeuillean_split(b, d, cyclotomic_value(d, b)))
    return pieces


def factor_power_minus_one(q: int, r: int, **kwargs) -> Factorization:
    """Factor q**r - 1 piecewise through cyclotomic values of the prime base."""
    counts: dict[int, int] = {}
    for piece in power_minus_one_pieces(q, r):
        try:
            f = factorize(piece, **kwargs)
        except FactorizationIncomplete as exc:
            merged = dict(counts)
            for p, e in exc.found.items():
                merged[p] = merged.get(p, 0) + e
            raise FactorizationIncomplete(q**r - 1, exc.cofactor, merged) from None
        for p, e in f.factors:
            counts[p] = counts.get(p, 0) + e
    return Factorization.from_dict(counts)

"""Sieve criteria for primitive elements and their hyperplane specialisations.

Every verdict here is decided in exact arithmetic.  Character-sum bounds whose
square carries a half-integral power of q are kept in the form ``a + b*sqrt(q)``
with rational ``a, b``; comparisons against such values square once more to
clear the root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .numtheory import Factorization, PrimeTable, default_table

ELIMINATED = "eliminated"
POSSIBLE_EXCEPTION = "possible_exception"
GENUINE_EXCEPTION = "genuine_exception"
INCONCLUSIVE = "inconclusive"

KATZ_CEILING = "katz_ceiling"
KATZ_OPTIMAL_K = "katz_optimal_k"
EVEN_R = "even_r"


class InvalidConfig(ValueError):
    """delta * rho(k) <= epsilon, so the sieve gives no information."""


def surd_sign(x, y, q: int) -> int:
    """Sign of x + y*sqrt(q) for rationals x, y and a positive integer q."""
    if x >= 0 and y >= 0:
        return 0 if (x == 0 and y == 0) else 1
    if x <= 0 and y <= 0:
        return -1
    d = x * x - y * y * q
    if x > 0:
        return (d > 0) - (d < 0)
    return (d < 0) - (d > 0)


@dataclass(frozen=True)
class CharBound:
    """A bound K(q, r) on nontrivial character sums over G_A, stored squared.

    ``value_sq == a + b*sqrt(q)``; ``b`` is zero whenever the square is an
    integer.
    """

    kind: str
    q: int
    r: int
    a: int
    b: int = 0
    k_used: int | None = None

    @property
    def value_sq(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.q)

    @property
    def value(self) -> float:
        return math.sqrt(self.value_sq)

    def exact_sq(self) -> tuple[int, int]:
        return self.a, self.b

    def compare_sq(self, x) -> int:
        """Sign of x - value_sq, exactly."""
        return surd_sign(x - self.a, -self.b, self.q)

    def below(self, lhs_sq, multiplier_sq=1) -> bool:
        """True iff lhs_sq > multiplier_sq * value_sq."""
        return surd_sign(lhs_sq - multiplier_sq * self.a, -multiplier_sq * self.b, self.q) > 0


def _half_power(q: int, twice_exp: int) -> tuple[int, int]:
    """q**(twice_exp/2) as (integer part, coefficient of sqrt(q))."""
    if twice_exp % 2 == 0:
        return q ** (twice_exp // 2), 0
    return 0, q ** (twice_exp // 2)


def _katz_inner(q: int, r: int, k: int) -> tuple[int, int]:
    # 2 q^{3r/2 - k} + q^k
    a, b = _half_power(q, 3 * r - 2 * k)
    return 2 * a + q**k, 2 * b


def optimal_katz_k(q: int, r: int) -> int:
    """The k in 1..r minimising 2q^{3r/2-k} + q^k.

    Calculus puts the real minimiser at 3r/4 + log 2/(2 log q); the integer
    optimum is its floor or ceiling, compared exactly.
    """
    centre = 3 * r / 4 + math.log(2) / (2 * math.log(q))
    candidates = sorted({min(max(k, 1), r) for k in (math.floor(centre), math.ceil(centre))})
    best = candidates[0]
    for k in candidates[1:]:
        a1, b1 = _katz_inner(q, r, k)
        a0, b0 = _katz_inner(q, r, best)
        if surd_sign(a1 - a0, b1 - b0, q) < 0:
            best = k
    return best


def char_bound(kind: str, q: int, r: int) -> CharBound:
    if r < 2:
        raise ValueError("character-sum bounds need r >= 2")
    if kind == KATZ_CEILING:
        k = -(-3 * r // 4)
        return CharBound(kind, q, r, 3 * (q - 1) ** r * q**k, 0, k)
    if kind == KATZ_OPTIMAL_K:
        k = optimal_katz_k(q, r)
        a, b = _katz_inner(q, r, k)
        c = (q - 1) ** r
        return CharBound(kind, q, r, c * a, c * b, k)
    if kind == EVEN_R:
        if r % 2:
            raise ValueError(f"even-r bound needs even r, got r={r}")
        a, b = _half_power(q, r // 2)
        c = 4 * (q - 1) ** (3 * r // 2)
        return CharBound(kind, q, r, c * a, c * b)
    raise ValueError(f"unknown bound kind {kind!r}")


@dataclass(frozen=True)
class SieveConfig:
    """A split rad(q^r - 1) = k * prod(sieved) * prod(modified)."""

    base: Factorization
    k: int
    sieved: tuple[int, ...] = ()
    modified: tuple[int, ...] = ()

    def __post_init__(self):
        parts = set(self.sieved) | set(self.modified)
        if len(parts) != len(self.sieved) + len(self.modified):
            raise ValueError("sieved and modified primes must be distinct")
        rad = self.base.rad()
        if self.k * math.prod(self.sieved) * math.prod(self.modified) != rad:
            raise ValueError("k * prod(sieved) * prod(modified) must equal rad")
        if not parts <= set(self.base.primes):
            raise ValueError("sieved/modified entries must be prime factors of the base")

    @classmethod
    def build(cls, base: Factorization, sieved: Iterable[int] = (), modified: Iterable[int] = ()) -> SieveConfig:
        sieved = tuple(sorted(sieved))
        modified = tuple(sorted(modified))
        k = base.rad() // (math.prod(sieved) * math.prod(modified))
        return cls(base, k, sieved, modified)

    @property
    def core(self) -> Factorization:
        used = set(self.sieved) | set(self.modified)
        return Factorization.from_primes(p for p in self.base.primes if p not in used)

    @property
    def delta(self) -> Fraction:
        return 1 - sum((Fraction(1, p) for p in self.sieved), Fraction(0))

    @property
    def epsilon(self) -> Fraction:
        return sum((Fraction(1, p) for p in self.modified), Fraction(0))

    @property
    def is_valid(self) -> bool:
        return self.delta * self.core.rho() > self.epsilon

    def describe(self) -> dict:
        return {
            "k": self.k,
            "sieved": list(self.sieved),
            "modified": list(self.modified),
            "delta": str(self.delta),
            "epsilon": str(self.epsilon),
        }


def threshold_from_parts(rho_k: Fraction, W_k: int, s1: int, s2: int, delta: Fraction, epsilon: Fraction) -> Fraction:
    denom = delta * rho_k - epsilon
    if denom <= 0:
        raise InvalidConfig(f"delta*rho(k) = {delta * rho_k} does not exceed epsilon = {epsilon}")
    return (rho_k * W_k * (s1 + 2 * delta - 1) + s2 - delta * rho_k - epsilon) / denom


def sieve_threshold(config: SieveConfig) -> Fraction:
    """Multiplier T with |A| > T*K(q,r) forcing a primitive element into A."""
    core = config.core
    return threshold_from_parts(
        core.rho(), core.W(), len(config.sieved), len(config.modified), config.delta, config.epsilon
    )


def _largest_split(primes: Sequence[int], s1: int, s2: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    ordered = sorted(primes, reverse=True)
    modified = tuple(ordered[:s2])
    sieved = tuple(ordered[s2 : s2 + s1])
    return sieved, modified


def choose_config(base: Factorization, *, exhaustive: bool = False) -> SieveConfig:
    """Pick the valid split minimising the threshold.

    By default the modified primes are the s2 largest and the sieved primes the
    next s1 largest, for every (s1, s2).  ``exhaustive`` searches every
    assignment of primes to the three roles (only for omega <= 8).  Ties go to
    the smaller s1 + s2, then the smaller s2.
    """
    base = base.radical()
    primes = base.primes
    w = len(primes)
    candidates: list[SieveConfig] = []
    if exhaustive:
        if w > 8:
            raise ValueError("exhaustive config search is limited to omega <= 8")
        from itertools import product

        for roles in product((0, 1, 2), repeat=w):
            sieved = [p for p, role in zip(primes, roles) if role == 1]
            modified = [p for p, role in zip(primes, roles) if role == 2]
            candidates.append(SieveConfig.build(base, sieved, modified))
    else:
        for s2 in range(w + 1):
            for s1 in range(w - s2 + 1):
                sieved, modified = _largest_split(primes, s1, s2)
                candidates.append(SieveConfig.build(base, sieved, modified))
    best = SieveConfig.build(base)
    best_key = (sieve_threshold(best), 0, 0)
    for cfg in candidates:
        if not cfg.is_valid:
            continue
        s1, s2 = len(cfg.sieved), len(cfg.modified)
        key = (sieve_threshold(cfg), s1 + s2, s2)
        if key < best_key:
            best, best_key = cfg, key
    return best


@dataclass(frozen=True)
class GenericThreshold:
    omega_r: int
    sieved: tuple[int, ...]
    modified: tuple[int, ...]
    delta: Fraction
    epsilon: Fraction
    rho_lower: Fraction
    threshold: Fraction


def generic_prime_config(omega_r: int, s1: int, s2: int, table: PrimeTable | None = None) -> GenericThreshold:
    """Threshold for an unknown factorization with omega_r distinct primes.

    The j-th largest modified prime is taken as the (omega_r - j)-th prime and
    the sieved primes continue downward from there.  The core's rho is replaced
    by the product of (1 - 1/p) over the first omega_r - s1 - s2 primes, a lower
    bound for any integer with that many prime factors.  Since the threshold
    decreases in rho, the result is an upper bound for the true threshold.
    """
    if s1 < 0 or s2 < 0 or s1 + s2 > omega_r:
        raise ValueError("need 0 <= s1, s2 and s1 + s2 <= omega_r")
    tab = table if table is not None else default_table()
    if omega_r:
        tab.ensure(omega_r)
    nth = lambda i: int(tab.primes[i - 1])  # noqa: E731
    modified = tuple(nth(omega_r - j) for j in range(s2))
    sieved = tuple(nth(omega_r - s2 - i) for i in range(s1))
    core_count = omega_r - s1 - s2
    rho_lower = Fraction(1)
    for i in range(1, core_count + 1):
        rho_lower *= Fraction(nth(i) - 1, nth(i))
    delta = 1 - sum((Fraction(1, p) for p in sieved), Fraction(0))
    epsilon = sum((Fraction(1, p) for p in modified), Fraction(0))
    T = threshold_from_parts(rho_lower, 2**core_count, s1, s2, delta, epsilon)
    return GenericThreshold(omega_r, tuple(sorted(sieved)), tuple(sorted(modified)), delta, epsilon, rho_lower, T)


@dataclass
class ClassificationRecord:
    q: int
    r: int
    verdict: str
    criterion: str | None = None
    config: SieveConfig | None = None
    bound: CharBound | None = None
    params: dict = field(default_factory=dict)
    notes: str = ""

    def to_dict(self) -> dict:
        out = {
            "q": self.q,
            "r": self.r,
            "verdict": self.verdict,
            "criterion": self.criterion,
            "params": self.params,
            "notes": self.notes,
        }
        out["config"] = self.config.describe() if self.config else None
        out["bound"] = (
            {"kind": self.bound.kind, "k_used": self.bound.k_used, "value_sq_approx": self.bound.value_sq}
            if self.bound
            else None
        )
        return out


def prime_sieve_multiplier(primes: Sequence[int], s: int) -> Fraction | None:
    """2^{omega-s}((s-1)/delta + 2) - 1 with the s largest primes sieved; None if delta <= 0."""
    ordered = sorted(primes, reverse=True)
    delta = 1 - sum((Fraction(1, p) for p in ordered[:s]), Fraction(0))
    if delta <= 0:
        return None
    return 2 ** (len(ordered) - s) * (Fraction(s - 1) / delta + 2) - 1


def hypersieve_witness(
    q: int, r: int, base: Factorization, bound: CharBound, *, drop_zero: bool = False
) -> int | None:
    """Smallest s (largest-s-primes rule) for which |G_A| > T*K holds, else None.

    With chi(0) = 0 the sieve only counts nonzero elements; ``drop_zero`` uses
    (q-1)^r - 1 for |G_A|, which covers the case 0 in G_A.
    """
    primes = base.primes
    lhs = ((q - 1) ** r - int(drop_zero)) ** 2
    for s in range(1, len(primes) + 1):
        T = prime_sieve_multiplier(primes, s)
        if T is None:
            continue
        if bound.below(lhs, T * T):
            return s
    return None


def hypersieve_check(q: int, r: int, base: Factorization) -> ClassificationRecord:
    """Apply the hyperplane sieve with the optimal-k bound, then the even-r bound."""
    kinds = [KATZ_OPTIMAL_K] + ([EVEN_R] if r % 2 == 0 else [])
    for kind in kinds:
        bound = char_bound(kind, q, r)
        s = hypersieve_witness(q, r, base, bound)
        if s is not None:
            sieved, _ = _largest_split(base.primes, s, 0)
            config = SieveConfig.build(base.radical(), sieved)
            return ClassificationRecord(
                q, r, ELIMINATED, "hypersieve", config, bound, {"s": s, "bound_kind": kind}
            )
    return ClassificationRecord(q, r, POSSIBLE_EXCEPTION, None, notes="hyperplane sieve inconclusive")


def partial_hypersieve_witness(q: int, r: int, partial, bound: CharBound) -> int | None:
    """Core size c for which the sieve holds on a partial factorization, else None.

    The c smallest known primes form the core; every other prime, known or
    hidden in a cofactor, is sieved.  The hidden primes number at most m and
    each exceeds the trial bound B, so s <= s_known + m and
    delta >= 1 - sum(1/p) - m/B.  T grows with s and falls with delta, so this
    worst case bounds the true T from above.
    """
    known = sorted(partial.known.primes)
    m = partial.unknown_prime_bound()
    lhs = ((q - 1) ** r) ** 2
    for c in range(len(known) + 1):
        sieved = known[c:]
        s = len(sieved) + m
        delta = 1 - sum(Fraction(1, p) for p in sieved) - Fraction(m, partial.trial_bound)
        if s < 1 or delta <= 0:
            continue
        T = 2**c * (Fraction(s - 1) / delta + 2) - 1
        if bound.below(lhs, T * T):
            return c
    return None


def partial_hypersieve_check(q: int, r: int, partial) -> ClassificationRecord:
    kinds = [KATZ_OPTIMAL_K] + ([EVEN_R] if r % 2 == 0 else [])
    for kind in kinds:
        bound = char_bound(kind, q, r)
        c = partial_hypersieve_witness(q, r, partial, bound)
        if c is not None:
            params = {
                "core": sorted(partial.known.primes)[:c],
                "hidden_primes_at_most": partial.unknown_prime_bound(),
                "trial_bound": partial.trial_bound,
                "bound_kind": kind,
            }
            return ClassificationRecord(q, r, ELIMINATED, "hypersieve_partial", None, bound, params)
    return ClassificationRecord(q, r, INCONCLUSIVE, None, notes="partial factorization too coarse for the sieve")


def fr_criterion1(q: int, r: int, phi_of_order: int) -> bool:
    """(q-1)^r > q^r - phi(q^r - 1)."""
    return (q - 1) ** r > q**r - phi_of_order


def alpha_qr(q: int, r: int) -> tuple[int, int]:
    """sum_{i<r} C(r,i) q^{min(i, r/2)} as (integer part, sqrt(q) coefficient)."""
    a = b = 0
    for i in range(r):
        c = math.comb(r, i)
        if 2 * i <= r:
            a += c * q**i
        else:
            ia, ib = _half_power(q, r)
            a += c * ia
            b += c * ib
    return a, b


def fr_criterion2(q: int, r: int, omega_r: int) -> bool:
    """(q-1)^r > alpha(q,r) * 2^omega_r."""
    a, b = alpha_qr(q, r)
    w = 2**omega_r
    return surd_sign((q - 1) ** r - a * w, -b * w, q) > 0


def prior_work_verdict(q: int, r: int) -> ClassificationRecord | None:
    """Known results for q >= 11, consumed as constants."""
    if q >= 16 or (q == 13 and r != 4) or (q == 11 and r not in (4, 6, 12)):
        return ClassificationRecord(q, r, ELIMINATED, "prior_work", notes="earlier result for q >= 11")
    if q in (11, 13):
        return ClassificationRecord(q, r, POSSIBLE_EXCEPTION, None, notes="open case from earlier work")
    return None


def criteria_can_apply(q: int, r: int) -> bool:
    """False when no criterion here can succeed for any factorization of q^r - 1.

    Uses the smallest possible multipliers: T >= 1 in the hyperplane sieves,
    phi(q^r - 1) <= (q^r - 1)/2 for odd q, and omega_r >= 1.
    """
    lhs = (q - 1) ** (2 * r)
    if char_bound(KATZ_OPTIMAL_K, q, r).below(lhs):
        return True
    if r % 2 == 0 and char_bound(EVEN_R, q, r).below(lhs):
        return True
    n = q**r - 1
    phi_max = n // 2 if q % 2 else n - 1
    if fr_criterion1(q, r, phi_max):
        return True
    return fr_criterion2(q, r, 1)


def classify(
    q: int,
    r: int,
    base: Factorization,
    phi: int,
    certificate=None,
) -> ClassificationRecord:
    """Run the hyperplane sieve, then both counting criteria, in that order.

    ``base`` may be the factorization of q^r - 1 or of its radical; only its
    primes are used.  ``certificate`` is an exception certificate from the
    hyperplane lab and upgrades a possible exception to a genuine one.
    """
    record = hypersieve_check(q, r, base)
    if record.verdict == ELIMINATED:
        return record
    if fr_criterion1(q, r, phi):
        return ClassificationRecord(q, r, ELIMINATED, "fr_criterion1", params={"phi": phi})
    omega_r = base.omega()
    if fr_criterion2(q, r, omega_r):
        return ClassificationRecord(q, r, ELIMINATED, "fr_criterion2", params={"omega_r": omega_r})
    if certificate is not None:
        return ClassificationRecord(
            q, r, GENUINE_EXCEPTION, None, params={"certificate": str(certificate)}, notes="hyperplanes found"
        )
    return ClassificationRecord(q, r, POSSIBLE_EXCEPTION, None, params={"omega_r": omega_r})

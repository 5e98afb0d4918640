"""Bounds on omega(q^r - 1) beyond which G_A always holds a primitive element.

Pipeline per q:

* ``naive_prime_limit`` and ``crude_r_bound`` give a first, enormous ceiling;
* ``leap`` pushes an eliminated omega up to a huge omega_1 via Mertens and
  Rosser-Schoenfeld bounds, and ``omega_ceiling`` chains leaps until the crude
  ceiling is covered;
* ``check_omega`` / ``table2_sweep`` walk down from the ceiling one omega at a
  time and turn the first survivor into a bound on r.

Floating comparisons carry a relative guard band of ``GUARD``.  A comparison
that lands inside the band is reported as inconclusive and never eliminates.
Sums of prime reciprocals come with certified intervals from the prime table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numtheory import (
    PrimeTable,
    default_table,
    log_primorial,
    mertens_upper,
    pi_lower,
    prefix_error,
)

GUARD = 1e-9

GENERAL = "general"
EVEN_R = "even_r"

SUPPORTED_Q = (3, 4, 5, 7, 8, 9)

# t values tried by the sweep; t never exceeds omega
T_CANDIDATES = tuple(range(0, 61))


@dataclass(frozen=True)
class BoundProfile:
    q: int
    track: str
    c: float
    K_denominator: float
    K_numerator_shift: float
    R_constant: int

    def R(self, t, s, delta):
        """log(C [2^t((s-1)/delta + 2) - 1]^2), stable for huge t."""
        a = (s - 1) / delta + 2
        inner = t * math.log(2) + np.log(a) + np.log1p(-np.exp2(-np.asarray(t, dtype=float)) / a)
        return math.log(self.R_constant) + 2 * inner

    def r_dropped(self, t, s, m):
        """R with delta replaced by m and the -1 dropped."""
        return math.log(self.R_constant) + 2 * (t * math.log(2) + np.log((s - 1) / m + 2))

    def K(self, R):
        return (R + self.K_numerator_shift) / self.K_denominator

    def B(self, K):
        return 0.96 * K * math.log2(self.q) / (np.log(K) + math.log(math.log(self.q)))

    def B_prime(self, K):
        L = np.log(K) + math.log(math.log(self.q))
        return 0.96 * math.log2(self.q) / L * (1 - 1 / L)


def profile(q: int) -> BoundProfile:
    if q == 3:
        return BoundProfile(3, EVEN_R, math.log(2, 3) - 0.75, 0.5 * math.log(2) - 0.25 * math.log(3), 0.0, 4)
    if q >= 4:
        den = math.log(q - 1) - 0.75 * math.log(q)
        return BoundProfile(q, GENERAL, math.log(q - 1, q) - 0.75, den, math.log(q), 3)
    raise ValueError(f"no bound profile for q={q}")


def _require_supported(q: int) -> None:
    if q not in SUPPORTED_Q:
        raise ValueError(f"q must be one of {SUPPORTED_Q}, got {q}")


def naive_prime_limit(q: int, table: PrimeTable | None = None) -> int:
    """Smallest N with (p_1...p_N)^c / q > 3*4^N and p_N^c > 4."""
    if q not in (5, 7, 8, 9):
        raise ValueError("the primorial limit needs c > 0 and q >= 5 in this pipeline")
    tab = table if table is not None else default_table()
    c = profile(q).c
    count = 1000
    while True:
        tab.ensure(count)
        logs = np.log(tab.primes[:count].astype(np.float64))
        prim = np.cumsum(logs)
        n = np.arange(1, count + 1)
        ok = (c * prim - math.log(q) > math.log(3) + n * math.log(4)) & (c * logs > math.log(4))
        hits = np.nonzero(ok)[0]
        if len(hits):
            N = int(hits[0]) + 1
            break
        count *= 2
    # re-decide the neighbourhood with compensated sums
    def holds(N: int) -> bool:
        lhs = c * log_primorial(N, tab) - math.log(q)
        rhs = math.log(3) + N * math.log(4)
        return lhs > rhs * (1 + GUARD) and c * math.log(tab.nth(N)) > math.log(4) * (1 + GUARD)

    while N > 1 and holds(N - 1):
        N -= 1
    while not holds(N):
        N += 1
    return N


@dataclass(frozen=True)
class CrudeBound:
    q: int
    r_limit: float
    omega_limit: float
    r_exact: float
    omega_exact: float
    digits: int


def _robin_omega(q: int, r: float) -> float:
    return 0.96 * r * math.log2(q) / (math.log(r) + math.log(math.log(q)))


def crude_inequality(q: int, r: float) -> float:
    """Margin of the defining inequality at r; positive means it holds."""
    lq, llq = math.log(q), math.log(math.log(q))
    if q == 4:
        return -math.log(3 * q) / r + math.log((q - 1) / q**0.75) - 1.92 * lq / (math.log(r) + llq)
    if q == 3:
        return -math.log(2) / r + 0.25 * math.log(q - 1) - 0.125 * lq - 0.96 * lq / (math.log(r) + llq)
    raise ValueError("crude bounds exist for q = 3 (even r) and q = 4 only")


def _round_up(x: float, digits: int) -> float:
    exp = math.floor(math.log10(x)) - digits + 1
    scaled = x / 10.0**exp
    up = math.ceil(scaled - 1e-9)
    return up * 10.0**exp


def crude_r_bound(q: int, digits: int | None = None) -> CrudeBound:
    """Threshold on r from the unsieved bound plus the Robin-type omega bound.

    The exact crossing is found by bisection in log r, then rounded up to
    ``digits`` significant figures (3 for q = 4, 4 for q = 3 by default).
    """
    if q not in (3, 4):
        raise ValueError("crude bounds exist for q = 3 (even r) and q = 4 only")
    if digits is None:
        digits = 3 if q == 4 else 4
    lo, hi = math.log(10.0), math.log(1e40)
    if crude_inequality(q, math.exp(hi)) <= 0:
        raise ArithmeticError("crude inequality never holds below 1e40")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if crude_inequality(q, math.exp(mid)) > 0:
            hi = mid
        else:
            lo = mid
    r_exact = math.exp(hi)
    r_limit = _round_up(r_exact, digits)
    if crude_inequality(q, r_limit) <= 0:
        raise ArithmeticError("rounded threshold fails the defining inequality")
    omega_exact = _robin_omega(q, r_limit)
    return CrudeBound(q, r_limit, _round_up(omega_exact, 3), r_exact, omega_exact, digits)


class _SumTable:
    """Float prefix sums of 1/p_i with elementwise error bounds, S[0] = 0."""

    def __init__(self, n: int, table: PrimeTable | None = None):
        tab = table if table is not None else default_table()
        self.S = tab.recip_prefix_with_zero(n)
        self.err = prefix_error(self.S)

    def delta_bounds(self, t, omega):
        tail = self.S[omega] - self.S[t]
        err = self.err[omega] + self.err[t]
        return 1 - tail - err, 1 - tail + err


@dataclass
class OmegaCheck:
    q: int
    omega: int
    t: int
    eliminated: bool
    verdict: str
    K_of_R: float
    B: float
    delta: tuple[float, float]

    def __iter__(self):
        yield self.eliminated
        yield self.K_of_R


def _status(prof: BoundProfile, omega, t, dlo, dhi):
    """Vectorised core of check_omega.

    Returns (status, K_of_R_upper, B_upper) with status 1 = eliminated,
    0 = not eliminated, -1 = inconclusive (guard band or delta sign unknown).
    """
    omega = np.asarray(omega, dtype=np.float64)
    s = omega - t
    valid = dlo > 0
    safe_lo = np.where(valid, dlo, 1.0)
    safe_hi = np.where(dhi > 0, dhi, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        K_hi = prof.K(prof.R(t, s, safe_lo))
        K_lo = prof.K(prof.R(t, s, safe_hi))
        B_hi = prof.B(K_hi)
        B_lo = prof.B(K_lo)
    elim = valid & (omega >= B_hi * (1 + GUARD))
    keep = (dhi <= 0) | (valid & (omega < B_lo * (1 - GUARD)))
    status = np.where(elim, 1, np.where(keep, 0, -1))
    K_hi = np.where(valid, K_hi, np.inf)
    return status, K_hi, np.where(valid, B_hi, np.inf)


def check_omega(q: int, omega: int, t: int, table: PrimeTable | None = None) -> OmegaCheck:
    """Decide omega >= (B o K o R)(omega) with the t smallest primes left in the core.

    Unpacks as ``(eliminated, K_of_R)``.  K_of_R is evaluated at the certified
    lower end of delta, so it is an upper bound for the r threshold.
    """
    if not 0 <= t <= omega or omega < 1:
        raise ValueError("need 0 <= t <= omega and omega >= 1")
    prof = profile(q)
    sums = _SumTable(omega, table)
    dlo, dhi = sums.delta_bounds(t, omega)
    if dhi <= 0:
        raise ValueError(f"delta({omega}) <= 0 for t={t}")
    status, K_hi, B_hi = _status(prof, omega, t, dlo, dhi)
    status = int(status)
    verdict = {1: "eliminated", 0: "not_eliminated", -1: "inconclusive"}[status]
    return OmegaCheck(q, omega, t, status == 1, verdict, float(K_hi), float(B_hi), (float(dlo), float(dhi)))


def check_omega_range(q: int, t: int, lo: int, hi: int, table: PrimeTable | None = None):
    """Statuses and K_of_R for every omega in [lo, hi] at fixed t (arrays)."""
    if lo < max(t, 1):
        raise ValueError("need lo >= max(t, 1)")
    prof = profile(q)
    sums = _SumTable(hi, table)
    omegas = np.arange(lo, hi + 1)
    dlo, dhi = sums.delta_bounds(t, omegas)
    status, K_hi, _ = _status(prof, omegas, t, dlo, dhi)
    return omegas, status, K_hi


LEAP_SIDE_CONDITIONS = {
    # q: (min s, min K o r, min K o R)
    3: (15, 7.0, 3.0),
    4: (19, 6.0, 2.0),
}


class LeapPreconditionError(ValueError):
    pass


@dataclass
class LeapState:
    q: int
    omega0: int
    t: int
    m: float
    omega1: int
    delta_lower: float
    delta_estimate: float | None
    r: float
    K_of_r: float
    B_of_K_of_r: float
    R: float | None
    K_of_R: float | None
    R_floor: float
    K_of_R_floor: float
    mertens_target: float
    n: float
    sum_upper_omega1: float
    side_conditions: dict = field(default_factory=dict)


def _nth_prime_upper(i: int) -> float:
    """Some n with pi_lower(n) >= i, hence p_i <= n."""
    lo, hi = math.log(59.0), math.log(max(60.0, 2.0 * i * math.log(i + 2) ** 2))
    while pi_lower(math.exp(hi)) < i:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if pi_lower(math.exp(mid)) >= i:
            hi = mid
        else:
            lo = mid
    return math.exp(hi)


def _largest_n(target: float) -> float:
    """Largest n (up to bisection resolution) with mertens_upper(n) < target."""
    lo, hi = math.log(59.0), math.log(1e60)
    if mertens_upper(59.0) >= target:
        raise LeapPreconditionError("Mertens target too small to move past n = 59")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mertens_upper(math.exp(mid)) < target:
            lo = mid
        else:
            hi = mid
    return math.exp(lo)


def leap(q: int, omega0: int, t: int, m: float, table: PrimeTable | None = None) -> LeapState:
    """Extend elimination from omega0 to every omega in (omega0, omega1].

    Side conditions are checked with guard-banded comparisons and raise
    :class:`LeapPreconditionError` naming the failed one.  When omega0 is
    beyond the prime table, delta(omega0) is bounded below through the
    Mertens bound at an upper bound for p_omega0.
    """
    omega0 = int(omega0)
    t = int(t)
    if not 0 < m < 1:
        raise ValueError("m must lie in (0, 1)")
    if not 0 <= t < omega0:
        raise ValueError("need 0 <= t < omega0")
    prof = profile(q)
    tab = table if table is not None else default_table()
    s_min, Kr_min, KR_min = LEAP_SIDE_CONDITIONS.get(q, LEAP_SIDE_CONDITIONS[4])
    s = omega0 - t
    t_lo, t_hi = tab.recip_sum_bounds(t)

    delta_estimate = None
    if omega0 <= tab.max_primes:
        w_lo, w_hi = tab.recip_sum_bounds(omega0)
        delta_lower = 1 - (w_hi - t_lo)
        delta_upper = 1 - (w_lo - t_hi)
        delta_estimate = 1 - (0.5 * (w_lo + w_hi) - 0.5 * (t_lo + t_hi))
    else:
        delta_lower = 1 - mertens_upper(_nth_prime_upper(omega0)) + t_lo
        delta_upper = 1.0

    r_val = float(prof.r_dropped(t, s, m))
    Kr = float(prof.K(r_val))
    BKr = float(prof.B(Kr))
    R_floor = float(prof.R(t, s, 1.0))
    KR_floor = float(prof.K(R_floor))
    R_val = KR_val = None
    if delta_estimate is not None:
        R_val = float(prof.R(t, s, delta_estimate))
        KR_val = float(prof.K(R_val))
    # K o R is decreasing in delta, so the delta upper bound gives a safe floor
    KR_safe = float(prof.K(prof.R(t, s, min(delta_upper, 1.0))))

    # (K o r) grows by at most (2/(s-1))/K_den per step; B' is decreasing past e^2/log q
    step_Kr = (2 / (s - 1)) / prof.K_denominator if s > 1 else math.inf
    step_B = step_Kr * float(prof.B_prime(Kr))
    conditions = {
        "delta(omega0) > m": (delta_lower > m * (1 + GUARD), delta_lower),
        "omega0 >= (B o K o r)(omega0)": (omega0 >= BKr * (1 + GUARD), BKr),
        f"s(omega0) >= {s_min}": (s >= s_min, s),
        f"(K o r)(omega0) >= {Kr_min:g}": (Kr >= Kr_min * (1 + GUARD), Kr),
        f"(K o R)(omega0) >= {KR_min:g}": (KR_safe >= KR_min * (1 + GUARD), KR_safe),
        "K o r past the concavity point": (Kr > math.e**2 / math.log(q), Kr),
        "B o K o r grows by < 1 per step": (step_B < 1 - GUARD, step_B),
    }
    for name, (ok, value) in conditions.items():
        if not ok:
            raise LeapPreconditionError(f"leap side condition failed: {name} (value {value!r})")

    target = 1 - m + t_lo
    n = _largest_n(target * (1 - GUARD))
    omega1 = math.floor(pi_lower(n) * (1 - GUARD))
    return LeapState(
        q=q,
        omega0=omega0,
        t=t,
        m=m,
        omega1=omega1,
        delta_lower=delta_lower,
        delta_estimate=delta_estimate,
        r=r_val,
        K_of_r=Kr,
        B_of_K_of_r=BKr,
        R=R_val,
        K_of_R=KR_val,
        R_floor=R_floor,
        K_of_R_floor=KR_floor,
        mertens_target=target,
        n=n,
        sum_upper_omega1=mertens_upper(n),
        side_conditions={k: v[1] for k, v in conditions.items()},
    )


# the leaps used to cover everything up to the crude ceiling
LEAP_PLANS = {
    4: [(10**5, 30_000, 0.05), (None, 15_000_000, 0.05)],
    3: [(10**5, 30_000, 0.01)],
}


@dataclass
class CeilingReport:
    q: int
    ceiling: int
    source: str
    leaps: list = field(default_factory=list)
    crude: CrudeBound | None = None


def ceiling_report(q: int, table: PrimeTable | None = None) -> CeilingReport:
    _require_supported(q)
    if q >= 5:
        N = naive_prime_limit(q, table)
        return CeilingReport(q, N - 1, "primorial")
    crude = crude_r_bound(q)
    leaps = []
    omega = None
    for omega0, t, m in LEAP_PLANS[q]:
        state = leap(q, omega0 if omega0 is not None else omega, t, m, table)
        leaps.append(state)
        omega = state.omega1
    if omega < crude.omega_limit:
        raise ArithmeticError(f"leap chain for q={q} stops at {omega}, below the crude bound {crude.omega_limit}")
    return CeilingReport(q, leaps[0].omega0, "leap", leaps, crude)


def omega_ceiling(q: int, table: PrimeTable | None = None) -> int:
    """If G_A lacks a primitive element then omega_r <= this value."""
    return ceiling_report(q, table).ceiling


@dataclass
class Table2Row:
    q: int
    omega_threshold: int
    r_threshold: int
    r_bound: float
    even_only: bool
    ceiling: int
    runs: list = field(default_factory=list)
    worst_omega: int = 0
    worst_t: int = 0
    inconclusive: int = 0

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "omega_threshold": self.omega_threshold,
            "r_threshold": self.r_threshold,
            "r_bound": self.r_bound,
            "even_only": self.even_only,
            "ceiling": self.ceiling,
            "runs": [list(run) for run in self.runs],
            "worst_omega": self.worst_omega,
            "worst_t": self.worst_t,
        }


def table2_sweep(q: int, ceiling: int | None = None, table: PrimeTable | None = None) -> Table2Row:
    """Walk down from the ceiling eliminating omega values; derive the r bound.

    At each step the t (from ``T_CANDIDATES``) eliminating the longest
    downward run is used, ties going to the smaller t; runs are recorded as
    (t, low omega, high omega).  The r bound is the largest, over surviving
    omega, of the smallest K o R over t; the threshold is the next integer
    (next even integer for q = 3).
    """
    _require_supported(q)
    if ceiling is None:
        ceiling = omega_ceiling(q, table)
    prof = profile(q)
    sums = _SumTable(ceiling, table)
    omegas = np.arange(0, ceiling + 1)
    status = {}
    KR = {}
    for t in T_CANDIDATES:
        if t > ceiling:
            break
        w = omegas[max(t, 1) :]
        dlo, dhi = sums.delta_bounds(t, w)
        st, kr, _ = _status(prof, w, t, dlo, dhi)
        full_st = np.zeros(ceiling + 1, dtype=np.int8)
        full_kr = np.full(ceiling + 1, np.inf)
        full_st[max(t, 1) :] = st
        full_kr[max(t, 1) :] = kr
        status[t] = full_st
        KR[t] = full_kr

    # run_start[t][w]: lowest omega such that t eliminates everything in [that, w]
    run_start = {}
    idx = np.arange(ceiling + 1)
    for t, st in status.items():
        breaks = np.where(st != 1, idx, -1)
        last_break = np.maximum.accumulate(breaks)
        run_start[t] = last_break + 1

    runs = []
    w = ceiling
    while w >= 1:
        best = None
        for t, st in status.items():
            if st[w] != 1:
                continue
            start = int(run_start[t][w])
            if best is None or start < best[1]:
                best = (t, start)
        if best is None:
            break
        runs.append((best[0], best[1], w))
        w = best[1] - 1
    threshold = w + 1
    inconclusive = int(sum(int(st[w]) == -1 for st in status.values())) if w >= 1 else 0

    r_bound = 0.0
    worst = (0, 0)
    for om in range(1, threshold):
        best_t, best_k = None, math.inf
        for t, kr in KR.items():
            if t <= om and kr[om] < best_k:
                best_t, best_k = t, float(kr[om])
        if best_k > r_bound:
            r_bound, worst = best_k, (om, best_t)
    r_thr = math.floor(r_bound) + 1
    even_only = prof.track == EVEN_R
    if even_only and r_thr % 2:
        r_thr += 1
    return Table2Row(q, threshold, r_thr, r_bound, even_only, ceiling, runs, worst[0], worst[1], inconclusive)

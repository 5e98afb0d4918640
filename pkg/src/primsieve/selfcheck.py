"""Brute-force property suites over small fields.

Each suite checks one of the counting identities or inequalities behind the
sieve on explicit fields, against exhaustive counts.  Failures carry the seed
and the offending case so they can be replayed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .criteria import InvalidConfig, SieveConfig, sieve_threshold
from .finite_field import (
    FieldCtx,
    build_field,
    characters,
    count_e_free,
    true_K,
    vinogradov_count,
)
from .hyperplanes import make_g_a, random_general_position
from .numtheory import Factorization, factorize

# order -> (p, k, r); F_q = F_{p^k} is the base of the tested extension
TOWERS = {
    8: (2, 1, 3),
    9: (3, 1, 2),
    16: (2, 2, 2),
    25: (5, 1, 2),
    27: (3, 1, 3),
    32: (2, 1, 5),
    49: (7, 1, 2),
    64: (2, 2, 3),
    81: (3, 1, 4),
    125: (5, 1, 3),
    243: (3, 1, 5),
    256: (2, 2, 4),
    729: (3, 2, 3),
}
DEFAULT_ORDERS = (9, 16, 25, 27, 64, 81)
FAULTS = ("mu_flip",)
TOL = 1e-6


@dataclass
class PropertyResult:
    name: str
    order: int
    cases: int = 0
    violations: list[str] = field(default_factory=list)
    seed: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        msg = f"{status} {self.name} F_{self.order} cases={self.cases}"
        if self.violations:
            msg += f" seed={self.seed} first: {self.violations[0]}"
        return msg


@dataclass
class SelfcheckReport:
    results: list[PropertyResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failed(self) -> list[PropertyResult]:
        return [r for r in self.results if not r.ok]

    def render(self) -> str:
        lines = [r.line() for r in self.results]
        lines.append(f"{'ok' if self.ok else 'FAILED'}: {len(self.results) - len(self.failed())}/{len(self.results)} properties")
        return "\n".join(lines) + "\n"


def tower(order: int) -> FieldCtx:
    if order not in TOWERS:
        raise ValueError(f"no tower registered for order {order}; choose from {sorted(TOWERS)}")
    p, k, r = TOWERS[order]
    return build_field(p, k, r)


def orders_up_to(max_order: int) -> list[int]:
    if max_order > 3**12:
        raise ValueError("max_order is capped at 3^12")
    return [n for n in sorted(TOWERS) if n <= max_order]


# helpers ----------------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _free_mask(ctx: FieldCtx, e: int) -> np.ndarray:
    """Boolean over codes: e-free (0 is never e-free)."""
    logs = ctx.dlog
    mask = logs >= 0
    for ell in factorize(e).primes:
        mask &= (logs % ell) != 0
    return mask


class _Counter:
    """N(e, A) through cached masks; cross-checked against count_e_free."""

    def __init__(self, ctx: FieldCtx):
        self.ctx = ctx
        self._masks: dict[int, np.ndarray] = {}

    def __call__(self, e: int, arr: np.ndarray) -> int:
        if e not in self._masks:
            self._masks[e] = _free_mask(self.ctx, e)
        return int(self._masks[e][arr].sum())


def _random_subset(ctx: FieldCtx, rng: random.Random, *, nonzero: bool = True) -> np.ndarray:
    lo = 1 if nonzero else 0
    pool = list(range(lo, ctx.order))
    size = rng.randint(1, len(pool))
    return np.asarray(sorted(rng.sample(pool, size)), dtype=np.int64)


def _rho(e: int) -> Fraction:
    return factorize(e).rho()


def _W(e: int) -> int:
    return factorize(e).W()


# suites -----------------------------------------------------------------------

def check_lemma_vinogradov(ctx: FieldCtx, seed: int, cases: int = 100, fault: str | None = None) -> PropertyResult:
    res = PropertyResult("vinogradov_identity", ctx.order, seed=seed)
    rng = random.Random(seed)
    divs = _divisors(ctx.group_order)
    for _ in range(cases):
        arr = _random_subset(ctx, rng)
        e = rng.choice(divs)
        got = vinogradov_count(ctx, arr, e, mu_flip=(fault == "mu_flip"))
        want = count_e_free(ctx, arr, e)
        res.cases += 1
        if abs(got - want) > TOL:
            res.violations.append(f"e={e} |A|={len(arr)} formula={got:.6f} count={want}")
    return res


def check_lemma_lower_bounds(ctx: FieldCtx, seed: int, cases: int = 60) -> PropertyResult:
    """N(e,A) >= rho(e)(|A| - (W(e)-1)K) and the coprime-split difference bound."""
    res = PropertyResult("character_bound_inequalities", ctx.order, seed=seed)
    rng = random.Random(seed)
    count = _Counter(ctx)
    divs = _divisors(ctx.group_order)
    for _ in range(cases):
        arr = _random_subset(ctx, rng)
        K = true_K(ctx, arr)
        for e in divs:
            n_e = count(e, arr)
            lower = float(_rho(e)) * (len(arr) - (_W(e) - 1) * K)
            res.cases += 1
            if n_e < lower - TOL:
                res.violations.append(f"lower bound e={e} N={n_e} bound={lower:.6f}")
            for d in divs:
                if e % d or math.gcd(d, e // d) != 1:
                    continue
                diff = abs(n_e - float(_rho(e // d)) * count(d, arr))
                cap = float(_rho(e)) * (_W(e) - _W(d)) * K
                res.cases += 1
                if diff > cap + TOL:
                    res.violations.append(f"split e={e} d={d} diff={diff:.6f} cap={cap:.6f}")
    return res


def check_lcm_inclusion(ctx: FieldCtx, seed: int, cases: int = 20) -> PropertyResult:
    """N(lcm) >= N(e1) + N(e2) - N(gcd), and N(e) = N(rad e)."""
    res = PropertyResult("lcm_gcd_inclusion", ctx.order, seed=seed)
    rng = random.Random(seed)
    count = _Counter(ctx)
    divs = _divisors(ctx.group_order)
    for _ in range(cases):
        arr = _random_subset(ctx, rng)
        for e1, e2 in combinations(divs, 2):
            g = math.gcd(e1, e2)
            big = e1 * e2 // g
            res.cases += 1
            if count(big, arr) < count(e1, arr) + count(e2, arr) - count(g, arr):
                res.violations.append(f"e1={e1} e2={e2} |A|={len(arr)}")
        for e in divs:
            res.cases += 1
            if count(e, arr) != count(factorize(e).rad(), arr):
                res.violations.append(f"rad invariance e={e}")
    return res


def _role_splits(primes: tuple[int, ...]):
    """Every assignment of the primes to core (0), sieved (1), modified (2)."""
    for roles in product((0, 1, 2), repeat=len(primes)):
        k = math.prod(p for p, t in zip(primes, roles) if t == 0)
        sieved = [p for p, t in zip(primes, roles) if t == 1]
        modified = [p for p, t in zip(primes, roles) if t == 2]
        yield k, sieved, modified


def check_partition_bounds(ctx: FieldCtx, seed: int, cases: int = 20) -> PropertyResult:
    """The sieving and modified-prime lower bounds, for every split of rad(e)."""
    res = PropertyResult("partition_lower_bounds", ctx.order, seed=seed)
    rng = random.Random(seed)
    count = _Counter(ctx)
    divs = _divisors(ctx.group_order)
    for _ in range(cases):
        arr = _random_subset(ctx, rng)
        size = len(arr)
        for e in divs:
            primes = factorize(e).primes
            if len(primes) > 4:
                continue
            n_e = count(e, arr)
            for k, sieved, modified in _role_splits(primes):
                if not modified:
                    bound = (1 - len(sieved)) * count(k, arr) + sum(count(k * p, arr) for p in sieved)
                    res.cases += 1
                    if n_e < bound:
                        res.violations.append(f"sieve split e={e} k={k} p={sieved}")
                k1 = k * math.prod(sieved)
                eps = sum(Fraction(1, ell) for ell in modified)
                bound = (
                    count(k1, arr)
                    - eps * size
                    + sum(count(ell, arr) - (1 - Fraction(1, ell)) * size for ell in modified)
                )
                res.cases += 1
                if n_e < bound:
                    res.violations.append(f"modified split e={e} k={k} p={sieved} l={modified}")
    return res


def check_character_table(ctx: FieldCtx, seed: int, cases: int = 50) -> PropertyResult:
    res = PropertyResult("character_table", ctx.order, seed=seed)
    N = ctx.group_order
    total = 0
    for d in _divisors(N):
        chars = characters(ctx, d)
        total += len(chars)
        res.cases += 1
        phi_d = factorize(d).phi()
        if len(chars) != phi_d or any(c.order != d for c in chars):
            res.violations.append(f"order {d}: {len(chars)} characters, expected {phi_d}")
    res.cases += 1
    if total != N:
        res.violations.append(f"{total} characters in all, expected {N}")
    rng = random.Random(seed)
    for _ in range(cases):
        j1, j2, a = rng.randrange(N), rng.randrange(N), rng.randrange(1, ctx.order)
        t = int(ctx.dlog[a])
        lhs = np.exp(2j * np.pi * (((j1 + j2) % N) * t % N) / N)
        rhs = np.exp(2j * np.pi * (j1 * t % N) / N) * np.exp(2j * np.pi * (j2 * t % N) / N)
        prod_char = ctx.character(j1) * ctx.character(j2)
        res.cases += 1
        if prod_char.j != (j1 + j2) % N or abs(lhs - rhs) > 1e-9:
            res.violations.append(f"product rule j1={j1} j2={j2}")
    res.cases += 1
    if true_K(ctx, np.arange(1, ctx.order)) > 1e-9:
        res.violations.append("orthogonality: nontrivial sum over F* is not 0")
    return res


def check_hyperplane_bounds(ctx: FieldCtx, seed: int, cases: int = 50) -> PropertyResult:
    """|G_A| = (q-1)^r and the two character-sum bounds for G_A."""
    res = PropertyResult("hyperplane_char_bounds", ctx.order, seed=seed)
    rng = random.Random(seed)
    q, r = ctx.q, ctx.r
    general = math.sqrt(3 * (q - 1) ** r * q ** math.ceil(3 * r / 4))
    even = 2 * (q - 1) ** (3 * r / 4) * q ** (r / 8) if r % 2 == 0 else None
    for _ in range(cases):
        hset = random_general_position(ctx, rng)
        member = hset.membership()
        res.cases += 1
        if any(int(row.sum()) != q ** (r - 1) for row in member):
            res.violations.append(f"hyperplane size != q^(r-1) for {hset.functionals}")
            continue
        g_a = make_g_a(ctx, hset)
        K = true_K(ctx, g_a)
        res.cases += 1
        if K > general + 1e-9:
            res.violations.append(f"general bound K={K:.6f} > {general:.6f} for {hset.functionals} {hset.offsets}")
        if even is not None:
            res.cases += 1
            if not K < even:
                res.violations.append(f"even-r bound K={K:.6f} >= {even:.6f} for {hset.functionals} {hset.offsets}")
    return res


def check_sieve_soundness(ctx: FieldCtx, seed: int, cases: int = 40) -> PropertyResult:
    """Whenever the sieve inequality holds with the true K, A has a primitive element."""
    res = PropertyResult("sieve_soundness", ctx.order, seed=seed)
    rng = random.Random(seed)
    base = factorize(ctx.group_order).radical()
    configs = []
    for k, sieved, modified in _role_splits(base.primes):
        cfg = SieveConfig.build(base, sieved, modified)
        try:
            configs.append((cfg, sieve_threshold(cfg)))
        except InvalidConfig:
            continue
    primitive = _free_mask(ctx, ctx.group_order)
    for i in range(cases):
        if i % 2:
            arr = make_g_a(ctx, random_general_position(ctx, rng))
        else:
            arr = _random_subset(ctx, rng, nonzero=False)
        K = true_K(ctx, arr)
        has_primitive = bool(primitive[arr].any())
        # chi(0) = 0, so only the nonzero part of A is seen by the sieve
        size = int(np.count_nonzero(arr))
        for cfg, T in configs:
            # cases counts firings of the criterion, so a vacuous run shows as 0
            if size > float(T) * K * (1 + 1e-9):
                res.cases += 1
                if not has_primitive:
                    res.violations.append(f"config {cfg.describe()} passes with no primitive element in A")
    return res


SUITES = (
    check_lemma_vinogradov,
    check_lemma_lower_bounds,
    check_lcm_inclusion,
    check_partition_bounds,
    check_character_table,
    check_hyperplane_bounds,
    check_sieve_soundness,
)


def run_selfcheck(
    orders=DEFAULT_ORDERS,
    *,
    seed: int = 20240601,
    fault: str | None = None,
) -> SelfcheckReport:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    results = []
    for order in orders:
        ctx = tower(order)
        for i, suite in enumerate(SUITES):
            s = seed + 1000 * order + i
            if suite is check_lemma_vinogradov:
                results.append(suite(ctx, s, fault=fault))
            else:
                results.append(suite(ctx, s))
    return SelfcheckReport(results)

import math
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from primsieve.criteria import (
    ELIMINATED,
    EVEN_R,
    GENUINE_EXCEPTION,
    KATZ_CEILING,
    KATZ_OPTIMAL_K,
    POSSIBLE_EXCEPTION,
    InvalidConfig,
    SieveConfig,
    alpha_qr,
    char_bound,
    choose_config,
    classify,
    criteria_can_apply,
    fr_criterion1,
    fr_criterion2,
    generic_prime_config,
    hypersieve_check,
    hypersieve_witness,
    optimal_katz_k,
    prime_sieve_multiplier,
    prior_work_verdict,
    sieve_threshold,
    surd_sign,
)
from primsieve.fixtures import bundled_fixtures
from primsieve.hyperplanes import bundled_certificates
from primsieve.numtheory import Factorization, factor_power_minus_one, factorize

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


@settings(max_examples=400, deadline=None)
@given(
    st.integers(-10**6, 10**6),
    st.integers(-10**6, 10**6),
    st.sampled_from([2, 3, 5, 7, 8, 9, 11, 27]),
)
def test_surd_sign_matches_sympy(x, y, q):
    expected = sympy.sign(sympy.Integer(x) + sympy.Integer(y) * sympy.sqrt(q))
    assert surd_sign(x, y, q) == int(expected)


def test_surd_sign_accepts_fractions():
    assert surd_sign(Fraction(3, 2), Fraction(-1, 2), 9) == 0
    assert surd_sign(Fraction(-7, 5), 1, 2) == 1


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 11])
@pytest.mark.parametrize("r", range(2, 40))
def test_optimal_k_is_global_minimiser(q, r):
    def inner(k):
        return 2 * sympy.Integer(q) ** (sympy.Rational(3 * r, 2) - k) + sympy.Integer(q) ** k

    values = {k: inner(k) for k in range(1, r + 1)}
    best = min(values.values())
    k = optimal_katz_k(q, r)
    assert sympy.simplify(values[k] - best) == 0


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
@pytest.mark.parametrize("r", range(2, 30))
def test_char_bound_values(q, r):
    ceil = char_bound(KATZ_CEILING, q, r)
    assert ceil.b == 0 and ceil.a == 3 * (q - 1) ** r * q ** math.ceil(3 * r / 4)
    opt = char_bound(KATZ_OPTIMAL_K, q, r)
    expected = (q - 1) ** r * (2 * q ** (1.5 * r - opt.k_used) + q**opt.k_used)
    assert opt.value_sq == pytest.approx(expected, rel=1e-12)
    # the optimal k can only improve on the ceiling choice
    assert surd_sign(ceil.a - opt.a, -opt.b, q) >= 0
    if r % 4 == 0:
        assert ceil.k_used == 3 * r // 4


def test_even_bound_example():
    b = char_bound(EVEN_R, 3, 4)
    assert (b.a, b.b) == (768, 0)
    assert char_bound(EVEN_R, 3, 2).value_sq == pytest.approx(4 * 2**3 * 3**0.5)
    with pytest.raises(ValueError):
        char_bound(EVEN_R, 3, 5)


def test_threshold_reductions_examples():
    base = Factorization.from_primes([2, 3, 5])
    cfg = SieveConfig.build(base, sieved=[5], modified=[3])
    assert cfg.k == 2
    assert (cfg.delta, cfg.epsilon) == (Fraction(4, 5), Fraction(1, 3))
    half = Fraction(1, 2)
    want = (half * 2 * (1 + Fraction(3, 5)) + 1 - Fraction(2, 5) - Fraction(1, 3)) / (Fraction(2, 5) - Fraction(1, 3))
    assert sieve_threshold(cfg) == want
    # independent symbolic evaluation
    rho, W, s1, s2, d, e = sympy.Rational(1, 2), 2, 1, 1, sympy.Rational(4, 5), sympy.Rational(1, 3)
    assert sympy.Rational(want.numerator, want.denominator) == (rho * W * (s1 + 2 * d - 1) + s2 - d * rho - e) / (d * rho - e)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(SMALL_PRIMES), min_size=1, max_size=6, unique=True), st.data())
def test_threshold_reduction_identities(primes, data):
    base = Factorization.from_primes(primes)
    assert sieve_threshold(SieveConfig.build(base)) == base.W() - 1
    s = data.draw(st.integers(0, len(primes)))
    sieved = data.draw(st.permutations(primes))[:s]
    cfg = SieveConfig.build(base, sieved=sieved)
    core = cfg.core
    if cfg.delta > 0:
        want = core.W() * (s + 2 * cfg.delta - 1) / cfg.delta - 1
        assert sieve_threshold(cfg) == want
    else:
        with pytest.raises(InvalidConfig):
            sieve_threshold(cfg)


def test_sieve_config_invariants():
    base = Factorization.from_primes([2, 3, 13])
    with pytest.raises(ValueError):
        SieveConfig(base, 2, (3,), (3,))
    with pytest.raises(ValueError):
        SieveConfig(base, 1, (3,), ())
    cfg = SieveConfig.build(base, [13], [3])
    assert cfg.k * 13 * 3 == base.rad()


def _exhaustive_best(base):
    best = None
    for roles in product((0, 1, 2), repeat=base.omega()):
        sieved = [p for p, t in zip(base.primes, roles) if t == 1]
        modified = [p for p, t in zip(base.primes, roles) if t == 2]
        cfg = SieveConfig.build(base, sieved, modified)
        if cfg.is_valid:
            T = sieve_threshold(cfg)
            best = T if best is None else min(best, T)
    return best


def test_choose_config_examples():
    one = choose_config(Factorization.from_primes([2]))
    assert (one.sieved, one.modified) == ((), ())
    assert sieve_threshold(one) == 1
    base = factorize(5**4 - 1).radical()
    cfg = choose_config(base)
    assert sieve_threshold(cfg) == _exhaustive_best(base)
    assert sieve_threshold(choose_config(base, exhaustive=True)) == _exhaustive_best(base)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.sampled_from(SMALL_PRIMES), min_size=1, max_size=6, unique=True))
def test_choose_config_never_beats_exhaustive(primes):
    base = Factorization.from_primes(primes)
    heuristic = sieve_threshold(choose_config(base))
    assert heuristic >= _exhaustive_best(base)
    assert heuristic <= base.W() - 1


def test_generic_prime_config_examples():
    g = generic_prime_config(7, 0, 0)
    assert g.threshold == 2**7 - 1
    g = generic_prime_config(5, 2, 0)
    assert g.sieved == (7, 11) and g.delta == 1 - Fraction(1, 7) - Fraction(1, 11)
    g = generic_prime_config(5, 1, 1)
    assert g.modified == (11,) and g.sieved == (7,)


def test_generic_prime_config_is_conservative():
    # any actual integer with omega = 6 prime factors, same split sizes, has threshold <= the generic one
    for primes in ([2, 3, 5, 7, 11, 13], [2, 3, 7, 13, 31, 601], [3, 5, 17, 257, 641, 65537]):
        base = Factorization.from_primes(primes)
        for s1, s2 in [(0, 0), (1, 0), (2, 0), (1, 1)]:
            generic = generic_prime_config(6, s1, s2)
            from primsieve.criteria import _largest_split

            sieved, modified = _largest_split(primes, s1, s2)
            cfg = SieveConfig.build(base, sieved, modified)
            if cfg.is_valid:
                assert sieve_threshold(cfg) <= generic.threshold


def _float_hypersieve(q, r, primes, kind):
    """Independent float evaluation of the hyperplane sieve inequalities."""
    ps = sorted(primes, reverse=True)
    w = len(ps)
    if kind == EVEN_R:
        lhs = math.log((q - 1) ** (r / 2) / q ** (r / 4))
        const = math.log(4)
    else:
        k = optimal_katz_k(q, r)
        lhs = r * math.log(q - 1) - math.log(2 * q ** (1.5 * r - k) + q**k)
        const = 0.0
    margins = []
    for s in range(1, w + 1):
        delta = 1 - sum(1 / p for p in ps[:s])
        if delta <= 0:
            continue
        T = 2 ** (w - s) * ((s - 1) / delta + 2) - 1
        margins.append(lhs - const - 2 * math.log(T))
    return margins


@pytest.mark.parametrize("q,hi", [(9, 38), (8, 43), (7, 51), (5, 103)])
def test_hypersieve_exact_matches_float_route(q, hi):
    fixtures = bundled_fixtures()
    for r in range(2, hi + 1):
        f = fixtures.get(q, r)
        for kind in [KATZ_OPTIMAL_K] + ([EVEN_R] if r % 2 == 0 else []):
            margins = _float_hypersieve(q, r, f.primes, kind)
            exact = hypersieve_witness(q, r, f, char_bound(kind, q, r)) is not None
            if margins and max(margins) > 1e-9:
                assert exact, (q, r, kind)
            elif not margins or max(margins) < -1e-9:
                assert not exact, (q, r, kind)


def test_eliminations_survive_dropping_zero():
    # with chi(0) = 0 only the nonzero part of G_A is counted; every elimination keeps a margin of 1
    fixtures = bundled_fixtures()
    for (q, r), f in fixtures.entries.items():
        for kind in [KATZ_OPTIMAL_K] + ([EVEN_R] if r % 2 == 0 else []):
            bound = char_bound(kind, q, r)
            if hypersieve_witness(q, r, f, bound) is not None:
                assert hypersieve_witness(q, r, f, bound, drop_zero=True) is not None, (q, r, kind)


def test_prime_sieve_multiplier():
    assert prime_sieve_multiplier([2], 1) == 1
    assert prime_sieve_multiplier([2, 3, 5, 7], 4) is None  # delta <= 0
    assert prime_sieve_multiplier([3, 5], 2) == 2 ** 0 * (1 / (1 - Fraction(1, 3) - Fraction(1, 5)) + 2) - 1


def test_hypersieve_check_examples():
    rec = hypersieve_check(9, 13, factor_power_minus_one(9, 13))
    assert rec.verdict == ELIMINATED and rec.criterion == "hypersieve"
    assert rec.params["bound_kind"] == KATZ_OPTIMAL_K
    rec = hypersieve_check(9, 14, factor_power_minus_one(9, 14))
    assert rec.verdict == ELIMINATED and rec.params["bound_kind"] == EVEN_R
    assert hypersieve_check(8, 20, factor_power_minus_one(8, 20)).verdict == POSSIBLE_EXCEPTION


def test_hypersieve_record_is_recheckable():
    f = factor_power_minus_one(5, 60)
    rec = hypersieve_check(5, 60, f)
    assert rec.verdict == ELIMINATED
    s = rec.params["s"]
    T = prime_sieve_multiplier(f.primes, s)
    assert rec.bound.below((5 - 1) ** 120, T * T)
    assert rec.config.sieved == tuple(sorted(sorted(f.primes, reverse=True)[:s]))


def test_fr_criterion1_examples():
    assert fr_criterion1(9, 2, 32)
    assert not fr_criterion1(5, 2, 8)
    assert fr_criterion1(4, 2, 8)


def test_alpha_matches_formula():
    for q in (3, 4, 5, 7, 8, 9):
        for r in range(2, 25):
            a, b = alpha_qr(q, r)
            want = sum(math.comb(r, i) * q ** min(i, r / 2) for i in range(r))
            assert a + b * math.sqrt(q) == pytest.approx(want, rel=1e-12)


def test_fr_criterion2_examples():
    assert fr_criterion2(7, 13, factor_power_minus_one(7, 13).omega())
    for r in range(2, 36):
        assert not fr_criterion2(5, r, factor_power_minus_one(5, r).omega())
    # (q, 2): alpha = 1 + 2q
    for q in (3, 4, 5, 7, 8, 9, 11, 13):
        w = factorize(q * q - 1).omega()
        assert fr_criterion2(q, 2, w) == ((q - 1) ** 2 > (1 + 2 * q) * 2**w)


def test_classify_examples():
    def run(q, r, cert=None):
        f = factor_power_minus_one(q, r)
        return classify(q, r, f, f.phi(), certificate=cert)

    assert run(9, 21).criterion == "hypersieve"
    assert run(7, 2).criterion in ("fr_criterion1", "fr_criterion2")
    assert run(5, 30).verdict == POSSIBLE_EXCEPTION
    assert run(5, 35).verdict == POSSIBLE_EXCEPTION
    rec = run(3, 3, bundled_certificates()[(3, 3)])
    assert rec.verdict == GENUINE_EXCEPTION
    assert run(3, 3).verdict == POSSIBLE_EXCEPTION
    a, b = run(8, 22), run(8, 22)
    assert a.to_dict() == b.to_dict()


def test_prior_work_and_applicability():
    assert prior_work_verdict(13, 4).verdict == POSSIBLE_EXCEPTION
    assert prior_work_verdict(11, 5).verdict == ELIMINATED
    assert prior_work_verdict(16, 2).verdict == ELIMINATED
    assert prior_work_verdict(9, 2) is None
    # q = 3 with odd r: nothing here can ever apply
    assert not criteria_can_apply(3, 3)
    assert criteria_can_apply(5, 200)

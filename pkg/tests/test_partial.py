import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from primsieve.criteria import (
    EVEN_R,
    KATZ_OPTIMAL_K,
    char_bound,
    partial_hypersieve_check,
    partial_hypersieve_witness,
)
from primsieve.fixtures import (
    FixtureParseError,
    FixtureValidationError,
    PartialFactorization,
    bundled_fixtures,
    bundled_partials,
    parse_partial_text,
    validate_partial,
)
from primsieve.numtheory import Factorization, factorize

B = 100


def _split(q, r, bound):
    """Hide every prime factor above ``bound`` in one cofactor."""
    f = factorize(q**r - 1)
    known = [(p, e) for p, e in f.factors if p < bound]
    hidden = math.prod(p**e for p, e in f.factors if p >= bound)
    return f, known, hidden


def test_parse_round_trip():
    f, known, hidden = _split(2, 44, B)  # 2^44 - 1 = 3 5 23 89 397 683 2113
    line = "2 44 " + " ".join(str(p) for p, _ in known) + f" | {hidden} | {B}"
    got = parse_partial_text(line)[(2, 44)]
    assert got.known.n * hidden == 2**44 - 1
    assert parse_partial_text(got.to_line()) == {(2, 44): got}


@pytest.mark.parametrize(
    "text,err,needle",
    [
        ("2 44 3 5 23 89 | 397 | 100", FixtureValidationError, "composite above"),
        ("2 44 3 5 23 | 89 | 100", FixtureValidationError, "composite above"),
        ("2 44 3 5 89 397 | 23 | 10", FixtureValidationError, "composite above"),
        ("2 44 3 5 | 1048576 | 100", FixtureValidationError, "below 100"),
        ("2 44 3 5 23 89 | 271151 | 100", FixtureValidationError, "multiply"),
        ("2 44 3 5 4 | 1 | 100", FixtureValidationError, "not prime"),
        ("2 44 3 5 23 89 | 397 683 2113", FixtureParseError, "expected"),
        ("2 44 3 5 23 89 | x | 100", FixtureParseError, ":1:"),
        ("2 44 3 5 23 89 | 573193 | 1", FixtureValidationError, "trial bound"),
    ],
)
def test_parse_errors(text, err, needle):
    with pytest.raises(err) as info:
        parse_partial_text(text)
    assert needle in str(info.value)


def test_full_entry_rejected_as_partial():
    with pytest.raises(FixtureValidationError, match="no cofactor"):
        validate_partial(2, 4, [(3, 1), (5, 1)], [], 100)


@settings(max_examples=60, deadline=None)
@given(st.integers(2**40, 2**80).map(lambda n: n | 1))
def test_hidden_prime_count_is_an_upper_bound(n):
    f = factorize(n)
    big = [(p, e) for p, e in f.factors if p >= B]
    c = math.prod(p**e for p, e in big)
    if c < B or len(big) == 0 or (len(big) == 1 and big[0][1] == 1):
        return
    part = PartialFactorization(2, 1, Factorization.from_dict({}), (c,), B)
    assert part.unknown_prime_bound() >= len(big)


def _true_T(primes, core):
    sieved = [p for p in primes if p not in core]
    delta = 1 - sum(Fraction(1, p) for p in sieved)
    return 2 ** len(core) * (Fraction(len(sieved) - 1) / delta + 2) - 1


def test_worst_case_dominates_truth():
    # hide the primes above 10^4 of every bundled factorization; whenever the
    # worst case eliminates, the true sieve with the same core must too
    fired = 0
    for (q, r), f in sorted(bundled_fixtures().entries.items()):
        if q not in (3, 4) or r < 100:
            continue
        known = [(p, e) for p, e in f.factors if p < 10**4]
        big = [(p, e) for p, e in f.factors if p >= 10**4]
        if sum(e for _, e in big) < 2:
            continue
        part = validate_partial(q, r, known, [math.prod(p**e for p, e in big)], 10**4)
        assert part.unknown_prime_bound() >= len(big)
        for kind in [KATZ_OPTIMAL_K] + ([EVEN_R] if r % 2 == 0 else []):
            bound = char_bound(kind, q, r)
            c = partial_hypersieve_witness(q, r, part, bound)
            if c is None:
                continue
            fired += 1
            T = _true_T(f.primes, sorted(part.known.primes)[:c])
            assert bound.below(((q - 1) ** r) ** 2, T * T), (q, r, kind)
    assert fired > 200


def test_bundled_partials():
    parts = bundled_partials()
    full = bundled_fixtures()
    assert len(parts) == 25 and all(q == 4 for q, _ in parts)
    for (q, r), part in parts.items():
        assert (q, r) not in full
        assert part.trial_bound == 10**5
        rec = partial_hypersieve_check(q, r, part)
        assert rec.verdict == "eliminated" and rec.criterion == "hypersieve_partial"
        assert rec.params["hidden_primes_at_most"] == part.unknown_prime_bound()


def test_partial_never_settles_a_possible_exception():
    # (4, 28) survives every criterion with its full factorization
    f, known, hidden = _split(4, 28, 50)
    part = validate_partial(4, 28, known, [hidden], 50)
    assert partial_hypersieve_check(4, 28, part).verdict == "inconclusive"

import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy import GF, Poly, symbols

from primsieve.finite_field import (
    Character,
    all_char_sums,
    build_field,
    char_sum,
    characters,
    count_e_free,
    field_9,
    field_25,
    field_27,
    is_e_free,
    true_K,
    unit_value,
    vinogradov_count,
)
from primsieve.numtheory import factorize

x = symbols("x")


def _to_poly(ctx, code):
    return Poly(list(reversed(ctx.coeffs(code))), x, domain=GF(ctx.p))


@pytest.mark.parametrize("make", [field_9, field_25, field_27])
def test_exp_table_matches_sympy_arithmetic(make):
    ctx = make()
    modulus = Poly(list(reversed(ctx.ext_poly)), x, domain=GF(ctx.p))
    g = _to_poly(ctx, ctx.generator)
    acc = Poly(1, x, domain=GF(ctx.p))
    for t in range(ctx.group_order):
        assert _to_poly(ctx, int(ctx.exp[t])) == acc
        acc = (acc * g).rem(modulus)
    assert acc == Poly(1, x, domain=GF(ctx.p))


@pytest.mark.parametrize("p,k,r", [(2, 2, 2), (2, 1, 5), (3, 2, 2), (2, 2, 3), (3, 1, 4), (7, 1, 2)])
def test_field_structure(p, k, r):
    ctx = build_field(p, k, r)
    N = ctx.group_order
    assert ctx.q == p**k and ctx.order == p ** (k * r)
    assert sorted(ctx.exp.tolist()) == list(range(1, ctx.order))
    assert (ctx.dlog[ctx.exp] == np.arange(N)).all()
    g = ctx.generator
    assert ctx.power(g, N) == 1
    assert all(ctx.power(g, N // ell) != 1 for ell in factorize(N).primes)
    assert len(ctx.primitive_elements()) == factorize(N).phi()


@pytest.mark.parametrize("p,k,r", [(2, 2, 2), (3, 2, 2), (2, 2, 3)])
def test_field_axioms_on_samples(p, k, r):
    ctx = build_field(p, k, r)
    rng = random.Random(1)
    for _ in range(300):
        a, b, c = (rng.randrange(ctx.order) for _ in range(3))
        assert ctx.add(a, b) == ctx.add(b, a)
        assert ctx.mul(a, ctx.mul(b, c)) == ctx.mul(ctx.mul(a, b), c)
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        assert ctx.add(ctx.add(a, b), c) == ctx.add(a, ctx.add(b, c))


def test_build_field_is_deterministic():
    a, b = build_field(3, 1, 4, seed=3), build_field(3, 1, 4, seed=3)
    assert a.ext_poly == b.ext_poly and a.generator == b.generator


def test_build_field_errors():
    with pytest.raises(ValueError):
        build_field(4, 1, 2)
    with pytest.raises(ValueError):
        build_field(3, 1, 13)
    with pytest.raises(ValueError):
        build_field(3, 1, 2, ext_poly=[-1, 0, 1])  # x^2 - 1 splits
    with pytest.raises(ValueError):
        build_field(3, 1, 2, ext_poly=[-2, 0, 1], generator=[2, 0])


def test_explicit_presentations():
    f9 = field_9()
    assert f9.format(f9.generator) == "1+x"
    assert {f9.format(a) for a in f9.primitive_elements()} == {"1+x", "1+2x", "2+2x", "2+x"}
    alpha = f9.generator
    assert [f9.format(f9.power(alpha, e)) for e in (1, 3, 5, 7)] == ["1+x", "1+2x", "2+2x", "2+x"]
    f25 = field_25()
    assert f25.format(f25.generator) == "2+x" and len(f25.primitive_elements()) == 8
    f27 = field_27()
    assert f27.format(f27.generator) == "2+2x" and len(f27.primitive_elements()) == 12


def test_is_e_free_examples():
    ctx = field_27()
    g = ctx.generator
    for e in (1, 2, 13, 26):
        assert is_e_free(ctx, g, e)
    assert not is_e_free(ctx, ctx.power(g, 2), 2)
    assert is_e_free(ctx, ctx.power(g, 2), 13)
    with pytest.raises(ValueError):
        is_e_free(ctx, 0, 2)
    with pytest.raises(ValueError):
        is_e_free(ctx, g, 3)


def test_is_e_free_matches_definition():
    # gamma is e-free iff gamma = beta^d with d | e forces d = 1
    ctx = build_field(2, 2, 2)
    N = ctx.group_order
    powers = {d: {ctx.power(b, d) for b in range(1, ctx.order)} for d in range(1, N + 1) if N % d == 0}
    for e in powers:
        for a in range(1, ctx.order):
            by_definition = not any(a in powers[d] for d in powers if e % d == 0 and d > 1)
            assert is_e_free(ctx, a, e) == by_definition


def test_count_e_free_examples():
    f9 = field_9()
    assert count_e_free(f9, range(1, 9), 8) == 4
    assert count_e_free(f9, [0], 8) == 0
    f27 = field_27()
    assert count_e_free(f27, range(27), 26) == 12


def test_char_sum_examples():
    ctx = field_25()
    sub = [1, 5, 7, 11]
    assert char_sum(ctx, sub, 0) == pytest.approx(4)
    assert char_sum(ctx, sub + [0], Character(0, 24)) == pytest.approx(4)
    for j in range(1, 24):
        assert abs(char_sum(ctx, range(25), j)) < 1e-9
    assert true_K(ctx, range(1, 25)) < 1e-9
    assert true_K(ctx, [ctx.generator]) == pytest.approx(1)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 80), min_size=1, max_size=40))
def test_fft_sums_match_direct_sums(subset):
    ctx = build_field(3, 1, 4)
    sums = all_char_sums(ctx, subset)
    for j in (0, 1, 2, 5, 40, 79):
        assert sums[j] == pytest.approx(char_sum(ctx, subset, j), abs=1e-9)
        direct = sum((unit_value(ctx, ctx.character(j), a) for a in subset), 0j)
        assert sums[j] == pytest.approx(direct, abs=1e-9)


def test_characters_by_order():
    ctx = build_field(2, 2, 2)
    total = 0
    for d in (1, 3, 5, 15):
        chars = characters(ctx, d)
        assert len(chars) == sympy.totient(d) and all(c.order == d for c in chars)
        total += len(chars)
    assert total == 15
    with pytest.raises(ValueError):
        characters(ctx, 4)
    assert (ctx.character(4) * ctx.character(13)).j == 2


def test_vinogradov_examples():
    f9 = field_9()
    assert vinogradov_count(f9, range(1, 9), 8) == pytest.approx(4, abs=1e-6)
    assert vinogradov_count(f9, [1, 2, 4], 1) == pytest.approx(3, abs=1e-6)
    with pytest.raises(ValueError):
        vinogradov_count(f9, [0, 1], 2)


def test_vinogradov_matches_counts_on_f27():
    ctx = field_27()
    rng = random.Random(7)
    for _ in range(60):
        sub = rng.sample(range(1, 27), rng.randint(1, 26))
        for e in (2, 13, 26):
            got = vinogradov_count(ctx, sub, e)
            assert got == pytest.approx(count_e_free(ctx, sub, e), abs=1e-6)
            assert abs(got - round(got)) < 1e-6


def test_vinogradov_fault_is_visible():
    ctx = field_27()
    sub = list(range(1, 14))
    honest = vinogradov_count(ctx, sub, 26)
    broken = vinogradov_count(ctx, sub, 26, mu_flip=True)
    assert abs(honest - broken) > 1e-3

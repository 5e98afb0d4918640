"""Explicit small fields F_{q^r}, q = p^k, with discrete logs and characters.

Elements are integer codes.  An element of F_{q^r} is a polynomial of degree
< r over F_q, an element of F_q a polynomial of degree < k over F_p, and the
code lists all k*r coefficients over F_p as base-p digits:

    code = sum_{i<r} sum_{j<k} d_ij * p^(i*k + j)

so digit i of the code in base q is the F_q code of the coefficient of x^i.
Polynomials are coefficient lists, lowest degree first.

The exp table g^0..g^(n-2) is built with numpy as repeated multiplication by g,
viewed as a (k*r)-square matrix over F_p and applied a block at a time.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .numtheory import Factorization, factorize, is_prime

MAX_ORDER = 3**12


def _trim(poly: list[int]) -> list[int]:
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


class _Ring:
    """F_q arithmetic on codes, through lookup tables."""

    def __init__(self, p: int, base_poly: Sequence[int]):
        self.p = p
        self.k = len(base_poly) - 1
        self.q = p**self.k
        self.base_poly = list(base_poly)
        q = self.q
        digits = np.array([[(c // p**j) % p for j in range(self.k)] for c in range(q)], dtype=np.int64)
        weights = p ** np.arange(self.k)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                mul[a, b] = self._encode(self._polymulmod(list(digits[a]), list(digits[b])))
        self.mul = mul
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.nonzero(mul[a] == 1)[0][0])

    def _encode(self, digits: Iterable[int]) -> int:
        return sum(int(d) * self.p**j for j, d in enumerate(digits))

    def _polymulmod(self, a: list[int], b: list[int]) -> list[int]:
        p, k = self.p, self.k
        prod_ = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod_[i + j] = (prod_[i + j] + int(x) * int(y)) % p
        for deg in range(len(prod_) - 1, k - 1, -1):
            c = prod_[deg]
            if c:
                for j in range(k + 1):
                    prod_[deg - k + j] = (prod_[deg - k + j] - c * self.base_poly[j]) % p
        return (prod_ + [0] * k)[:k]


def _poly_divmod(a: list[int], b: list[int], ring: _Ring) -> list[int]:
    """Remainder of a mod b over the coefficient ring (b monic)."""
    a = list(a)
    db = len(b) - 1
    for deg in range(len(a) - 1, db - 1, -1):
        c = a[deg]
        if c:
            for j in range(db + 1):
                a[deg - db + j] = int(ring.add[a[deg - db + j], ring.neg[ring.mul[c, b[j]]]])
    return _trim(a[:db] if db else [0])


def is_irreducible(poly: Sequence[int], ring: _Ring) -> bool:
    """Trial division of a monic polynomial by every monic polynomial of degree <= deg/2."""
    poly = list(poly)
    deg = len(poly) - 1
    if deg < 1 or poly[-1] != 1:
        raise ValueError("expected a monic polynomial of positive degree")
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in product(range(ring.q), repeat=d):
            divisor = list(low) + [1]
            if _poly_divmod(poly, divisor, ring) == [0]:
                return False
    return True


def find_irreducible(ring: _Ring, degree: int, seed: int = 0) -> list[int]:
    """First irreducible monic polynomial in a seeded shuffle of all candidates."""
    rng = random.Random(seed)
    total = ring.q**degree
    order = list(range(total)) if total <= 1 << 16 else None
    if order is not None:
        rng.shuffle(order)
    attempts = 0
    while True:
        code = order[attempts] if order is not None else rng.randrange(total)
        attempts += 1
        low = [(code // ring.q**i) % ring.q for i in range(degree)]
        poly = low + [1]
        if low[0] != 0 or degree == 1:
            if is_irreducible(poly, ring):
                return poly


@dataclass(frozen=True)
class Character:
    """chi_j(g^t) = exp(2 pi i j t / (n - 1)), with chi_j(0) = 0."""

    j: int
    group_order: int

    @property
    def order(self) -> int:
        return self.group_order // math.gcd(self.j, self.group_order)

    def __mul__(self, other: Character) -> Character:
        return Character((self.j + other.j) % self.group_order, self.group_order)


@dataclass
class FieldCtx:
    p: int
    k: int
    r: int
    base_poly: list[int]
    ext_poly: list[int]
    generator: int
    exp: np.ndarray
    dlog: np.ndarray
    order_fact: Factorization
    ring: _Ring = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def order(self) -> int:
        return self.q**self.r

    @property
    def group_order(self) -> int:
        return self.order - 1

    # element helpers -------------------------------------------------------
    def element(self, coeffs: Sequence[int]) -> int:
        """Code of sum coeffs[i] x^i, with F_q coefficients given as codes."""
        if len(coeffs) > self.r:
            raise ValueError("too many coefficients")
        return sum(int(c) % self.q * self.q**i for i, c in enumerate(coeffs))

    def coeffs(self, code: int) -> list[int]:
        return [(code // self.q**i) % self.q for i in range(self.r)]

    def coordinates(self) -> np.ndarray:
        """Array (n, r) of F_q coefficient codes for every element code."""
        codes = np.arange(self.order)
        return np.stack([(codes // self.q**i) % self.q for i in range(self.r)], axis=1)

    def add(self, a: int, b: int) -> int:
        ring = self.ring
        return self.element([int(ring.add[x, y]) for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(int(self.dlog[a]) + int(self.dlog[b])) % self.group_order])

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(int(self.dlog[a]) * e) % self.group_order])

    def is_primitive(self, a: int) -> bool:
        return a != 0 and math.gcd(int(self.dlog[a]), self.group_order) == 1

    def primitive_elements(self) -> list[int]:
        N = self.group_order
        return sorted(int(self.exp[t]) for t in range(N) if math.gcd(t, N) == 1)

    def format(self, code: int) -> str:
        """Human form like 2+x+2x^2 (coefficients as F_q codes)."""
        terms = []
        for i, c in enumerate(self.coeffs(code)):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(str(c) if not mono else (mono if c == 1 else f"{c}{mono}"))
        return "+".join(terms) if terms else "0"

    def character(self, j: int) -> Character:
        return Character(j % self.group_order, self.group_order)


def _slow_mul(a: list[int], b: list[int], ring: _Ring, ext_poly: list[int]) -> list[int]:
    r = len(ext_poly) - 1
    prod_ = [0] * (2 * r - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                prod_[i + j] = int(ring.add[prod_[i + j], ring.mul[x, y]])
    full = _poly_divmod(prod_, ext_poly, ring)
    return (full + [0] * r)[:r]


def _slow_pow(a: list[int], e: int, ring: _Ring, ext_poly: list[int]) -> list[int]:
    r = len(ext_poly) - 1
    out = [1] + [0] * (r - 1)
    base = list(a)
    while e:
        if e & 1:
            out = _slow_mul(out, base, ring, ext_poly)
        base = _slow_mul(base, base, ring, ext_poly)
        e >>= 1
    return out


def _is_generator(a: list[int], ring: _Ring, ext_poly: list[int], fact: Factorization) -> bool:
    r = len(ext_poly) - 1
    one = [1] + [0] * (r - 1)
    N = fact.n
    if _slow_pow(a, N, ring, ext_poly) != one:
        return False
    return all(_slow_pow(a, N // ell, ring, ext_poly) != one for ell in fact.primes)


def _exp_table(gen: list[int], ring: _Ring, ext_poly: list[int], N: int) -> np.ndarray:
    p, k = ring.p, ring.k
    r = len(ext_poly) - 1
    D = k * r
    # column c: F_p digits of g * (basis element with code p^c)
    M = np.zeros((D, D), dtype=np.int64)
    for c in range(D):
        i, j = divmod(c, k)
        basis = [0] * r
        basis[i] = p**j
        img = _slow_mul(basis, gen, ring, ext_poly)
        for ii, coef in enumerate(img):
            for jj in range(k):
                M[ii * k + jj, c] = (coef // p**jj) % p
    block = min(N, 1024)
    rows = np.zeros((block, D), dtype=np.int64)
    v = np.zeros(D, dtype=np.int64)
    v[0] = 1
    for i in range(block):
        rows[i] = v
        v = (M @ v) % p
    P = np.eye(D, dtype=np.int64)
    base, e = M.copy(), block
    while e:
        if e & 1:
            P = (P @ base) % p
        base = (base @ base) % p
        e >>= 1
    out = np.empty((N, D), dtype=np.int64)
    start = 0
    cur = rows
    while start < N:
        take = min(block, N - start)
        out[start : start + take] = cur[:take]
        start += take
        cur = (cur @ P.T) % p
    return out @ (p ** np.arange(D, dtype=np.int64))


def build_field(
    p: int,
    k: int,
    r: int,
    seed: int = 0,
    *,
    base_poly: Sequence[int] | None = None,
    ext_poly: Sequence[int] | None = None,
    generator: Sequence[int] | None = None,
    max_order: int = MAX_ORDER,
) -> FieldCtx:
    """Construct F_{p^(k r)} as a tower, deterministic in ``seed``.

    Explicit polynomials (monic, lowest coefficient first; coefficients of
    ``ext_poly`` and ``generator`` are F_q codes) are checked and used as given.
    Without ``generator`` the first primitive element in code order is taken.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1 or r < 1:
        raise ValueError("k and r must be positive")
    q = p**k
    n = q**r
    if n > max_order:
        raise ValueError(f"field of order {n} exceeds the ceiling {max_order}")
    prime_ring = _Ring(p, [0, 1])
    if base_poly is None:
        base_poly = [0, 1] if k == 1 else find_irreducible(prime_ring, k, seed)
    base_poly = [c % p for c in base_poly]
    if len(base_poly) != k + 1 or not is_irreducible(base_poly, prime_ring):
        raise ValueError(f"base polynomial {base_poly} is not irreducible of degree {k} over F_{p}")
    ring = _Ring(p, base_poly)
    if ext_poly is None:
        ext_poly = [0, 1] if r == 1 else find_irreducible(ring, r, seed)
    ext_poly = [c % q for c in ext_poly]
    if len(ext_poly) != r + 1 or not is_irreducible(ext_poly, ring):
        raise ValueError(f"extension polynomial {ext_poly} is not irreducible of degree {r} over F_{q}")
    fact = factorize(n - 1)
    if generator is not None:
        gen = (list(generator) + [0] * r)[:r]
        if not _is_generator(gen, ring, ext_poly, fact):
            raise ValueError(f"{generator} is not a primitive element")
    else:
        gen = None
        for code in range(1, n):
            cand = [(code // q**i) % q for i in range(r)]
            if _is_generator(cand, ring, ext_poly, fact):
                gen = cand
                break
        assert gen is not None
    exp = _exp_table(gen, ring, ext_poly, n - 1)
    dlog = np.full(n, -1, dtype=np.int64)
    dlog[exp] = np.arange(n - 1)
    if dlog[0] != -1 or np.count_nonzero(dlog >= 0) != n - 1:
        raise ArithmeticError("exp table is not a bijection onto the nonzero elements")
    gen_code = sum(c * q**i for i, c in enumerate(gen))
    return FieldCtx(p, k, r, list(base_poly), list(ext_poly), gen_code, exp, dlog, fact, ring)


# the three presentations used for the explicit exceptions
def field_9() -> FieldCtx:
    return build_field(3, 1, 2, ext_poly=[-2, 0, 1], generator=[1, 1])


def field_25() -> FieldCtx:
    return build_field(5, 1, 2, ext_poly=[-2, 0, 1], generator=[2, 1])


def field_27() -> FieldCtx:
    return build_field(3, 1, 3, ext_poly=[2, 2, 0, 1], generator=[2, 2])


def _subset_array(ctx: FieldCtx, subset) -> np.ndarray:
    arr = np.unique(np.asarray(list(subset) if not isinstance(subset, np.ndarray) else subset, dtype=np.int64))
    if len(arr) and (arr[0] < 0 or arr[-1] >= ctx.order):
        raise ValueError("subset contains codes outside the field")
    return arr


def _check_divisor(ctx: FieldCtx, e: int) -> None:
    if e < 1 or ctx.group_order % e:
        raise ValueError(f"e={e} does not divide q^r - 1 = {ctx.group_order}")


def is_e_free(ctx: FieldCtx, elem: int, e: int) -> bool:
    if elem == 0:
        raise ValueError("0 is never e-free")
    _check_divisor(ctx, e)
    t = int(ctx.dlog[elem])
    return all(t % ell for ell in factorize(e).primes)


def count_e_free(ctx: FieldCtx, subset, e: int) -> int:
    _check_divisor(ctx, e)
    return sum(1 for a in _subset_array(ctx, subset) if a != 0 and is_e_free(ctx, int(a), e))


def char_sum(ctx: FieldCtx, subset, character: Character | int) -> complex:
    """sum of chi over the subset, chi(0) = 0, summed with fsum per component."""
    j = character.j if isinstance(character, Character) else int(character)
    arr = _subset_array(ctx, subset)
    arr = arr[arr != 0]
    angles = 2 * math.pi * ((j * ctx.dlog[arr]) % ctx.group_order) / ctx.group_order
    return complex(math.fsum(np.cos(angles)), math.fsum(np.sin(angles)))


def all_char_sums(ctx: FieldCtx, subset) -> np.ndarray:
    """S(A, chi_j) for every j at once, by FFT of the log-domain indicator."""
    arr = _subset_array(ctx, subset)
    arr = arr[arr != 0]
    ind = np.zeros(ctx.group_order)
    ind[ctx.dlog[arr]] = 1.0
    # S_j = sum_t ind[t] exp(2 pi i j t / N) = N * ifft(ind)[j]
    return np.fft.ifft(ind) * ctx.group_order


def true_K(ctx: FieldCtx, subset) -> float:
    """max over nontrivial characters of |S(A, chi)|."""
    if ctx.group_order == 1:
        return 0.0
    sums = all_char_sums(ctx, subset)
    return float(np.max(np.abs(sums[1:])))


def characters(ctx: FieldCtx, d: int) -> list[Character]:
    """The phi(d) characters of exact order d."""
    N = ctx.group_order
    if N % d:
        raise ValueError(f"no characters of order {d}")
    step = N // d
    return [Character(step * u, N) for u in range(d) if math.gcd(u, d) == 1]


def vinogradov_count(ctx: FieldCtx, subset, e: int, *, mu_flip: bool = False) -> float:
    """rho(e) * (|A| + sum over squarefree 1 < d | e of mu(d)/phi(d) * sum_{ord chi = d} S(A, chi)).

    ``mu_flip`` negates every Moebius value; it exists only so the self-check
    can prove it notices a broken identity.
    """
    _check_divisor(ctx, e)
    arr = _subset_array(ctx, subset)
    if len(arr) and arr[0] == 0:
        raise ValueError("the indicator identity is stated for subsets of the nonzero elements")
    rad = factorize(e).radical()
    total = [float(len(arr))]
    for d, mu in rad.squarefree_divisors():
        if d == 1:
            continue
        phi_d = Factorization.from_primes(factorize(d).primes).phi()
        s = sum((char_sum(ctx, arr, chi) for chi in characters(ctx, d)), 0j)
        total.append((-mu if mu_flip else mu) * s.real / phi_d)
    return float(rad.rho()) * math.fsum(total)


def unit_value(ctx: FieldCtx, character: Character, elem: int) -> complex:
    if elem == 0:
        return 0j
    t = int(ctx.dlog[elem])
    return cmath.exp(2j * math.pi * ((character.j * t) % ctx.group_order) / ctx.group_order)

"""Explicit prime-sum and prime-counting bounds.

The Mertens-type bound is

    |sum_{p<=n} 1/p - log log n - M| <= 4/log(n+1) + 2/(n log n),   n >= 2,

with the Meissel-Mertens constant bracketed by 0.26149 < M < 0.26150.  The
prime-counting bounds are the Rosser-Schoenfeld pair

    pi(x) < x/log x * (1 + 3/(2 log x)),   x > 1,
    pi(x) > x/log x * (1 + 1/(2 log x)),   x >= 59.
"""

from __future__ import annotations

import math

MEISSEL_MERTENS_LO = 0.26149
MEISSEL_MERTENS_HI = 0.26150


def _mertens_error(n: float) -> float:
    return 4.0 / math.log(n + 1.0) + 2.0 / (n * math.log(n))


def mertens_upper(n: float) -> float:
    """Upper bound for sum_{p<=n} 1/p."""
    if n < 2:
        raise ValueError("mertens bound needs n >= 2")
    return math.log(math.log(n)) + MEISSEL_MERTENS_HI + _mertens_error(n)


def mertens_lower(n: float) -> float:
    """Lower bound for sum_{p<=n} 1/p."""
    if n < 2:
        raise ValueError("mertens bound needs n >= 2")
    return math.log(math.log(n)) + MEISSEL_MERTENS_LO - _mertens_error(n)


def pi_lower(x: float) -> float:
    if x < 59:
        raise ValueError("lower prime-counting bound holds only for x >= 59")
    lx = math.log(x)
    return x / lx * (1.0 + 1.0 / (2.0 * lx))


def pi_upper(x: float) -> float:
    if x <= 1:
        raise ValueError("upper prime-counting bound needs x > 1")
    lx = math.log(x)
    return x / lx * (1.0 + 3.0 / (2.0 * lx))


def largest_n_below(target: float, lo: float = 59.0, hi: float = 1e40, tol: float = 1e-12) -> float:
    """Largest n (to relative ``tol``) with mertens_upper(n) < target.

    mertens_upper is increasing for n >= 59, so bisection in log n is safe.
    Returns ``lo`` unchanged if even ``lo`` fails; callers must check.
    """
    if mertens_upper(lo) >= target:
        return lo
    if mertens_upper(hi) < target:
        return hi
    a, b = math.log(lo), math.log(hi)
    while b - a > tol * max(1.0, b):
        mid = 0.5 * (a + b)
        if mertens_upper(math.exp(mid)) < target:
            a = mid
        else:
            b = mid
    return math.exp(a)

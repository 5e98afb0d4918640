"""Integer arithmetic, factorization, prime tables and explicit prime bounds."""

from .analytic import (
    MEISSEL_MERTENS_HI,
    MEISSEL_MERTENS_LO,
    largest_n_below,
    mertens_lower,
    mertens_upper,
    pi_lower,
    pi_upper,
)
from .factor import (
    Factorization,
    FactorizationIncomplete,
    aurifeuillean_split,
    cyclotomic_value,
    factor_power_minus_one,
    factorize,
    mobius,
    power_minus_one_pieces,
    prime_power_base,
)
from .primality import is_prime
from .primes import (
    PrimeTable,
    SieveBudgetError,
    default_table,
    log_primorial,
    nth_prime,
    prime_pi,
    prime_recip_sum,
    prefix_error,
    prime_recip_sum_upto,
    primes_up_to,
)

__all__ = [
    "Factorization",
    "FactorizationIncomplete",
    "MEISSEL_MERTENS_HI",
    "MEISSEL_MERTENS_LO",
    "PrimeTable",
    "SieveBudgetError",
    "aurifeuillean_split",
    "cyclotomic_value",
    "default_table",
    "factor_power_minus_one",
    "factorize",
    "is_prime",
    "largest_n_below",
    "log_primorial",
    "mertens_lower",
    "mertens_upper",
    "mobius",
    "nth_prime",
    "pi_lower",
    "pi_upper",
    "power_minus_one_pieces",
    "prime_power_base",
    "prefix_error",
    "prime_pi",
    "prime_recip_sum",
    "prime_recip_sum_upto",
    "primes_up_to",
]

"""Thin wrappers over sympy's integer routines used across the package."""

from sympy import isprime as _isprime
from sympy import n_order as _n_order
from sympy import primerange as _primerange
from sympy import totient as _totient


def is_prime(n: int) -> bool:
    return bool(_isprime(n))


def totient(n: int) -> int:
    return int(_totient(n))


def multiplicative_order(p: int, d: int) -> int:
    """Order of p in (Z/dZ)*; 1 when d == 1."""
    if d == 1:
        return 1
    return int(_n_order(p, d))


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes in the closed range [lo, hi]."""
    return [int(q) for q in _primerange(lo, hi + 1)]

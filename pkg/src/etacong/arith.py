"""Small integer helpers shared across modules."""

from __future__ import annotations

from fractions import Fraction

from sympy import isprime, primerange

__all__ = ["isprime", "primes_between", "require_prime", "frac_mod"]


def primes_between(lo, hi):
    """Primes ``lo <= p <= hi`` in increasing order."""
    return list(primerange(lo, hi + 1))


def require_prime(p, what="p"):
    if not isprime(p):
        raise ValueError(f"{what}={p} is not prime")
    return p


def frac_mod(q, p):
    """Reduce a rational with denominator prime to ``p`` into ``[0, p)``."""
    q = Fraction(q)
    if q.denominator % p == 0:
        raise ZeroDivisionError(f"denominator {q.denominator} is divisible by {p}")
    return q.numerator * pow(q.denominator, -1, p) % p

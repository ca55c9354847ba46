"""Hecke operators T_p on q-expansions and mod-ell annihilation checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from .arith import isprime, require_prime
from .qseries import ModSeries, TruncatedSeries


@dataclass(frozen=True)
class HeckeParams:
    """Parameters of ``T_{p,k,chi}``.

    ``chi_p`` is the caller-supplied value chi(p).  The Nebentypus of the eta
    powers is never needed mod p for weight >= 2, so it defaults to 0.
    """

    p: int
    k: int
    chi_p: int = 0

    def __post_init__(self):
        require_prime(self.p)
        if self.k < 1:
            raise ValueError("weight must be positive")


def apply_tp(f, params):
    """Coefficient ``n`` of ``f | T_p`` is ``A(pn) + chi(p) p^(k-1) A(n/p)``.

    ``A(n/p)`` is taken as 0 when ``p`` does not divide ``n``.  The image is
    known to precision ``floor(precision(f) / p)``.
    """
    p, k = params.p, params.k
    if f.precision < p:
        raise ValueError(f"precision {f.precision} < p={p}: T_p image would be empty")
    n_out = f.precision // p
    twist = params.chi_p * p ** (k - 1)
    coeffs = []
    for n in range(n_out):
        c = f[p * n]
        if twist and n % p == 0:
            c += twist * f[n // p]
        coeffs.append(c)
    if isinstance(f, ModSeries):
        return ModSeries(coeffs, f.modulus)
    return TruncatedSeries(coeffs)


class Annihilation(NamedTuple):
    annihilated: bool
    witness: int | None  # smallest n with A(ell n) != 0 mod ell
    checked: int  # number of indices n examined


def annihilated_mod(f, ell, k):
    """Decide ``f | T_ell == 0 (mod ell)`` from the coefficients of ``f``.

    For ``k >= 2`` the ``chi(ell) ell^(k-1)`` term vanishes mod ell, so this is
    ``A(ell n) == 0 (mod ell)`` for every ``ell n < precision(f)``.  All
    indices are checked.
    """
    require_prime(ell, "ell")
    if k < 2:
        raise ValueError("mod-ell shortcut needs weight >= 2")
    n_max = -(-f.precision // ell)
    for n in range(n_max):
        if f[ell * n] % ell:
            return Annihilation(False, n, n + 1)
    return Annihilation(True, None, n_max)


class SerreCase(str, enum.Enum):
    ANNIHILATED = "annihilated"
    NOT_ANNIHILATED = "not_annihilated"
    OUT_OF_FAMILY = "out_of_family"


# r -> (modulus, inert residues, split residues)
_SERRE_CLASSES = {
    4: (3, {2}, {1}),
    8: (3, {2}, {1}),
    14: (3, {2}, {1}),
    6: (4, {3}, {1}),
    10: (4, {3}, {1}),
    26: (12, {11}, {1, 5, 7}),
}


def serre_case(r, ell):
    """Predicted behaviour of ``F_{r,delta} | T_ell`` mod ell, by residue of ell."""
    if not isprime(ell):
        raise ValueError(f"ell={ell} is not prime")
    if r not in _SERRE_CLASSES or ell in (2, 3):
        return SerreCase.OUT_OF_FAMILY
    m, inert, split = _SERRE_CLASSES[r]
    if ell % m in inert:
        return SerreCase.ANNIHILATED
    if ell % m in split:
        return SerreCase.NOT_ANNIHILATED
    return SerreCase.OUT_OF_FAMILY

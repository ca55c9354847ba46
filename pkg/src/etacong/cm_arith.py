"""Prime coefficients of the CM eta powers from quadratic representations.

A split prime ``p`` is written as ``a^2 + b^2`` (``p = 1 mod 4``) and/or
``x^2 + 3y^2`` (``p = 1 mod 3``).  The coefficient ``A_r(p)`` of
``eta(delta z)^r`` is then a closed-form expression in those integers.

The closed forms are only determined up to the choice of unit variant of the
representation (signs, and the a/b swap).  Rather than trusting a hand-written
sign convention, each formula is paired with a *normalization rule* that is
fitted against the eta expansion at the 10 smallest primes where the formula
applies, then checked against every prime up to ``FIT_BOUND``.  Candidate
rules are tried from simplest to most specific:

1. the stated conventions ``x = 1 (mod 3), y > 0`` and ``a odd, b > 0``;
2. a single congruence ``u = c (mod m)`` on the first coordinate, optionally
   with ``v > 0``;
3. a table of admissible residue pairs ``(u mod 12, v mod 12)`` read off the
   training primes (single-field formulas only).

All arithmetic is exact: ``u + v*sqrt(-d)`` is a pair of integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt
from typing import Callable

from .arith import frac_mod, isprime, primes_between, require_prime
from .etaforms import FAMILY_R, EtaPowerSpec, eta_power_series, eta_power_series_mod, support_residue

FIT_BOUND = 500
TRAINING_SIZE = 10

GAUSS = "gauss"
EISEN = "eisen"


class InertPrime(ValueError):
    """The prime does not split in the field(s) a formula needs."""


class NormalizationError(RuntimeError):
    """No candidate rule reproduces the eta expansion."""


class InternalConsistencyError(ArithmeticError):
    """A closed form produced a non-integral or otherwise impossible value."""


class InsufficientPrecision(ValueError):
    pass


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class GaussRep:
    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.a * self.a + self.b * self.b != self.p:
            raise ValueError(f"{self.a}^2 + {self.b}^2 != {self.p}")

    @property
    def pair(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class EisenRep:
    p: int
    x: int
    y: int

    def __post_init__(self):
        if self.x * self.x + 3 * self.y * self.y != self.p:
            raise ValueError(f"{self.x}^2 + 3*{self.y}^2 != {self.p}")

    @property
    def pair(self):
        return (self.x, self.y)


def _square_root(n):
    if n < 0:
        return None
    s = isqrt(n)
    return s if s * s == n else None


def rep_two_squares(p):
    """All eight unit variants ``(+-a, +-b)``, ``(+-b, +-a)`` of ``p = a^2 + b^2``.

    The first entry is the base representation with ``a`` odd and both
    coordinates positive.
    """
    require_prime(p)
    if p % 4 != 1:
        raise InertPrime(f"{p} is not 1 mod 4")
    found = []
    for b in range(1, isqrt(p) + 1):
        a = _square_root(p - b * b)
        if a:
            found.append((a, b))
    # Fermat: exactly {(a, b), (b, a)} with a, b > 0
    if len(found) != 2 or found[0] != found[1][::-1]:
        raise InternalConsistencyError(f"{p} has representations {found}")
    a, b = found[0] if found[0][0] % 2 else found[1]
    variants = [(sa * a, sb * b) for sa in (1, -1) for sb in (1, -1)]
    variants += [(v, u) for u, v in variants]
    return tuple(GaussRep(p, u, v) for u, v in variants)


def rep_eisenstein(p):
    """All four sign variants ``(+-x, +-y)`` of ``p = x^2 + 3y^2``, base first."""
    require_prime(p)
    if p % 3 != 1:
        raise InertPrime(f"{p} is not 1 mod 3")
    found = []
    for y in range(1, isqrt(p // 3) + 1):
        x = _square_root(p - 3 * y * y)
        if x:
            found.append((x, y))
    if len(found) != 1:
        raise InternalConsistencyError(f"{p} has representations {found}")
    x, y = found[0]
    return tuple(EisenRep(p, sx * x, sy * y) for sx in (1, -1) for sy in (1, -1))


# ---------------------------------------------------------------------------
# exact arithmetic in Z[sqrt(-d)]


def qpow(u, v, d, k):
    """``(u + v sqrt(-d))**k`` as an integer pair."""
    ru, rv = 1, 0
    bu, bv = u, v
    while k:
        if k & 1:
            ru, rv = ru * bu - d * rv * bv, ru * bv + rv * bu
        k >>= 1
        if k:
            bu, bv = bu * bu - d * bv * bv, 2 * bu * bv
    return ru, rv


def _cmul(z, w):
    return (z[0] * w[0] - z[1] * w[1], z[0] * w[1] + z[1] * w[0])


def _cadd(z, w):
    return (z[0] + w[0], z[1] + w[1])


def _ipow(e):
    return ((1, 0), (0, 1), (-1, 0), (0, -1))[e % 4]


def _neg_one_pow(e):
    return -1 if e % 2 else 1


def _real(z, what):
    if z[1] != 0:
        raise InternalConsistencyError(f"{what} has nonzero imaginary part {z[1]}")
    return z[0]


# ---------------------------------------------------------------------------
# closed forms; each takes (gauss_pair, eisen_pair), missing field = None


def _f4(g, e):
    x, _ = e
    return Fraction(2 * x)


def _f8(g, e):
    x, y = e
    return Fraction(2 * x * (x * x - 9 * y * y))


def _eisen_diff_char(x, y):
    return _neg_one_pow((x - y - 1) // 2) - _neg_one_pow((x + y - 1) // 2)


def _eisen_sum_char(x, y):
    return _neg_one_pow((x - y - 1) // 2) + _neg_one_pow((x + y - 1) // 2)


def _f14(g, e):
    x, y = e
    # ((x + y sqrt-3)^6 - (x - y sqrt-3)^6) / (720 sqrt-3) = 2v / 720
    _, v = qpow(x, y, 3, 6)
    return Fraction(_eisen_diff_char(x, y) * 2 * v, 720)


def _f6(g, e):
    a, b = g
    return Fraction(2 * (a * a - b * b))


def _f10(g, e):
    a, b = g
    chi = (_ipow(b)[0] - _ipow(-b)[0], _ipow(b)[1] - _ipow(-b)[1])
    _, v4 = qpow(a, b, 1, 4)
    diff = (0, 2 * v4)  # (a+bi)^4 - (a-bi)^4
    return Fraction(_neg_one_pow(a) * _real(_cmul(chi, diff), "A_10 numerator"), 96)


A26_DENOMINATOR = 32617728


def _a26_eisen_part(e):
    if e is None:
        return 0
    x, y = e
    u, _ = qpow(x, y, 3, 12)
    # phi'_+ + phi'_- on (x + y sqrt-3)^12 and on its conjugate: sqrt(-3) parts cancel
    return 2 * _eisen_sum_char(x, y) * u


def _a26_gauss_part(g, character):
    if g is None:
        return 0
    a, b = g
    G = qpow(a, b, 1, 12)
    Gbar = (G[0], -G[1])
    total = (0, 0)
    for c, z in character(a, b, G, Gbar):
        total = _cadd(total, _cmul(c, z))
    return _real(total, "A_26 Gaussian part")


def _stated_gauss_character(a, b, G, Gbar):
    # phi''_+ and phi''_-: (-1)^{3a} (+-i)^{3b}, with (-i)^k = i^{-k}
    s = _neg_one_pow(3 * a)
    up = (s * _ipow(3 * b)[0], s * _ipow(3 * b)[1])
    down = (s * _ipow(-3 * b)[0], s * _ipow(-3 * b)[1])
    return [(up, G), (down, Gbar), (down, G), (up, Gbar)]


def _corrected_gauss_character(a, b, G, Gbar):
    # +1 when 3 | b, -1 when 3 | a, with b the even coordinate; 0 otherwise
    if b % 2:
        c = 0
    else:
        c = (b % 3 == 0) - (a % 3 == 0)
    return [((c, 0), G), ((c, 0), Gbar), ((c, 0), G), ((c, 0), Gbar)]


def _f26(character):
    def evaluate(g, e):
        bracket = _a26_eisen_part(e) - _a26_gauss_part(g, character)
        return Fraction(bracket, A26_DENOMINATOR)

    return evaluate


# mod-p reductions, evaluated at the same normalized representation


def _r4(g, e):
    return Fraction(2 * e[0])


def _r8(g, e):
    x, y = e
    return Fraction(-24 * x * y * y)


def _r14(g, e):
    x, y = e
    # the reduction of (x+y sqrt-3)^6 - (x-y sqrt-3)^6 carries a minus sign
    return Fraction(-_eisen_diff_char(x, y) * 4 * x**3 * y**3, 15)


def _r6(g, e):
    return Fraction(-4 * g[1] ** 2)


def _r10(g, e):
    a, b = g
    chi = (_ipow(b)[0] - _ipow(-b)[0], _ipow(b)[1] - _ipow(-b)[1])
    z = _cmul((0, 1), chi)
    return Fraction(_neg_one_pow(a) * _real(z, "A_10 reduction") * (a**3 * b - a * b**3), 12)


def _r26(g, e):
    total = 0
    if e is not None:
        x, y = e
        total += _eisen_sum_char(x, y) * 2 * (-55296 * x**6 * y**6)
    if g is not None:
        a, b = g
        c = 0 if b % 2 else 2 * ((b % 3 == 0) - (a % 3 == 0))
        total -= c * 2 * (-2048 * a**6 * b**6)
    return Fraction(total, A26_DENOMINATOR)


@dataclass(frozen=True)
class CoeffFormula:
    r: int
    fields: tuple
    evaluate: Callable
    reduced: Callable
    domain: Callable  # primes where the closed form is stated
    label: str = "stated"


def _split_eisen(p):
    return p % 3 == 1


def _split_gauss(p):
    return p % 4 == 1


FORMULAS = {
    4: [CoeffFormula(4, (EISEN,), _f4, _r4, _split_eisen)],
    8: [CoeffFormula(8, (EISEN,), _f8, _r8, _split_eisen)],
    14: [CoeffFormula(14, (EISEN,), _f14, _r14, _split_eisen)],
    6: [CoeffFormula(6, (GAUSS,), _f6, _r6, _split_gauss)],
    # stated for the support class only; A_10(p) = 0 for p = 1 mod 12
    10: [CoeffFormula(10, (GAUSS,), _f10, _r10, lambda p: p % 12 == 5)],
    26: [
        CoeffFormula(26, (GAUSS, EISEN), _f26(_stated_gauss_character), _r26,
                     lambda p: p % 12 in (1, 5, 7), "stated"),
        CoeffFormula(26, (GAUSS, EISEN), _f26(_corrected_gauss_character), _r26,
                     lambda p: p % 12 in (1, 5, 7), "corrected Gaussian character"),
    ],
}


def _split_fields(r, p):
    """Fields in which ``p`` splits, restricted to those the formula uses."""
    fields = FORMULAS[r][0].fields
    out = []
    if GAUSS in fields and _split_gauss(p):
        out.append(GAUSS)
    if EISEN in fields and _split_eisen(p):
        out.append(EISEN)
    return out


def _variants(fieldname, p):
    if fieldname == GAUSS:
        return [g.pair for g in rep_two_squares(p)]
    return [e.pair for e in rep_eisenstein(p)]


# ---------------------------------------------------------------------------
# normalization rules


@dataclass(frozen=True)
class NormalizationRule:
    description: str
    test: Callable = field(compare=False)

    def __call__(self, u, v):
        return self.test(u, v)


def _stated_rule(fieldname):
    if fieldname == EISEN:
        return NormalizationRule("x = 1 (mod 3), y > 0", lambda u, v: u % 3 == 1 and v > 0)
    return NormalizationRule("a = 1 (mod 2), b > 0", lambda u, v: u % 2 == 1 and v > 0)


def _simple_rules(fieldname):
    u_name, v_name = ("a", "b") if fieldname == GAUSS else ("x", "y")
    rules = []
    for m in (2, 3, 4, 6):
        for c in range(m):
            rules.append(NormalizationRule(
                f"{u_name} = {c} (mod {m})",
                lambda u, v, m=m, c=c: u % m == c))
            rules.append(NormalizationRule(
                f"{u_name} = {c} (mod {m}), {v_name} > 0",
                lambda u, v, m=m, c=c: u % m == c and v > 0))
    return rules


def _table_rule(fieldname, classes):
    u_name, v_name = ("a", "b") if fieldname == GAUSS else ("x", "y")
    classes = frozenset(classes)
    listing = ", ".join(f"({u}, {v})" for u, v in sorted(classes))
    return NormalizationRule(
        f"({u_name} mod 12, {v_name} mod 12) in {{{listing}}}",
        lambda u, v: (u % 12, v % 12) in classes)


@dataclass(frozen=True)
class ResolvedFormula:
    """A closed form together with its fitted normalization."""

    formula: CoeffFormula
    rules: tuple  # one NormalizationRule per entry of formula.fields
    training: tuple
    validated_to: int

    @property
    def r(self):
        return self.formula.r

    def describe(self):
        parts = [f"{f}: {rule.description}" for f, rule in zip(self.formula.fields, self.rules)]
        return f"A_{self.r} [{self.formula.label}] " + "; ".join(parts)

    def normalized(self, p):
        """The selected ``(gauss_pair, eisen_pair)`` for ``p`` (None if inert)."""
        return _select(self.formula, self.rules, p)[1]

    def value(self, p):
        return _select(self.formula, self.rules, p)[0]

    def reduced_value(self, p):
        g, e = self.normalized(p)
        return self.formula.reduced(g, e)


def _select(formula, rules, p):
    """Evaluate ``formula`` on every rule-selected variant; the value must agree."""
    choices = []
    for fieldname, rule in zip(formula.fields, rules):
        if (fieldname == GAUSS and _split_gauss(p)) or (fieldname == EISEN and _split_eisen(p)):
            chosen = [w for w in _variants(fieldname, p) if rule(*w)]
            if not chosen:
                return None, None
            choices.append(chosen)
        else:
            choices.append([None])
    values = set()
    first = None
    for combo in product(*choices):
        g = combo[formula.fields.index(GAUSS)] if GAUSS in formula.fields else None
        e = combo[formula.fields.index(EISEN)] if EISEN in formula.fields else None
        values.add(formula.evaluate(g, e))
        if first is None:
            first = (g, e)
    if len(values) != 1:
        return None, None
    return values.pop(), first


@lru_cache(maxsize=None)
def _oracle(r, bound):
    return eta_power_series(EtaPowerSpec.for_r(r), bound + 1)


def _matches(formula, rules, primes, oracle):
    for p in primes:
        val, _ = _select(formula, rules, p)
        if val is None or val != oracle[p]:
            return False
    return True


def _fit_table(formula, training, oracle):
    (fieldname,) = formula.fields
    classes = set()
    for p in training:
        for w in _variants(fieldname, p):
            g, e = (w, None) if fieldname == GAUSS else (None, w)
            if formula.evaluate(g, e) == oracle[p]:
                classes.add((w[0] % 12, w[1] % 12))
    if not classes:
        return None
    return _table_rule(fieldname, classes)


def _candidate_rules(formula):
    per_field = [[_stated_rule(f)] + _simple_rules(f) for f in formula.fields]
    return product(*per_field)


@lru_cache(maxsize=None)
def resolve_formula(r, bound=FIT_BOUND):
    """Fit the normalization for ``A_r`` and validate it up to ``bound``.

    Candidate formulas are tried in order (for ``r = 26`` the stated
    character first, then the corrected one).  Raises
    :class:`NormalizationError` if a rule fits the training primes but
    disagrees later, or if nothing fits.
    """
    if r not in FORMULAS:
        raise ValueError(f"no closed form for r={r}")
    oracle = _oracle(r, bound)
    for formula in FORMULAS[r]:
        primes = [p for p in primes_between(5, bound) if formula.domain(p)]
        training = primes[:TRAINING_SIZE]
        rules = None
        for cand in _candidate_rules(formula):
            if _matches(formula, cand, training, oracle):
                rules = cand
                break
        if rules is None and len(formula.fields) == 1:
            table = _fit_table(formula, training, oracle)
            if table is not None and _matches(formula, (table,), training, oracle):
                rules = (table,)
        if rules is None:
            continue
        for p in primes:
            val, _ = _select(formula, rules, p)
            if val != oracle[p]:
                raise NormalizationError(
                    f"A_{r}: rule fitted on {training} fails at p={p} ({val} != {oracle[p]})")
        return ResolvedFormula(formula, rules, tuple(training), bound)
    raise NormalizationError(f"no normalization reproduces A_{r}(p)")


# ---------------------------------------------------------------------------
# public coefficient API


def _check_split(r, p):
    if r not in FAMILY_R:
        raise ValueError(f"r={r} is not in the CM family {FAMILY_R}")
    require_prime(p)
    if p < 5:
        raise ValueError("primes 2 and 3 are excluded")
    if not _split_fields(r, p):
        raise InertPrime(f"p={p} is inert for r={r}; use serre_case instead")


def cm_prime_coeff(r, p):
    """Exact ``A_r(p)`` from the closed form at the normalized representation."""
    _check_split(r, p)
    resolved = resolve_formula(r)
    if not resolved.formula.domain(p):
        # off the support class mod delta, so the coefficient vanishes identically
        return 0
    val = resolved.value(p)
    if val is None:
        raise NormalizationError(f"normalization selects no representation for p={p}")
    if val.denominator != 1:
        raise InternalConsistencyError(f"A_{r}({p}) evaluated to non-integer {val}")
    return int(val)


def cm_residue(r, p):
    """``A_r(p) mod p`` from the reduced closed form."""
    _check_split(r, p)
    resolved = resolve_formula(r)
    if not resolved.formula.domain(p):
        return 0
    red = resolved.reduced_value(p)
    if red.denominator % p == 0:
        # p divides a constant of the closed form (only p = 13 for r = 26)
        return cm_prime_coeff(r, p) % p
    return frac_mod(red, p)


def _required_index(r, p):
    spec = EtaPowerSpec.for_r(r)
    s = support_residue(spec)
    m = s * pow(p, -1, spec.delta) % spec.delta
    if m == 0:
        m = spec.delta
    return m * p


def nonvanishing_certificate(r, p, precision):
    """Smallest ``m >= 1`` with ``A_r(m p) != 0 (mod p)``.

    Returns None when the scan up to ``precision`` finds no witness; raises
    :class:`InsufficientPrecision` when ``precision`` does not even reach the
    first index in the support class.
    """
    _check_split(r, p)
    needed = _required_index(r, p)
    if precision <= needed:
        raise InsufficientPrecision(
            f"A_{r}: precision {precision} does not reach index {needed} = {needed // p}*{p}")
    series = eta_power_series_mod(EtaPowerSpec.for_r(r), precision, p)
    for m in range(1, (precision - 1) // p + 1):
        if series[m * p]:
            return m
    return None


def is_split(r, p):
    return isprime(p) and p >= 5 and bool(_split_fields(r, p))

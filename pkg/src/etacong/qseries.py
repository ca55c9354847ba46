"""Truncated q-series over exact integers and over Z/mZ.

Two carriers share one interface:

* :class:`TruncatedSeries` holds exact Python integers and is the reference
  backend.
* :class:`ModSeries` holds residues in ``[0, m)`` as a read-only ``int64``
  numpy array and is the fast backend used by the verification sweeps.

Every binary operation truncates to the smaller input precision.  Missing
coefficients are never padded with assumed zeros.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# precision caps (coefficient count); raise instead of silently computing huge tables
MAX_PRECISION_EXACT = 10_000
MAX_PRECISION_MOD = 100_000

# residues are stored in int64; products of two residues must fit
MAX_MODULUS = 2**31 - 1
_INT64_LIMIT = 2**63 - 1


class PrecisionError(ValueError):
    """Raised when a request exceeds the configured precision cap."""


def _check_precision(precision, cap):
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    if precision > cap:
        raise PrecisionError(f"precision {precision} exceeds cap {cap}")


class TruncatedSeries:
    """Exact integer q-expansion ``sum_{n < precision} c_n q^n``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if not coeffs:
            raise ValueError("a truncated series needs precision >= 1")
        self._coeffs = coeffs

    @classmethod
    def one(cls, precision):
        return cls((1,) + (0,) * (precision - 1))

    @classmethod
    def zero(cls, precision):
        return cls((0,) * precision)

    @classmethod
    def monomial(cls, exponent, precision, coeff=1):
        c = [0] * precision
        if exponent < precision:
            c[exponent] = coeff
        return cls(c)

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def precision(self):
        return len(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def __getitem__(self, n):
        return self._coeffs[n]

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self._coeffs[:8])
        more = ", ..." if self.precision > 8 else ""
        return f"TruncatedSeries([{head}{more}], precision={self.precision})"

    def truncate(self, precision):
        if precision > self.precision:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self._coeffs[:precision])

    def __add__(self, other):
        n = min(self.precision, other.precision)
        return TruncatedSeries(a + b for a, b in zip(self._coeffs[:n], other._coeffs[:n]))

    def __sub__(self, other):
        n = min(self.precision, other.precision)
        return TruncatedSeries(a - b for a, b in zip(self._coeffs[:n], other._coeffs[:n]))

    def __neg__(self):
        return TruncatedSeries(-a for a in self._coeffs)

    def scale(self, k):
        return TruncatedSeries(k * a for a in self._coeffs)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e):
        return power(self, e)


class ModSeries:
    """Residue-class q-expansion mod ``modulus``; values fully reduced."""

    __slots__ = ("_coeffs", "_modulus")

    def __init__(self, coeffs, modulus):
        modulus = int(modulus)
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {modulus}")
        if modulus > MAX_MODULUS:
            raise ValueError(f"modulus {modulus} is not word-size (max {MAX_MODULUS})")
        if isinstance(coeffs, np.ndarray) and coeffs.dtype == np.int64:
            arr = np.mod(coeffs, modulus)
        else:
            arr = np.array([int(c) % modulus for c in coeffs], dtype=np.int64)
        if arr.size == 0:
            raise ValueError("a truncated series needs precision >= 1")
        arr.setflags(write=False)
        self._coeffs = arr
        self._modulus = modulus

    @classmethod
    def one(cls, precision, modulus):
        c = np.zeros(precision, dtype=np.int64)
        c[0] = 1
        return cls(c, modulus)

    @property
    def coeffs(self):
        return self._coeffs

    @property
    def modulus(self):
        return self._modulus

    @property
    def precision(self):
        return int(self._coeffs.size)

    def __len__(self):
        return self.precision

    def __getitem__(self, n):
        v = self._coeffs[n]
        return int(v) if np.ndim(v) == 0 else v

    def __iter__(self):
        return (int(v) for v in self._coeffs)

    def tolist(self):
        return [int(v) for v in self._coeffs]

    def __eq__(self, other):
        if isinstance(other, ModSeries):
            return (self._modulus == other._modulus
                    and np.array_equal(self._coeffs, other._coeffs))
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        head = ", ".join(str(int(c)) for c in self._coeffs[:8])
        more = ", ..." if self.precision > 8 else ""
        return f"ModSeries([{head}{more}], modulus={self._modulus}, precision={self.precision})"

    def _same_ring(self, other):
        if self._modulus != other._modulus:
            raise ValueError(f"moduli differ: {self._modulus} vs {other._modulus}")
        return min(self.precision, other.precision)

    def truncate(self, precision):
        if precision > self.precision:
            raise ValueError("cannot extend a truncated series")
        return ModSeries(self._coeffs[:precision], self._modulus)

    def __add__(self, other):
        n = self._same_ring(other)
        return ModSeries(self._coeffs[:n] + other._coeffs[:n], self._modulus)

    def __sub__(self, other):
        n = self._same_ring(other)
        return ModSeries(self._coeffs[:n] - other._coeffs[:n], self._modulus)

    def __neg__(self):
        return ModSeries(-self._coeffs, self._modulus)

    def scale(self, k):
        return ModSeries(self._coeffs * (int(k) % self._modulus), self._modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e):
        return power(self, e)

    def is_zero(self):
        return not self._coeffs.any()


# ---------------------------------------------------------------------------
# kernels


def _mul_exact(f, g, n):
    out = [0] * n
    gs = g[:n]
    for i in range(n):
        a = f[i]
        if a:
            for j, b in enumerate(gs[: n - i], start=i):
                if b:
                    out[j] += a * b
    return out


def _safe_int64(m, terms):
    return (m - 1) ** 2 * terms <= _INT64_LIMIT


def _mul_mod(f, g, n, m):
    a, b = f[:n], g[:n]
    if _safe_int64(m, n):
        return np.convolve(a, b)[:n] % m
    # residues too large for int64 accumulation; fall back to exact objects
    out = np.convolve(a.astype(object), b.astype(object))[:n]
    return np.array([int(v) % m for v in out], dtype=np.int64)


def mul(f, g):
    """Cauchy product truncated to ``min(precision(f), precision(g))``."""
    if isinstance(f, TruncatedSeries) and isinstance(g, TruncatedSeries):
        n = min(f.precision, g.precision)
        return TruncatedSeries(_mul_exact(f.coeffs, g.coeffs, n))
    if isinstance(f, ModSeries) and isinstance(g, ModSeries):
        n = f._same_ring(g)
        return ModSeries(_mul_mod(f.coeffs, g.coeffs, n, f.modulus), f.modulus)
    raise TypeError("mul needs two series of the same backend")


def _one_like(f):
    if isinstance(f, ModSeries):
        return ModSeries.one(f.precision, f.modulus)
    return TruncatedSeries.one(f.precision)


def power(f, e):
    """``f**e`` for ``e >= 0`` by binary exponentiation."""
    e = int(e)
    if e < 0:
        raise ValueError("use invert() for negative exponents")
    result = _one_like(f)
    base = f
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def invert(f):
    """Multiplicative inverse of a series whose constant term is a unit.

    Exact series need constant term +1 or -1; modular series need a constant
    term coprime to the modulus.
    """
    n = f.precision
    if isinstance(f, TruncatedSeries):
        c0 = f[0]
        if c0 not in (1, -1):
            raise ValueError(f"constant term {c0} is not a unit in Z")
        fc = f.coeffs
        g = [0] * n
        g[0] = c0
        for k in range(1, n):
            s = 0
            for j in range(1, k + 1):
                a = fc[j]
                if a:
                    s += a * g[k - j]
            g[k] = -s * c0
        return TruncatedSeries(g)

    m = f.modulus
    c0 = int(f[0])
    try:
        u = pow(c0, -1, m)
    except ValueError:
        raise ValueError(f"constant term {c0} is not a unit mod {m}") from None
    fc = f.coeffs
    if not _safe_int64(m, n):
        g = _invert_mod_object(fc, n, m, u)
        return ModSeries(g, m)
    g = np.zeros(n, dtype=np.int64)
    g[0] = u
    for k in range(1, n):
        s = int(np.dot(fc[1 : k + 1], g[k - 1 :: -1]))
        g[k] = (-s * u) % m
    return ModSeries(g, m)


def _invert_mod_object(fc, n, m, u):
    f = [int(v) for v in fc]
    g = [0] * n
    g[0] = u
    for k in range(1, n):
        s = sum(f[j] * g[k - j] for j in range(1, k + 1))
        g[k] = (-s * u) % m
    return g


def dilate(f, delta, precision=None):
    """Substitute ``q -> q**delta``.

    The result is known up to exponent ``delta * precision(f)``; ``precision``
    caps it further.
    """
    delta = int(delta)
    if delta < 1:
        raise ValueError("delta must be positive")
    n = delta * f.precision
    if precision is not None:
        n = min(n, precision)
    if isinstance(f, ModSeries):
        out = np.zeros(n, dtype=np.int64)
        src = f.coeffs[: (n + delta - 1) // delta]
        out[::delta] = src
        return ModSeries(out, f.modulus)
    out = [0] * n
    for i, c in enumerate(f.coeffs[: (n + delta - 1) // delta]):
        out[i * delta] = c
    return TruncatedSeries(out)


def reduce_mod(f, m):
    """Coefficientwise reduction of an exact series into ``[0, m)``."""
    if m < 2:
        raise ValueError("modulus must be >= 2")
    return ModSeries(f.coeffs, m)


def lift(f):
    """Exact series with the canonical residues of ``f`` as coefficients."""
    return TruncatedSeries(f.tolist())


# ---------------------------------------------------------------------------
# Euler products


def pentagonal_terms(precision):
    """Sparse terms ``(exponent, sign)`` of prod (1 - q^n) below ``precision``.

    Euler's pentagonal theorem: the product equals
    ``sum_k (-1)^k q^{k(3k-1)/2}`` over all integers k.
    """
    terms = [(0, 1)]
    k = 1
    while True:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        if e1 >= precision:
            break
        terms.append((e1, sign))
        e2 = k * (3 * k + 1) // 2
        if e2 < precision:
            terms.append((e2, sign))
        k += 1
    return terms


def eta_series(precision):
    """prod_{n>=1} (1 - q^n) truncated, from the pentagonal-number expansion."""
    _check_precision(precision, MAX_PRECISION_MOD)
    c = [0] * precision
    for e, s in pentagonal_terms(precision):
        c[e] = s
    return TruncatedSeries(c)


def _euler_power_exact(r, n):
    # J.C.P. Miller recurrence for g = E**r with E sparse, E_0 = 1:
    #   k g_k = sum_{j=1..k} ((r + 1) j - k) E_j g_{k-j}
    # exact division by k, O(n^1.5) operations since E has O(sqrt n) terms.
    terms = pentagonal_terms(n)[1:]
    g = [0] * n
    g[0] = 1
    for k in range(1, n):
        s = 0
        for j, sign in terms:
            if j > k:
                break
            gk = g[k - j]
            if gk:
                s += sign * ((r + 1) * j - k) * gk
        q, rem = divmod(s, k)
        if rem:
            raise ArithmeticError(f"non-integral coefficient at q^{k}")
        g[k] = q
    return g


def euler_power(r, precision):
    """Coefficients ``a_r(n)`` of prod_{n>=1} (1 - q^n)^r, exact.

    The recurrence holds for every integer exponent, so negative ``r`` gives
    the t-color partition numbers ``a_{-t}(n)`` directly.
    """
    _check_precision(precision, MAX_PRECISION_EXACT)
    r = int(r)
    if r == 0:
        return TruncatedSeries.one(precision)
    return TruncatedSeries(_euler_power_exact(r, precision))


@lru_cache(maxsize=64)
def _pentagonal_arrays(precision):
    terms = pentagonal_terms(precision)[1:]
    exps = np.array([e for e, _ in terms], dtype=np.int64)
    signs = np.array([s for _, s in terms], dtype=np.int64)
    return exps, signs


def _times_eta_mod(c, m):
    n = c.size
    exps, signs = _pentagonal_arrays(n)
    out = c.copy()
    for e, s in zip(exps.tolist(), signs.tolist()):
        if s > 0:
            out[e:] += c[: n - e]
        else:
            out[e:] -= c[: n - e]
    return out % m


def euler_power_mod(r, precision, m):
    """``a_r(n) mod m`` computed natively in the modular backend.

    Positive powers are built by ``r`` sparse multiplications by the
    pentagonal series; negative powers invert the positive one.
    """
    _check_precision(precision, MAX_PRECISION_MOD)
    r = int(r)
    if r < 0:
        return invert(euler_power_mod(-r, precision, m))
    c = np.zeros(precision, dtype=np.int64)
    c[0] = 1
    # each sparse pass adds at most len(exps) terms of size < m before reducing
    if (len(_pentagonal_arrays(precision)[0]) + 1) * m > _INT64_LIMIT:
        raise ValueError("modulus too large for the sparse kernel")
    for _ in range(r):
        c = _times_eta_mod(c, m)
    return ModSeries(c, m)

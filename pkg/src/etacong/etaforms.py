"""Named generating functions: t-color partitions, eta powers and F_{r,delta}."""

from __future__ import annotations

from dataclasses import dataclass

from .qseries import (
    ModSeries,
    TruncatedSeries,
    dilate,
    euler_power,
    euler_power_mod,
)

# (r, delta) pairs for which eta^r(delta z) is one of the CM forms used here
ADMISSIBLE_PAIRS = {
    4: 6,
    8: 3,
    14: 12,
    6: 4,
    10: 12,
    26: 12,
    2: 12,
}

# r values with a congruence family (r = 2 is constructible only)
FAMILY_R = (4, 6, 8, 10, 14, 26)


class InadmissibleSpec(ValueError):
    pass


@dataclass(frozen=True)
class EtaPowerSpec:
    """The pair (r, delta) identifying ``eta(delta z)**r``."""

    r: int
    delta: int

    def __post_init__(self):
        if ADMISSIBLE_PAIRS.get(self.r) != self.delta:
            raise InadmissibleSpec(f"(r={self.r}, delta={self.delta}) is not an admissible pair")

    @classmethod
    def for_r(cls, r):
        if r not in ADMISSIBLE_PAIRS:
            raise InadmissibleSpec(f"r={r} has no admissible delta")
        return cls(r, ADMISSIBLE_PAIRS[r])

    @property
    def weight(self):
        return self.r // 2

    @property
    def level(self):
        return self.delta**2

    @property
    def offset(self):
        """Leading exponent ``delta * r / 24``."""
        return self.delta * self.r // 24


@dataclass(frozen=True)
class ColorCount:
    """A color count ``t`` with an optional decomposition ``t = ell*s - r``."""

    t: int
    ell: int | None = None
    s: int | None = None
    r: int | None = None

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if self.ell is not None and self.ell * self.s - self.r != self.t:
            raise ValueError(f"{self.ell}*{self.s} - {self.r} != {self.t}")


def pcolor_series(t, precision):
    """Exact ``p_{-t}(n)`` for ``n < precision``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return euler_power(-t, precision)


def pcolor_series_mod(t, precision, m):
    """``p_{-t}(n) mod m`` on the modular backend."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return euler_power_mod(-t, precision, m)


def _inner_precision(spec, precision):
    # a_r(k) feeds exponent delta*k + offset; need all k with that exponent < precision
    return max(1, -(-(precision - spec.offset) // spec.delta))


def eta_power_series(spec, precision):
    """Coefficients ``A_r(n)`` of ``q^{delta r/24} prod (1 - q^{delta n})^r``."""
    if not isinstance(spec, EtaPowerSpec):
        spec = EtaPowerSpec(*spec)
    inner = euler_power(spec.r, _inner_precision(spec, precision))
    body = dilate(inner, spec.delta)
    coeffs = [0] * precision
    for n in range(spec.offset, precision):
        k = n - spec.offset
        if k < body.precision:
            coeffs[n] = body[k]
    return TruncatedSeries(coeffs)


def eta_power_series_mod(spec, precision, m):
    """``A_r(n) mod m`` without forming the exact coefficients."""
    if not isinstance(spec, EtaPowerSpec):
        spec = EtaPowerSpec(*spec)
    inner = euler_power_mod(spec.r, _inner_precision(spec, precision), m)
    coeffs = [0] * precision
    for k, c in enumerate(inner):
        n = spec.delta * k + spec.offset
        if n >= precision:
            break
        coeffs[n] = c
    return ModSeries(coeffs, m)


def support_residue(spec):
    """The class mod delta carrying every nonzero ``A_r(n)``."""
    if not isinstance(spec, EtaPowerSpec):
        spec = EtaPowerSpec(*spec)
    return spec.offset % spec.delta


def s_bound(t, ell):
    # r <= 26 forces s <= (t + 26) / ell
    return -(-(t + max(FAMILY_R)) // ell)


def decompose_t(t, ell):
    """All ``(s, r)`` with ``r`` in the family, ``s >= 0`` and ``t = ell*s - r``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    out = []
    for s in range(0, s_bound(t, ell) + 1):
        r = ell * s - t
        if r in FAMILY_R:
            out.append(ColorCount(t, ell, s, r))
    return out

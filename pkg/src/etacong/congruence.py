"""Ramanujan-type congruences p_{-t}(ell n + a) = 0 (mod ell) for t = ell s - r.

Claims are generated from (r, ell, s), classified by the residue of ell, then
checked numerically.  Verification runs on the modular backend; every
refutation witness is recomputed exactly before it is reported.
"""

from __future__ import annotations

import enum
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .arith import isprime
from .etaforms import FAMILY_R, pcolor_series, pcolor_series_mod
from .qseries import MAX_PRECISION_EXACT, MAX_PRECISION_MOD, PrecisionError

log = logging.getLogger(__name__)

BACKEND_MOD = "mod"
BACKEND_EXACT = "exact"


class BackendDisagreement(ArithmeticError):
    """The modular and exact backends gave different residues."""


class Classification(str, enum.Enum):
    HOLDS = "congruence_holds"
    FAILS = "congruence_fails"
    OUT_OF_SCOPE = "out_of_scope"


class Verdict(str, enum.Enum):
    HOLDS_TO_BOUND = "holds_to_bound"
    REFUTED = "refuted"
    NOT_APPLICABLE = "not_applicable"


def _require_ell(ell):
    if ell in (2, 3):
        raise ValueError("ell must be >= 5")
    if not isprime(ell):
        raise ValueError(f"ell={ell} is not prime")


def offset(r, ell):
    """Reduced progression offset ``r(ell^2-1)/24 - ell*floor(r(ell^2-1)/(24 ell))``."""
    _require_ell(ell)
    num = r * (ell * ell - 1)
    if num % 24:
        raise ValueError(f"24 does not divide r(ell^2 - 1) for r={r}, ell={ell}")
    d = num // (24 * ell)
    return num // 24 - ell * d


def offset_shift(r, ell):
    """``d = floor(r(ell^2-1)/(24 ell))``, the whole multiples of ell removed."""
    _require_ell(ell)
    return r * (ell * ell - 1) // (24 * ell)


def admissible_offsets(t, ell):
    """The unique ``a`` in ``[0, ell)`` with ``24 a = t (mod ell)``.

    This is the Kiming-Olsson condition written with the sign that agrees
    with p(5n+4), p(7n+5), p(11n+6) and p_{-3}(11n+7).
    """
    _require_ell(ell)
    return t * pow(24, -1, ell) % ell


# r -> (modulus, residues where the congruence holds, residues where it fails)
_CLASSES = {
    4: (3, {2}, {1}),
    8: (3, {2}, {1}),
    14: (3, {2}, {1}),
    6: (4, {3}, {1}),
    10: (4, {3}, {1}),
    26: (12, {11}, {1, 5, 7}),
}


def classify(r, ell):
    _require_ell(ell)
    if r not in _CLASSES:
        return Classification.OUT_OF_SCOPE
    m, holds, fails = _CLASSES[r]
    if ell % m in holds:
        return Classification.HOLDS
    if ell % m in fails:
        return Classification.FAILS
    return Classification.OUT_OF_SCOPE


def is_special_prime(ell, t):
    """``ell | t``: then p_{-t} is a series in q^ell mod ell."""
    return t % ell == 0


@dataclass(frozen=True)
class CongruenceClaim:
    """``p_{-t}(ell n + a) = 0 (mod ell)`` with ``t = ell s - r``."""

    r: int
    ell: int
    s: int

    def __post_init__(self):
        if self.r not in FAMILY_R:
            raise ValueError(f"r={self.r} carries no congruence family")
        _require_ell(self.ell)
        if self.t < 1:
            raise ValueError(f"t = {self.ell}*{self.s} - {self.r} = {self.t} is not a color count")

    @property
    def t(self):
        return self.ell * self.s - self.r

    @property
    def a(self):
        return offset(self.r, self.ell)

    def as_dict(self):
        return {"r": self.r, "ell": self.ell, "s": self.s, "t": self.t, "a": self.a}


@dataclass(frozen=True)
class SpecialPrimeClaim:
    """``p_{-t}(m) = 0 (mod ell)`` for every m not divisible by ell, ``ell | t``."""

    ell: int
    t: int

    def __post_init__(self):
        _require_ell(self.ell)
        if self.t < 1 or self.t % self.ell:
            raise ValueError(f"ell={self.ell} does not divide t={self.t}")

    def as_dict(self):
        return {"ell": self.ell, "t": self.t}


@dataclass
class VerificationReport:
    claim: object
    verdict: Verdict
    bound: int
    witnesses: list = field(default_factory=list)  # (n, residue)
    elapsed: float = 0.0
    backend: str = BACKEND_MOD
    classification: Classification | None = None
    rechecked: bool | None = None
    note: str = ""

    def __post_init__(self):
        if self.verdict is Verdict.REFUTED and not any(res for _, res in self.witnesses):
            raise ValueError("a refuted report needs a witness with nonzero residue")
        if self.verdict is Verdict.HOLDS_TO_BOUND and self.witnesses:
            raise ValueError("a holds_to_bound report carries no witnesses")

    def as_dict(self):
        return {
            "claim": self.claim.as_dict() if self.claim is not None else None,
            "verdict": self.verdict.value,
            "bound": self.bound,
            "witnesses": [[n, res] for n, res in self.witnesses],
            "elapsed": round(self.elapsed, 6),
            "backend": self.backend,
            "classification": self.classification.value if self.classification else None,
            "rechecked": self.rechecked,
            "note": self.note,
        }


@dataclass
class Flag:
    """A disagreement between the predicted classification and the computation."""

    r: int
    ell: int
    s: int
    t: int
    reason: str
    classification: str | None = None
    verdict: str | None = None

    def as_dict(self):
        return {
            "r": self.r, "ell": self.ell, "s": self.s, "t": self.t,
            "reason": self.reason, "classification": self.classification,
            "verdict": self.verdict,
        }


def default_provider(t, precision, modulus):
    return pcolor_series_mod(t, precision, modulus)


def _mod_series(t, precision, ell, backend, provider):
    if backend == BACKEND_EXACT:
        if precision > MAX_PRECISION_EXACT:
            raise PrecisionError(f"exact backend cap {MAX_PRECISION_EXACT} < needed {precision}")
        exact = pcolor_series(t, precision)
        return [c % ell for c in exact]
    if backend != BACKEND_MOD:
        raise ValueError(f"unknown backend {backend!r}")
    if precision > MAX_PRECISION_MOD:
        raise PrecisionError(f"modular backend cap {MAX_PRECISION_MOD} < needed {precision}")
    return (provider or default_provider)(t, precision, ell)


def _exact_residue(t, index, ell):
    return pcolor_series(t, index + 1)[index] % ell


def verify_claim(claim, N, backend=BACKEND_MOD, provider=None):
    """Check ``p_{-t}(ell n + a) = 0 (mod ell)`` for ``0 <= n <= N``."""
    start = time.perf_counter()
    ell, a, t = claim.ell, claim.a, claim.t
    precision = ell * N + a + 1
    series = _mod_series(t, precision, ell, backend, provider)
    cls = classify(claim.r, ell)
    for n in range(N + 1):
        res = int(series[ell * n + a])
        if res:
            rechecked = None
            if backend == BACKEND_MOD:
                idx = ell * n + a
                if idx < MAX_PRECISION_EXACT:
                    exact = _exact_residue(t, idx, ell)
                    if exact != res:
                        raise BackendDisagreement(
                            f"backend disagreement at p_-{t}({idx}): mod {res}, exact {exact}")
                    rechecked = True
                else:
                    rechecked = False
            return VerificationReport(
                claim, Verdict.REFUTED, N, [(n, res)], time.perf_counter() - start,
                backend, cls, rechecked)
    return VerificationReport(claim, Verdict.HOLDS_TO_BOUND, N, [], time.perf_counter() - start,
                              backend, cls)


@dataclass
class ScanResult:
    """Witnesses ``n <= bound`` with ``p_{-t}(ell n + a) != 0``, grouped by ``n mod ell``."""

    claim: CongruenceClaim
    bound: int
    witnesses: dict  # residue class c -> list of (n, residue)
    elapsed: float = 0.0

    @property
    def empty_classes(self):
        """Classes with no witness up to the bound (inconclusive, not a congruence)."""
        return [c for c in range(self.claim.ell) if not self.witnesses.get(c)]

    @property
    def complete(self):
        return not self.empty_classes

    def as_dict(self):
        return {
            "claim": self.claim.as_dict(),
            "bound": self.bound,
            "witness_counts": {str(c): len(self.witnesses.get(c, [])) for c in range(self.claim.ell)},
            "first_witness": {str(c): self.witnesses[c][0][0]
                              for c in range(self.claim.ell) if self.witnesses.get(c)},
            "empty_classes": self.empty_classes,
            "elapsed": round(self.elapsed, 6),
        }


def counterexample_scan(r, ell, s, N, provider=None):
    """Tabulate nonvanishing witnesses for a family predicted to fail."""
    if classify(r, ell) is not Classification.FAILS:
        raise ValueError(f"(r={r}, ell={ell}) is not a failing pair; nothing to refute")
    start = time.perf_counter()
    claim = CongruenceClaim(r, ell, s)
    a = claim.a
    series = _mod_series(claim.t, ell * N + a + 1, ell, BACKEND_MOD, provider)
    table = {c: [] for c in range(ell)}
    for n in range(N + 1):
        res = int(series[ell * n + a])
        if res:
            table[n % ell].append((n, res))
    return ScanResult(claim, N, table, time.perf_counter() - start)


def special_prime_check(ell, t, N, provider=None):
    """``p_{-t}(m) = 0 (mod ell)`` for all ``m <= N`` with ``ell`` not dividing ``m``."""
    claim = SpecialPrimeClaim(ell, t)
    start = time.perf_counter()
    series = _mod_series(t, N + 1, ell, BACKEND_MOD, provider)
    for m in range(N + 1):
        if m % ell and int(series[m]):
            return VerificationReport(claim, Verdict.REFUTED, N, [(m, int(series[m]))],
                                      time.perf_counter() - start, note="special prime")
    return VerificationReport(claim, Verdict.HOLDS_TO_BOUND, N, [], time.perf_counter() - start,
                              note="special prime")


def _check_one(r, ell, s, N, provider):
    out = []
    t = ell * s - r
    if t < 1:
        out.append(VerificationReport(
            None, Verdict.NOT_APPLICABLE, N, note=f"r={r} ell={ell} s={s}: t={t} < 1"))
        return out
    try:
        claim = CongruenceClaim(r, ell, s)
        cls = classify(r, ell)
        report = verify_claim(claim, N, provider=provider)
        out.append(report)
        if cls is Classification.HOLDS and report.verdict is not Verdict.HOLDS_TO_BOUND:
            out.append(Flag(r, ell, s, t, "predicted congruence refuted", cls.value,
                            report.verdict.value))
        elif cls is Classification.FAILS and report.verdict is Verdict.HOLDS_TO_BOUND:
            out.append(Flag(r, ell, s, t, "predicted failure not refuted within bound",
                            cls.value, report.verdict.value))
        if is_special_prime(ell, t):
            special = special_prime_check(ell, t, N, provider=provider)
            out.append(special)
            if special.verdict is not Verdict.HOLDS_TO_BOUND:
                out.append(Flag(r, ell, s, t, "special-prime vanishing fails", cls.value,
                                special.verdict.value))
    except BackendDisagreement as exc:
        log.error("claim r=%s ell=%s s=%s: %s", r, ell, s, exc)
        out.append(VerificationReport(None, Verdict.NOT_APPLICABLE, N,
                                      note=f"r={r} ell={ell} s={s}: error: {exc}"))
        out.append(Flag(r, ell, s, t, f"backend disagreement: {exc}"))
    except Exception as exc:  # localized; the sweep continues
        log.warning("claim r=%s ell=%s s=%s failed: %s", r, ell, s, exc)
        out.append(VerificationReport(None, Verdict.NOT_APPLICABLE, N,
                                      note=f"r={r} ell={ell} s={s}: error: {exc}"))
    return out


def sweep(r_values, ell_values, s_values, N, sink=None, threads=1, provider=None):
    """Classify and verify every claim in ``r x ell x s``.

    Yields reports (and :class:`Flag` records for any disagreement) in
    deterministic ``(r, ell, s)`` order, regardless of ``threads``.
    """
    jobs = [(r, ell, s) for r in r_values for ell in ell_values for s in s_values
            if ell >= 5 and isprime(ell)]

    def run(job):
        return _check_one(*job, N, provider)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(run, jobs)
            for batch in results:
                for rec in batch:
                    if sink is not None:
                        sink(rec)
                    yield rec
    else:
        for job in jobs:
            for rec in run(job):
                if sink is not None:
                    sink(rec)
                yield rec

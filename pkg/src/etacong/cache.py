"""On-disk coefficient cache.

An entry is keyed by ``(r, delta, modulus-or-exact, precision)`` and stores
the coefficients as decimal strings together with a sha256 digest.  Color
partition series are stored as ``r = -t, delta = 1``.  A missing, unreadable
or tampered entry is recomputed; the cache can cost time but never change an
answer.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .etaforms import EtaPowerSpec, eta_power_series, eta_power_series_mod
from .qseries import ModSeries, TruncatedSeries, euler_power, euler_power_mod

log = logging.getLogger(__name__)

ENV_VAR = "ETACONG_CACHE_DIR"
EXACT = "exact"


def default_cache_dir():
    if os.environ.get(ENV_VAR):
        return Path(os.environ[ENV_VAR])
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "etacong"


def digest(coeffs):
    h = hashlib.sha256()
    h.update(",".join(str(int(c)) for c in coeffs).encode())
    return h.hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    r: int
    delta: int
    modulus: object  # int or EXACT
    precision: int
    coeffs: tuple
    sha256: str

    @classmethod
    def build(cls, r, delta, modulus, precision, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        return cls(r, delta, modulus, precision, coeffs, digest(coeffs))

    @property
    def key(self):
        return (self.r, self.delta, self.modulus, self.precision)

    def valid(self):
        return len(self.coeffs) == self.precision and digest(self.coeffs) == self.sha256

    def to_json(self):
        return json.dumps({
            "key": {"r": self.r, "delta": self.delta, "modulus": self.modulus,
                    "precision": self.precision},
            "coeffs": [str(c) for c in self.coeffs],
            "sha256": self.sha256,
        }, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        k = obj["key"]
        return cls(k["r"], k["delta"], k["modulus"], k["precision"],
                   tuple(int(c) for c in obj["coeffs"]), obj["sha256"])


def _fname(r, delta, modulus, precision):
    return f"r{r}_d{delta}_m{modulus}_n{precision}.json"


_NAME = re.compile(r"^r(-?\d+)_d(\d+)_m(\w+)_n(\d+)\.json$")


class CoefficientCache:
    """Read-through cache; ``root=None`` disables persistence."""

    def __init__(self, root=None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _load(self, path, key):
        try:
            entry = CacheEntry.from_json(path.read_text())
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("unreadable cache entry %s: %s", path.name, exc)
            return None
        if entry.key != key or not entry.valid():
            log.warning("corrupt cache entry %s; recomputing", path.name)
            return None
        return entry

    def _candidates(self, r, delta, modulus, precision):
        """Existing files for the same series with at least ``precision`` terms."""
        exact_name = self.root / _fname(r, delta, modulus, precision)
        yield exact_name, precision
        larger = []
        for p in self.root.glob(f"r{r}_d{delta}_m{modulus}_n*.json"):
            m = _NAME.match(p.name)
            if m and int(m.group(4)) > precision:
                larger.append((int(m.group(4)), p))
        for n, p in sorted(larger):
            yield p, n

    def get(self, r, delta, modulus, precision, compute):
        """Coefficients ``[0, precision)``; ``compute()`` supplies them on a miss."""
        if self.root is not None:
            for path, n in self._candidates(r, delta, modulus, precision):
                if not path.exists():
                    continue
                entry = self._load(path, (r, delta, modulus, n))
                if entry is not None:
                    self.hits += 1
                    return list(entry.coeffs[:precision])
        self.misses += 1
        coeffs = [int(c) for c in compute()]
        if self.root is not None:
            self._store(CacheEntry.build(r, delta, modulus, precision, coeffs))
        return coeffs

    def _store(self, entry):
        path = self.root / _fname(*entry.key)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(entry.to_json())
        os.replace(tmp, path)

    def pcolor_mod(self, t, precision, modulus):
        coeffs = self.get(-t, 1, modulus, precision,
                          lambda: euler_power_mod(-t, precision, modulus).tolist())
        return ModSeries(coeffs, modulus)

    def euler_power(self, r, precision, modulus=None):
        if modulus is None:
            return TruncatedSeries(self.get(r, 1, EXACT, precision,
                                            lambda: euler_power(r, precision).coeffs))
        return ModSeries(self.get(r, 1, modulus, precision,
                                  lambda: euler_power_mod(r, precision, modulus).tolist()), modulus)

    def eta_power(self, spec, precision, modulus=None):
        if not isinstance(spec, EtaPowerSpec):
            spec = EtaPowerSpec(*spec)
        if modulus is None:
            return TruncatedSeries(self.get(spec.r, spec.delta, EXACT, precision,
                                            lambda: eta_power_series(spec, precision).coeffs))
        return ModSeries(self.get(spec.r, spec.delta, modulus, precision,
                                  lambda: eta_power_series_mod(spec, precision, modulus).tolist()),
                         modulus)

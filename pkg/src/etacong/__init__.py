"""Eta powers with complex multiplication and congruences for t-color partitions."""

from .congruence import (
    Classification,
    CongruenceClaim,
    Verdict,
    VerificationReport,
    admissible_offsets,
    classify,
    counterexample_scan,
    offset,
    special_prime_check,
    sweep,
    verify_claim,
)
from .cm_arith import cm_prime_coeff, cm_residue, nonvanishing_certificate, rep_eisenstein, rep_two_squares
from .etaforms import EtaPowerSpec, decompose_t, eta_power_series, pcolor_series
from .hecke import HeckeParams, annihilated_mod, apply_tp, serre_case
from .qseries import ModSeries, TruncatedSeries, euler_power, euler_power_mod

__version__ = "0.1.0"

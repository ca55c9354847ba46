"""Acceptance criteria 1-9, each printing one PASS/FAIL line with its timing."""

import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etacong import cli, cm_arith
from etacong.arith import primes_between
from etacong.congruence import (
    Classification,
    Flag,
    classify,
    counterexample_scan,
    offset,
    special_prime_check,
    sweep,
    Verdict,
)
from etacong.etaforms import ADMISSIBLE_PAIRS, FAMILY_R, EtaPowerSpec, eta_power_series, eta_power_series_mod, support_residue
from etacong.hecke import SerreCase, annihilated_mod, serre_case
from etacong.qseries import TruncatedSeries, dilate, euler_power, euler_power_mod, reduce_mod
from etacong.records import read_lines

PRIMES_50 = primes_between(5, 50)


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail, elapsed, limit):
        ok = ok and elapsed < limit
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} - {detail} [{elapsed:.2f}s, limit {limit}s]")
        return ok
    return _report


def coeff_table(capsys, *argv):
    code = cli.main(["coeff", *argv, "--no-cache", "--no-timestamps"])
    out = capsys.readouterr().out
    return code, {r.payload["n"]: int(r.payload["value"]) for r in read_lines(out)}


def test_criterion_1_a8_table(capsys, report):
    start = time.perf_counter()
    code, t = coeff_table(capsys, "--r", "8", "--delta", "3", "--limit", "40")
    got = [t[p] for p in (7, 13, 19, 31, 37)]
    elapsed = time.perf_counter() - start
    ok = code == 0 and got == [20, -70, 56, 308, 110]
    assert report(1, ok, f"A_8 at 7,13,19,31,37 = {got}", elapsed, 1)


def test_criterion_2_a26_table(capsys, report):
    start = time.perf_counter()
    code, t = coeff_table(capsys, "--r", "26", "--delta", "12", "--limit", "40")
    elapsed = time.perf_counter() - start
    zeros = [t[p] for p in (5, 7, 17, 19, 29, 31)]
    ok = code == 0 and t[13] == 1 and t[37] == 299 and zeros == [0] * 6
    assert report(2, ok, f"A_26(13)={t[13]}, A_26(37)={t[37]}, zeros={zeros}", elapsed, 1)


def test_criterion_3_closed_forms(report):
    cm_arith.resolve_formula.cache_clear()
    cm_arith._oracle.cache_clear()
    start = time.perf_counter()
    checked, bad = 0, []
    for r in FAMILY_R:
        oracle = eta_power_series(EtaPowerSpec.for_r(r), 500)
        for p in primes_between(5, 499):
            if not cm_arith.is_split(r, p):
                continue
            checked += 1
            if cm_arith.cm_prime_coeff(r, p) != oracle[p]:
                bad.append((r, p))
    elapsed = time.perf_counter() - start
    assert report(3, not bad, f"{checked} (r, p) pairs, mismatches {bad}", elapsed, 30)


def test_criterion_4_serre_annihilation(report):
    start = time.perf_counter()
    n_in = n_out = 0
    bad = []
    for r in FAMILY_R:
        spec = EtaPowerSpec(r, ADMISSIBLE_PAIRS[r])
        for ell in PRIMES_50:
            case = serre_case(r, ell)
            if case is SerreCase.OUT_OF_FAMILY:
                continue
            f = eta_power_series_mod(spec, 50 * ell + 1, ell)
            res = annihilated_mod(f, ell, spec.weight)
            if case is SerreCase.ANNIHILATED:
                n_in += 1
                if not res.annihilated:
                    bad.append((r, ell))
            else:
                n_out += 1
                if res.annihilated or res.witness is None:
                    bad.append((r, ell))
    elapsed = time.perf_counter() - start
    detail = f"{n_in} in-class annihilated, {n_out} out-of-class with witness, failures {bad}"
    assert report(4, not bad, detail, elapsed, 60)


def test_criterion_5_named_congruences(capsys, report):
    start = time.perf_counter()
    verdicts = {}
    for t, ell in ((1, 5), (1, 7), (1, 11), (3, 11)):
        code = cli.main(["verify", "--t", str(t), "--ell", str(ell), "--limit", "500", "--no-cache"])
        (rec,) = read_lines(capsys.readouterr().out)
        verdicts[(t, ell)] = (code, rec.payload["verdict"])
    elapsed = time.perf_counter() - start
    ok = all(v == (0, "holds_to_bound") for v in verdicts.values())
    assert report(5, ok, f"verdicts {sorted(verdicts.items())}", elapsed, 10)


def test_criterion_6_desk_sweeps(report):
    start = time.perf_counter()
    families = (((4, 8, 14), 3, {2}), ((6, 10), 4, {3}), ((26,), 12, {11}))
    claims = flags = 0
    for rs, m, classes in families:
        ells = [ell for ell in PRIMES_50 if ell % m in classes]
        for rec in sweep(rs, ells, [1, 2, 3], 100):
            if isinstance(rec, Flag):
                flags += 1
            elif rec.claim is not None:
                claims += 1
    elapsed = time.perf_counter() - start
    assert report(6, flags == 0, f"{claims} claims verified to N=100, {flags} FLAG records", elapsed, 300)


@pytest.mark.xfail(strict=True, reason=(
    "every-residue-class reading is false: for r in {4,6,8}, p_{-t}(ell n + a) = lam*a_{r-s}(n) mod ell, "
    "and eta^{r-s} is lacunary, so whole classes of n never carry a witness"))
def test_criterion_7_refutation_witnesses(report):
    start = time.perf_counter()
    runs, gaps, weak_failures = 0, [], []
    for r in FAMILY_R:
        for ell in PRIMES_50:
            if classify(r, ell) is not Classification.FAILS:
                continue
            for s in (1, 2, 3):
                if ell * s - r < 1:
                    continue
                runs += 1
                sc = counterexample_scan(r, ell, s, 1000)
                if sc.empty_classes:
                    gaps.append((r, ell, s, len(sc.empty_classes)))
                if not any(sc.witnesses.values()):
                    weak_failures.append((r, ell, s))
    elapsed = time.perf_counter() - start
    detail = (f"{len(gaps)}/{runs} scans leave residue classes without a witness within N=1000 "
              f"(e.g. {gaps[:3]}); every scan has witnesses: {not weak_failures}")
    assert report(7, not gaps, detail, elapsed, 300)


def test_criterion_8_special_primes(report):
    start = time.perf_counter()
    verdicts = {(ell, t): special_prime_check(ell, t, 300).verdict
                for ell, t in ((13, 13), (13, 26), (5, 10), (7, 14))}
    elapsed = time.perf_counter() - start
    ok = all(v is Verdict.HOLDS_TO_BOUND for v in verdicts.values())
    assert report(8, ok, f"{ {k: v.value for k, v in verdicts.items()} }", elapsed, 5)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(primes_between(5, 30)), st.integers(1, 5), st.integers(10, 2000))
def freshmans_dream(ell, s, n):
    lhs = reduce_mod(euler_power(ell * s, n), ell)
    assert lhs == reduce_mod(dilate(euler_power(s, -(-n // ell)), ell, precision=n), ell)


@settings(max_examples=14, deadline=None)
@given(st.sampled_from(sorted(ADMISSIBLE_PAIRS)), st.integers(1, 3000))
def support_vanishing(r, n):
    spec = EtaPowerSpec(r, ADMISSIBLE_PAIRS[r])
    f = eta_power_series(spec, n)
    res = support_residue(spec)
    assert all(f[k] == 0 for k in range(n) if k % spec.delta != res)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 30))
def convolution_identity(t):
    assert euler_power(-t, 500) * euler_power(t, 500) == TruncatedSeries.one(500)


@settings(max_examples=40, deadline=None)
@given(st.integers(-40, 40), st.integers(1, 2000), st.sampled_from(primes_between(2, 200)))
def backend_equality(r, n, m):
    assert euler_power_mod(r, n, m) == reduce_mod(euler_power(r, n), m)


def test_criterion_9_structural_invariants(report):
    start = time.perf_counter()
    results = {}
    for name, prop in (("freshman", freshmans_dream), ("support", support_vanishing),
                       ("convolution", convolution_identity), ("backend", backend_equality)):
        try:
            prop()
            results[name] = True
        except AssertionError:
            results[name] = False
    # offset identity checked exhaustively rather than sampled
    results["kiming-olsson"] = all((24 * offset(r, ell) + r) % ell == 0
                                   for r in FAMILY_R for ell in primes_between(5, 200))
    elapsed = time.perf_counter() - start
    assert report(9, all(results.values()), f"{results}", elapsed, 120)

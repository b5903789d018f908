"""Acceptance criteria, one PASS/FAIL line each (see the terminal summary).

Tolerances are the stated ones; nothing here is loosened to make a
criterion pass.
"""

import json
import time

import mpmath
import pytest

from hypervirial import CORNELL, QUARTIC, QuantumState, energy_series, moment_table
from hypervirial.analysis import direct_eigenvalue, fit_gamma_growth, optimal_truncation
from hypervirial.cli import main
from hypervirial.engine import hf_mismatches, hv_residuals, sign_violations
from hypervirial.io import SeriesCache, SeriesDocument, parse_csv
from hypervirial.rspt import rspt_series
from reference_tables import CORNELL_TABLE, QUARTIC_TABLE_SCALED

S1 = QuantumState(0, 0)
FAMILIES = {"cornell": CORNELL, "quartic": QUARTIC}


def best_time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return result, best


def table_run(family, states, scaled):
    out = {}
    for state in states:
        series = energy_series(family, QuantumState(*state), 7)
        out[state] = series.scaled(4) if scaled else list(series)
    return out


def test_criterion_1_cornell_table(acceptance_report):
    values, seconds = best_time(lambda: table_run(CORNELL, CORNELL_TABLE, scaled=False))
    matches = sum(a == b for s in CORNELL_TABLE for a, b in zip(values[s], CORNELL_TABLE[s]))
    ok = matches == 24 and seconds < 0.010
    acceptance_report(1, ok, f"Cornell table: {matches}/24 exact, {seconds * 1e3:.2f} ms (limit 10 ms)")
    assert ok


def test_criterion_2_quartic_table(acceptance_report):
    values, seconds = best_time(lambda: table_run(QUARTIC, QUARTIC_TABLE_SCALED, scaled=True))
    matches = sum(a == b for s in QUARTIC_TABLE_SCALED for a, b in zip(values[s], QUARTIC_TABLE_SCALED[s]))
    ok = matches == 24 and seconds < 0.010
    acceptance_report(2, ok, f"quartic table (4^k scaled): {matches}/24 exact, {seconds * 1e3:.2f} ms (limit 10 ms)")
    assert ok


def test_criterion_3_oracle_equivalence(acceptance_report):
    start = time.perf_counter()
    mismatches, total = 0, 0
    for family in FAMILIES.values():
        for l in range(4):
            a = energy_series(family, QuantumState(0, l), 15).coefficients
            b = rspt_series(family, l, 15).coefficients
            total += len(a)
            mismatches += sum(x != y for x, y in zip(a, b)) + abs(len(a) - len(b))
    seconds = time.perf_counter() - start
    ok = mismatches == 0 and seconds < 30
    acceptance_report(3, ok, f"RSPT oracle vs moment recursion: {total - mismatches}/{total} equal, {seconds:.2f} s (limit 30 s)")
    assert ok


def test_criterion_4_hv_residuals(acceptance_report):
    start = time.perf_counter()
    nonzero, checked = 0, 0
    for family in FAMILIES.values():
        for state in [(0, 0), (1, 0), (0, 1), (2, 1)]:
            table = moment_table(family, QuantumState(*state), 40)
            nonzero += len(hv_residuals(table)) + len(hf_mismatches(table))
            checked += 1
    seconds = time.perf_counter() - start
    ok = nonzero == 0 and seconds < 60
    acceptance_report(4, ok, f"HV/HF residuals at r0=40 over {checked} tables: {nonzero} nonzero, {seconds:.2f} s (limit 60 s)")
    assert ok


@pytest.mark.slow
def test_criterion_5_large_order(acceptance_report, cornell_1000):
    series, seconds = cornell_1000
    violations = sign_violations(series)
    ok = len(series) == 1001 and seconds <= 30 * 60 and not violations
    acceptance_report(
        5, ok, f"Cornell 1S order 1000 in {seconds:.1f} s (limit 1800 s), sign violations: {len(violations)}"
    )
    assert ok


@pytest.mark.slow
@pytest.mark.parametrize("name,a_ref,b_ref", [("cornell", 6.0, 2.0), ("quartic", 1.5, 1.5)])
def test_criterion_6_asymptotic_constants(acceptance_report, request, name, a_ref, b_ref):
    series, _ = request.getfixturevalue(f"{name}_1000")
    fit = fit_gamma_growth(series, (800, 998))
    a_err, b_err = abs(fit.a / a_ref - 1), abs(fit.b / b_ref - 1)
    ok = a_err <= 0.02 and b_err <= 0.05
    acceptance_report(
        6, ok, f"{name} 1S: a = {fit.a:.6f} (rel err {a_err:.2e}, limit 2%), b = {fit.b:.6f} (rel err {b_err:.2e}, limit 5%)"
    )
    assert ok


@pytest.mark.parametrize("name", ["cornell", "quartic"])
@pytest.mark.parametrize("g", [1e-4, 1e-3, 1e-2])
def test_criterion_7_cross_method(acceptance_report, name, g):
    family = FAMILIES[name]
    series = energy_series(family, S1, 60)
    trunc = optimal_truncation(series, g)
    direct = direct_eigenvalue(family, S1, g)
    diff = abs(trunc.value - mpmath.mpf(direct))
    ok = diff <= trunc.error_bound
    acceptance_report(
        7,
        ok,
        f"{name} 1S g={g:g}: |truncated - direct| = {mpmath.nstr(diff, 3)}, "
        f"error_bound = {mpmath.nstr(trunc.error_bound, 3)} (K*={trunc.K_star})",
    )
    assert ok


@pytest.mark.parametrize("name", ["cornell", "quartic"])
def test_criterion_8_bench(acceptance_report, capsys, tmp_path, name):
    target = tmp_path / f"bench-{name}.json"
    code = main(["bench", name, "--orders", "10,20,30,40", "--format", "json", "-o", str(target)])
    capsys.readouterr()
    report = json.loads(target.read_text())
    orders = sorted(int(k) for k in report["ratios"])
    rows = {(r["method"], r["r0"]) for r in report["rows"]}
    well_formed = (
        code == 0
        and orders == [10, 20, 30, 40]
        and rows == {(m, r) for m in ("hfhv", "rspt") for r in orders}
        and report["environment"]
    )
    ratio = report["ratios"]["40"]
    ok = bool(well_formed) and ratio > 1
    acceptance_report(8, ok, f"{name} bench r0=10..40 well formed: {bool(well_formed)}, RSPT/HFHV at r0=40 = {ratio:.1f} (must exceed 1)")
    assert ok


@pytest.mark.parametrize("name", ["cornell", "quartic"])
def test_criterion_9_round_trip_and_cache(acceptance_report, tmp_path, name):
    family = FAMILIES[name]
    series = energy_series(family, S1, 40)
    document = SeriesDocument.from_series(series)
    json_ok = SeriesDocument.from_json(document.to_json()).to_series() == series
    csv_ok = tuple(parse_csv(document.to_csv())) == series.coefficients
    cache = SeriesCache(tmp_path)
    short = cache.series(family, S1, 40)
    long = cache.series(family, S1, 60)
    reloaded = cache.series(family, S1, 60)
    cache_ok = (
        long.coefficients[:41] == short.coefficients
        and long == energy_series(family, S1, 60)
        and reloaded == long
        and cache.series(family, S1, 40) == short
    )
    ok = json_ok and csv_ok and cache_ok
    acceptance_report(9, ok, f"{name}: json round trip {json_ok}, csv round trip {csv_ok}, cache 40->60 prefix stable {cache_ok}")
    assert ok

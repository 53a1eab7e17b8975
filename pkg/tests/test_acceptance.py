"""Acceptance gate: one test per shipping criterion, one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL line
for every criterion. The reference-dataset criterion needs external data and
is skipped unless the AIHW_ACIM_2010_CSV environment variable points at the
cohort file; the others are self-contained.
"""

import math
import os
import time

import numpy as np
import pytest

from cumrisk.cli import main as cli_main
from cumrisk.core import (
    NEWBORN_STATE,
    conditional_risk,
    cumulative_risk_from_rate,
    propagate,
    red_probability,
    risk_series,
    transition_matrices,
)
from cumrisk.io import emit_cohort, emit_series, parse_cohort
from cumrisk.simulate import SimulationConfig, empirical_series, simulate
from helpers import make_cohort, ramp_cohort

TOL = 1e-12
AIHW_ENV = "AIHW_ACIM_2010_CSV"


def _report(number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] criterion {number} ({name}): {status}{suffix}")
    assert ok, f"criterion {number} ({name}) failed{suffix}"


@pytest.fixture(scope="module")
def random_corpus():
    """1000 random valid cohorts, up to 18 groups, B_i in [0, 0.5]."""
    rng = np.random.default_rng(20100817)
    cohorts = []
    for _ in range(1000):
        groups = int(rng.integers(1, 19))
        rows = []
        for _ in range(groups):
            population = float(rng.integers(50, 1_000_001))
            cancer_deaths = float(rng.integers(0, int(population) // 5 + 1))
            pool = population + 5.0 * cancer_deaths
            incidence = float(rng.uniform(0.0, 0.1 * pool))
            rows.append((population, incidence, cancer_deaths))
        cohorts.append(make_cohort(rows, open_last=bool(rng.integers(0, 2))))
    return cohorts


def test_criterion_1_closed_form_equals_propagation(random_corpus):
    start = time.perf_counter()
    worst = 0.0
    for cohort in random_corpus:
        state = NEWBORN_STATE
        for t, matrix in enumerate(transition_matrices(cohort), start=1):
            state = propagate(state, [matrix])
            worst = max(worst, abs(red_probability(cohort, t) - state.p_red))
    elapsed = time.perf_counter() - start
    _report(1, "closed form equals state propagation",
            worst <= TOL and elapsed < 1.0,
            f"max |diff| {worst:.2e}, {elapsed:.3f}s")


def test_criterion_2_monotone_and_normalised(random_corpus):
    ok = True
    for cohort in random_corpus:
        previous_red, previous_off = 0.0, 1.0
        state = NEWBORN_STATE
        for matrix in transition_matrices(cohort):
            ok = ok and matrix.p10 == 0.0 and matrix.p11 == 1.0
            ok = ok and abs(matrix.p00 + matrix.p01 - 1.0) <= TOL
            state = propagate(state, [matrix])
            ok = ok and state.p_red >= previous_red
            ok = ok and state.p_off <= previous_off
            ok = ok and abs(state.p_off + state.p_red - 1.0) <= TOL
            previous_red, previous_off = state.p_red, state.p_off
    _report(2, "monotone, normalised, row-stochastic", ok)


def test_criterion_3_chain_rule(random_corpus):
    worst = 0.0
    for cohort in random_corpus:
        groups = len(cohort.records)
        survive = [1.0]
        for t in range(1, groups + 1):
            survive.append(1.0 - red_probability(cohort, t))
        for t in range(1, groups + 1):
            for j in range(0, t + 1):
                # horizon 0 is the empty product: no chance of a diagnosis
                conditional = 0.0 if j == t else conditional_risk(cohort, j, t - j)
                worst = max(worst, abs(survive[t] - survive[j] * (1.0 - conditional)))
    _report(3, "survival chain rule", worst <= TOL, f"max |diff| {worst:.2e}")


def test_criterion_4_monte_carlo_agreement():
    cohort = ramp_cohort()
    config = SimulationConfig(cohort=cohort, n_bulbs=10**6, seed=2718281828)
    start = time.perf_counter()
    result = simulate(config)
    elapsed = time.perf_counter() - start
    worst = 0.0
    for emp, step in zip(empirical_series(result), risk_series(cohort)):
        sigma = math.sqrt(step.p_red * (1.0 - step.p_red) / config.n_bulbs)
        worst = max(worst, abs(emp.p_red - step.p_red) / sigma)
    _report(4, "Monte Carlo tracks the analytic risk",
            worst <= 4.0 and elapsed < 5.0,
            f"max {worst:.2f} sigma, {elapsed:.2f}s")


def test_criterion_5_simulation_determinism(tmp_path, capsys):
    dataset = tmp_path / "cohort.csv"
    dataset.write_text(emit_cohort(ramp_cohort()), encoding="utf-8")
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    flags = ["simulate", str(dataset), "--bulbs", "1000000", "--seed", "42"]
    assert cli_main([*flags, "--out", str(out_a)]) == 0
    assert cli_main([*flags, "--out", str(out_b)]) == 0
    assert capsys.readouterr().err == ""
    _report(5, "repeat simulation runs are byte-identical",
            out_a.read_bytes() == out_b.read_bytes())


def test_criterion_6_risk_transform_spot_values():
    exact_zero = cumulative_risk_from_rate(0.0) == 0.0
    exact_half = cumulative_risk_from_rate(math.log(2.0)) == 0.5
    risks = [cumulative_risk_from_rate(10.0 * k / 999) for k in range(1000)]
    strictly_increasing = all(b > a for a, b in zip(risks, risks[1:]))
    _report(6, "rate-to-risk transform spot values",
            exact_zero and exact_half and strictly_increasing,
            f"risk(0)={risks[0]!r}, risk(ln 2)={cumulative_risk_from_rate(math.log(2.0))!r}")


def test_criterion_7_estimator_proximity():
    worst = 0.0
    for step in risk_series(ramp_cohort()):
        worst = max(worst, abs(step.cum_risk - step.p_red))
    _report(7, "rate-based risk stays close to the chain estimate",
            worst <= 0.02, f"max |gap| {worst:.4f}")


@pytest.mark.skipif(AIHW_ENV not in os.environ,
                    reason=f"set {AIHW_ENV} to the AIHW ACIM 2010 cohort CSV")
def test_criterion_8_reference_dataset(tmp_path, capsys):
    dataset = os.environ[AIHW_ENV]
    assert cli_main(["compute", dataset]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    rows = {int(line.split(",")[0]): line.split(",") for line in lines[1:]}
    final = lines[-1].split(",")
    checks = {
        "final p_red 0.5319": abs(float(final[5]) - 0.5319) <= 1e-4,
        "final cum_risk 0.5326": abs(float(final[4]) - 0.5326) <= 1e-4,
        "b 10-14 0.0006": abs(float(rows[3][2]) - 0.0006) <= 5e-5,
        "b 40-44 0.0113": abs(float(rows[9][2]) - 0.0113) <= 5e-5,
        "b 70-74 0.0995": abs(float(rows[15][2]) - 0.0995) <= 5e-5,
    }
    outdir = tmp_path / "figs"
    assert cli_main(["figures", dataset, "--out", str(outdir)]) == 0
    capsys.readouterr()
    fig4 = (outdir / "fig4_transitions.csv").read_text(encoding="utf-8").splitlines()
    b_column = {int(line.split(",")[0]): float(line.split(",")[2]) for line in fig4[1:]}
    checks["figures b 10-14"] = abs(b_column[3] - 0.0006) <= 5e-5
    checks["figures b 40-44"] = abs(b_column[9] - 0.0113) <= 5e-5
    checks["figures b 70-74"] = abs(b_column[15] - 0.0995) <= 5e-5
    failed = [name for name, ok in checks.items() if not ok]
    _report(8, "reference dataset headline values", not failed,
            "all matched" if not failed else "failed: " + ", ".join(failed))


def test_criterion_9_pipeline_latency():
    text = emit_cohort(ramp_cohort())

    def pipeline():
        return emit_series(risk_series(parse_cohort(text)))

    pipeline()  # warm up imports and caches
    best = math.inf
    for _ in range(5):
        start = time.perf_counter()
        pipeline()
        best = min(best, time.perf_counter() - start)
    _report(9, "parse/series/emit under 10 ms", best < 0.010,
            f"best of 5: {best * 1000:.2f} ms")

"""Acceptance checks 1-10, one test each, with a PASS/FAIL summary line per check.

Run alone with ``pytest tests/test_acceptance.py -v`` (the summary is written
by the terminal reporter at the end of the module) or as a script.
"""

import json
import math
import sys
import time

import jsonschema
import numpy as np
import pytest

from unitgompertz import UnitGompertz, trunc
from unitgompertz.cli import main as cli_main
from unitgompertz.entropy import mathai_haubold, tsallis
from unitgompertz.lmom import fit_by_lmoments, population_lmoments, pwm, sample_lmoments
from unitgompertz.oracle import mc_half_abs_difference, shannon_entropy
from unitgompertz.quadrature import integrate
from unitgompertz.special import recurrence_condition, upper_inc_gamma, upper_inc_gamma_recurrence_check

from conftest import GRID, log_upper_gamma_by_quadrature

EPS = np.finfo(float).eps
TINY = np.finfo(float).tiny
RESULTS: dict[int, tuple[bool, str, str, float]] = {}


def record(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float) -> bool:
    timed_ok = elapsed < limit
    ok = bool(ok and timed_ok)
    RESULTS[number] = (ok, title, f"{detail}; {elapsed:.2f} s (limit {limit:g} s)", elapsed)
    return ok


def summary_lines() -> list[str]:
    lines = []
    for n in sorted(RESULTS):
        ok, title, detail, _ = RESULTS[n]
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {title}: {detail}")
    return lines


@pytest.fixture(scope="module", autouse=True)
def acceptance_summary(request):
    yield
    lines = summary_lines()
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is not None:
        reporter.write_sep("=", "acceptance summary")
        for line in lines:
            reporter.write_line(line)
    else:
        print("\n".join(lines))


def test_01_normalization():
    t0 = time.perf_counter()
    worst = 0.0
    for a, b in GRID:
        v, _ = integrate(UnitGompertz(a, b).pdf, 0.0, 1.0, 1e-10)
        worst = max(worst, abs(v - 1.0))
    elapsed = time.perf_counter() - t0
    ok = record(1, "normalization", worst <= 1e-8,
                f"max |integral of pdf - 1| = {worst:.2e} over 9 pairs (tol 1e-8)", elapsed, 1.0)
    assert ok, RESULTS[1]


def test_02_round_trips():
    t0 = time.perf_counter()
    u = (np.arange(1000) + 0.5) / 1000
    x = (np.arange(1000) + 0.5) / 1000
    worst_u = worst_x = 0.0
    skipped = 0
    for a, b in GRID:
        d = UnitGompertz(a, b)
        worst_u = max(worst_u, float(np.max(np.abs(d.cdf(d.quantile(u)) - u))))
        # a subnormal or saturated cdf value no longer carries full precision to invert
        F = d.cdf(x)
        keep = (F >= TINY) & (F < 1.0)
        skipped += int(np.count_nonzero(~keep))
        worst_x = max(worst_x, float(np.max(np.abs(d.quantile(F[keep]) - x[keep]))))
    elapsed = time.perf_counter() - t0
    ok = record(
        2, "cdf/quantile round trips",
        worst_u <= 1e-12 and worst_x <= 1e-10,
        f"max |F(Q(u)) - u| = {worst_u:.2e} (tol 1e-12), max |Q(F(x)) - x| = {worst_x:.2e} (tol 1e-10) "
        f"on 1000 points x 9 pairs ({skipped} x-points with F(x) below {TINY:.1e} or equal to 1 excluded)",
        elapsed, 1.0,
    )
    assert ok, RESULTS[2]


RECONSTRUCTION_PAIRS = [(0.25, 0.25), (1.0, 1.0), (4.0, 0.25), (4.0, 1.0)]  # h overflows near 0 when beta = 4


def test_03_characterization_reconstruction():
    t0 = time.perf_counter()
    worst = 0.0
    parts = []
    for a, b in RECONSTRUCTION_PAIRS:
        d = UnitGompertz(a, b)
        eg = trunc.reconstruct_density_from_g(lambda x: trunc.g_factor(d, x), reference=d).max_rel_error_vs_closed_form
        eh = trunc.reconstruct_density_from_h(lambda x: trunc.h_factor(d, x), reference=d).max_rel_error_vs_closed_form
        worst = max(worst, eg, eh)
        parts.append(f"({a:g},{b:g}) g {eg:.1e} h {eh:.1e}")
    elapsed = time.perf_counter() - t0
    ok = record(3, "density from g and from h", worst <= 1e-4,
                f"max rel error on (0.05, 0.95) = {worst:.2e} (tol 1e-4): " + ", ".join(parts), elapsed, 30.0)
    assert ok, RESULTS[3]


def test_04_truncated_moment_identities():
    t0 = time.perf_counter()
    x = (np.arange(200) + 0.5) / 200
    worst_sum = 0.0
    worst_tau = 0.0
    floor_points = floor_ok = 0
    bracket_ok = True
    for a, b in GRID:
        d = UnitGompertz(a, b)
        lf = d.log_pdf(x)
        lg, lh = trunc.log_g_factor(d, x), trunc.log_h_factor(d, x)
        err = np.abs((np.exp(lg + lf) + np.exp(lh + lf)) / d.mean - 1.0)
        # h and f can be e^(+-1e11) in the far left tail; the sum of their logs then
        # carries an absolute rounding error of a few eps times that magnitude
        floor = 4.0 * EPS * (np.abs(lh) + np.abs(lf))
        well = floor <= 1e-9
        if np.any(well):
            worst_sum = max(worst_sum, float(np.max(err[well])))
        floor_points += int(np.count_nonzero(~well))
        floor_ok += int(np.count_nonzero(err[~well] <= floor[~well]))
        below = trunc.truncated_mean_below(d, x)
        above = trunc.truncated_mean_above(d, x)
        bracket_ok &= bool(np.all((0.0 < below) & (below < x) & (x < above) & (above < 1.0)))
        F = d.cdf(x)
        keep = F > 1e-300
        direct = d.pdf(x[keep]) / F[keep]
        closed = a * b * x[keep] ** -(b + 1.0)
        worst_tau = max(worst_tau, float(np.max(np.abs(trunc.reversed_hazard(d, x[keep]) / closed - 1.0))),
                        float(np.max(np.abs(direct / closed - 1.0))))
    elapsed = time.perf_counter() - t0
    ok = record(
        4, "truncated-moment identities",
        worst_sum <= 1e-9 and floor_ok == floor_points and bracket_ok and worst_tau <= 1e-10,
        f"max rel |g f + h f - E X| = {worst_sum:.2e} (tol 1e-9) where rounding allows it; "
        f"{floor_ok}/{floor_points} points with |log h| + |log f| > {1e-9 / (4 * EPS):.1e} within "
        f"4 eps x that magnitude; bracketing {'holds' if bracket_ok else 'FAILS'} "
        f"on 200 points x 9 pairs, max rel tau error = {worst_tau:.2e} (tol 1e-10)",
        elapsed, 5.0,
    )
    assert ok, RESULTS[4]


def _batch_se(values: np.ndarray, batches: int, stat) -> np.ndarray:
    chunks = np.array_split(values, batches)
    per = np.array([stat(c) for c in chunks])
    return per.std(axis=0, ddof=1) / math.sqrt(batches)


def test_05_pwm_and_lmoments():
    from unitgompertz import DataSample

    t0 = time.perf_counter()
    worst_pwm = 0.0
    for a, b in GRID:
        d = UnitGompertz(a, b)
        for r in range(4):
            q, _ = integrate(lambda t: t * d.cdf(t) ** r * d.pdf(t), 0.0, 1.0, 0.0, rel_tol=1e-13)
            worst_pwm = max(worst_pwm, abs(pwm(d, r) - q) / q)

    d = UnitGompertz(1.0, 1.0)
    pop = population_lmoments(d)
    mc, se = mc_half_abs_difference(d, 1_000_000, 20240605)
    z_l2 = abs(mc - pop.lambda2) / se

    draws = d.draw(1_000_000, 20240606)
    sample = sample_lmoments(DataSample(draws))
    est = np.array([sample.lambda1, sample.lambda2, sample.lambda3, sample.lambda4])
    truth = np.array([pop.lambda1, pop.lambda2, pop.lambda3, pop.lambda4])

    def lm4(chunk):
        s = sample_lmoments(DataSample(chunk))
        return [s.lambda1, s.lambda2, s.lambda3, s.lambda4]

    se_s = _batch_se(draws, 100, lm4)
    z_s = np.abs(est - truth) / se_s
    elapsed = time.perf_counter() - t0
    ok = record(
        5, "PWMs and L-moments",
        worst_pwm <= 1e-8 and z_l2 <= 3.0 and bool(np.all(z_s <= 3.0)),
        f"max rel |pwm - quadrature| = {worst_pwm:.2e} (tol 1e-8, r=0..3, 9 pairs); "
        f"lambda2 vs E|X1-X2|/2 (1e6 pairs): {z_l2:.2f} SE; sample lambda1..4 (1e6 draws): "
        + ", ".join(f"{z:.2f}" for z in z_s) + " SE (limit 3)",
        elapsed, 60.0,
    )
    assert ok, RESULTS[5]


def test_06_fit_inverse_consistency():
    t0 = time.perf_counter()
    worst = 0.0
    for a, b in GRID:
        fitted, _ = fit_by_lmoments(population_lmoments(UnitGompertz(a, b)))
        worst = max(worst, abs(fitted.alpha / a - 1.0), abs(fitted.beta / b - 1.0))
    fitted, _ = fit_by_lmoments(UnitGompertz(1.0, 1.0).sample(100_000, 2024))
    dev = max(abs(fitted.alpha - 1.0), abs(fitted.beta - 1.0))
    elapsed = time.perf_counter() - t0
    ok = record(
        6, "L-moment fit inverse consistency",
        worst <= 1e-6 and dev <= 0.05,
        f"exact targets: max rel parameter error = {worst:.2e} (tol 1e-6, 9 pairs); "
        f"1e5 draws of (1,1): ({fitted.alpha:.4f}, {fitted.beta:.4f}), max deviation {dev:.4f} (envelope 0.05)",
        elapsed, 60.0,
    )
    assert ok, RESULTS[6]


def test_07_entropy_anchor_values():
    t0 = time.perf_counter()
    d = UnitGompertz(1.0, 1.0)
    gamma_3_2 = upper_inc_gamma(3.0, 2.0).value
    j2, _ = integrate(lambda t: d.pdf(t) ** 2, 0.0, 1.0, 0.0, rel_tol=1e-13)
    errs_closed = [abs(tsallis(d, 2.0).value + 0.25), abs(mathai_haubold(d, 0.0).value + 0.25)]
    errs_quad = [abs(tsallis(d, 2.0, "quadrature").value + 0.25),
                 abs(mathai_haubold(d, 0.0, "quadrature").value + 0.25)]
    elapsed = time.perf_counter() - t0
    ok = record(
        7, "entropy anchor values at (1,1)",
        max(errs_closed) <= 1e-10 and max(errs_quad) <= 1e-7
        and abs(gamma_3_2 - 10 * math.exp(-2)) <= 1e-14 and abs(j2 - 1.25) <= 1e-12,
        f"|I_T(2) + 1/4|, |I_MH(0) + 1/4|: closed {max(errs_closed):.1e} (tol 1e-10), "
        f"quadrature {max(errs_quad):.1e} (tol 1e-7); Gamma(3;2) - 10/e^2 = {gamma_3_2 - 10 * math.exp(-2):.1e}; "
        f"quadrature of f^2 = {j2:.15f}",
        elapsed, 5.0,
    )
    assert ok, RESULTS[7]


def test_08_entropy_agreement_and_shannon_limit():
    t0 = time.perf_counter()
    worst = 0.0
    bracket_gap = 0.0
    for a, b in GRID:
        d = UnitGompertz(a, b)
        for g in (0.25, 0.5, 1.5, 2.0, 3.0):
            c, q = tsallis(d, g).value, tsallis(d, g, "quadrature").value
            worst = max(worst, abs(c - q) / max(1.0, abs(q)))
        for g in (-1.0, 0.0, 0.5, 1.5):
            c, q = mathai_haubold(d, g).value, mathai_haubold(d, g, "quadrature").value
            worst = max(worst, abs(c - q) / max(1.0, abs(q)))
        h, _ = shannon_entropy(d)
        for family in (tsallis, mathai_haubold):
            lo, hi = sorted((family(d, 1 - 1e-3).value, family(d, 1 + 1e-3).value))
            bracket_gap = max(bracket_gap, lo - h, h - hi, 0.0)
    elapsed = time.perf_counter() - t0
    ok = record(
        8, "entropy closed form vs quadrature, Shannon limit",
        worst <= 1e-7 and bracket_gap <= 1e-2,
        f"max |closed - quadrature| / max(1, |value|) = {worst:.2e} (tol 1e-7) over both order grids x 9 pairs; "
        f"Shannon entropy outside the gamma = 1 -/+ 1e-3 bracket by at most {bracket_gap:.1e} (tol 1e-2)",
        elapsed, 30.0,
    )
    assert ok, RESULTS[8]


MH_COMPARISON_SCHEMA = {
    "type": "object",
    "required": ["schema", "params", "results"],
    "properties": {
        "schema": {"const": 1},
        "results": {
            "type": "object",
            "required": ["reports"],
            "properties": {
                "reports": {
                    "type": "array",
                    "contains": {
                        "type": "object",
                        "required": ["quantity", "informational", "extra"],
                        "properties": {
                            "quantity": {"type": "string", "pattern": "^mathai_haubold_paper_formula"},
                            "informational": {"const": True},
                            "extra": {
                                "type": "object",
                                "required": ["paper_closed_form", "derived_closed_form", "quadrature",
                                             "derived_rel_diff"],
                            },
                        },
                    },
                }
            },
        },
    },
}


def test_09_mh_discrepancy_report(tmp_path, capsys):
    t0 = time.perf_counter()
    out = tmp_path / "verify.json"
    code = cli_main(["verify", "--alpha", "1", "--beta", "1", "--format", "json", "--out", str(out)])
    capsys.readouterr()
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, MH_COMPARISON_SCHEMA)
    rows = [r for r in doc["results"]["reports"] if r["quantity"].startswith("mathai_haubold_paper_formula")]
    worst_derived = max(r["extra"]["derived_rel_diff"] for r in rows)
    paper_gap = min(abs(r["extra"]["paper_closed_form"] - r["extra"]["quadrature"]) for r in rows)
    elapsed = time.perf_counter() - t0
    ok = record(
        9, "published MH display vs derived form vs quadrature",
        code == 0 and len(rows) == 4 and worst_derived <= 1e-7,
        f"{len(rows)} comparison reports present in verify JSON (schema-checked); derived form within "
        f"{worst_derived:.1e} of quadrature (tol 1e-7); published display off by at least {paper_gap:.3g}; "
        f"verify exit code {code}",
        elapsed, 60.0,
    )
    assert ok, RESULTS[9]


def test_10_incomplete_gamma_kernel():
    t0 = time.perf_counter()
    s_grid = np.concatenate([-np.geomspace(20.0, 1e-3, 25), [0.0], np.geomspace(1e-3, 20.0, 25)])
    x_grid = np.geomspace(1e-6, 100.0, 41)
    misses = []
    for s in s_grid:
        for x in x_grid:
            r = upper_inc_gamma_recurrence_check(s, x)
            if r > 1e-10:
                misses.append((s, x, r, recurrence_condition(s, x)))
    total = len(s_grid) * len(x_grid)
    # a residual above 1e-10 is accepted only at the rounding floor of an ill-conditioned point
    within_floor = sum(r <= 8.0 * EPS * c for _, _, r, c in misses)
    recurrence_ok = within_floor == len(misses)
    min_cond = min((c for *_, c in misses), default=math.nan)
    s_range = (min((m[0] for m in misses), default=math.nan), max((m[0] for m in misses), default=math.nan))
    x_max = max((m[1] for m in misses), default=math.nan)

    worst_quad = 0.0
    for s in (-50.0, -20.0, -7.5, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0, 7.5, 20.0, 50.0):
        for x in (1e-8, 1e-5, 1e-2, 0.3, 1.0, 2.0, 5.0, 30.0, 150.0, 700.0):
            worst_quad = max(worst_quad, abs(upper_inc_gamma(s, x).log_abs - log_upper_gamma_by_quadrature(s, x)))
    elapsed = time.perf_counter() - t0
    ok = record(
        10, "incomplete gamma kernel",
        recurrence_ok and worst_quad <= 1e-9,
        f"recurrence residual <= 1e-10 on {total - len(misses)}/{total} grid points; the other "
        f"{len(misses)} (s in [{s_range[0]:.3g}, {s_range[1]:.3g}], x <= {x_max:.2g}, condition >= {min_cond:.2g}) "
        f"have {within_floor} within 8 eps x condition; "
        f"max |log Gamma - log quadrature| = {worst_quad:.1e} (tol 1e-9) over |s| <= 50, 1e-8 <= x <= 700",
        elapsed, 10.0,
    )
    assert ok, RESULTS[10]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

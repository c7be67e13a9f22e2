"""Independent checks of the closed forms: quadrature and seeded Monte Carlo.

:func:`verify_all` runs a battery of comparisons and returns one
:class:`OracleReport` per quantity.  A failure while computing one quantity
is recorded as ``inconclusive`` and the battery carries on.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import entropy, lmom, trunc
from .dist import UnitGompertz
from .errors import ArgumentError
from .quadrature import integrate

__all__ = [
    "integrate",
    "mc_expectation",
    "mc_half_abs_difference",
    "shannon_entropy",
    "OracleReport",
    "VerifyConfig",
    "verify_all",
    "all_agree",
    "format_table",
    "MC_SIGMAS",
]

MC_SIGMAS = 3.0
MIN_MC_N = 100
QUAD_REL_TOL = 1e-13


def mc_expectation(
    d: UnitGompertz,
    statistic: Callable,
    n: int,
    seed: int,
) -> tuple[float, float]:
    """Monte-Carlo mean of ``statistic(X)`` and its standard error.

    ``statistic`` may be vectorized; scalar callables are looped.
    """
    if isinstance(n, bool) or int(n) != n or n < MIN_MC_N:
        raise ArgumentError(f"Monte Carlo needs n >= {MIN_MC_N}, got {n!r}")
    x = d.draw(int(n), seed)
    try:
        y = np.asarray(statistic(x), dtype=float)
        if y.shape != x.shape:
            raise ValueError
    except (TypeError, ValueError):
        y = np.array([float(statistic(float(v))) for v in x])
    return float(y.mean()), float(y.std(ddof=1) / math.sqrt(n))


def mc_half_abs_difference(d: UnitGompertz, n: int, seed: int) -> tuple[float, float]:
    """Monte-Carlo estimate of ``E|X1 - X2| / 2`` (which equals ``lambda2``) from ``n`` pairs."""
    if isinstance(n, bool) or int(n) != n or n < MIN_MC_N:
        raise ArgumentError(f"Monte Carlo needs n >= {MIN_MC_N}, got {n!r}")
    x = d.draw(2 * int(n), seed)
    y = 0.5 * np.abs(x[0::2] - x[1::2])
    return float(y.mean()), float(y.std(ddof=1) / math.sqrt(n))


def shannon_entropy(d: UnitGompertz, rel_tol: float = 1e-12) -> tuple[float, float]:
    """``-integral f log f`` by quadrature; returns ``(value, error_estimate)``."""

    def integrand(x: np.ndarray) -> np.ndarray:
        lp = d._log_pdf_inside(x)
        return -np.exp(lp) * lp

    return integrate(integrand, 0.0, 1.0, 0.0, rel_tol=rel_tol)


@dataclass
class OracleReport:
    """Closed form versus quadrature (and optionally Monte Carlo) for one quantity.

    ``rel_diff`` is ``abs_diff / scale`` where ``scale`` is ``|quadrature|``,
    floored at ``extra["scale_floor"]`` when one is set (entropies sit near
    zero).  ``verdict`` is ``agree`` iff ``rel_diff <= tolerance`` and the
    Monte-Carlo estimate, when present, lies within ``MC_SIGMAS`` standard
    errors of the closed form.  ``informational`` reports do not count
    towards :func:`all_agree`.
    """

    quantity: str
    closed_form: Optional[float] = None
    quadrature: Optional[float] = None
    quad_err: Optional[float] = None
    monte_carlo: Optional[float] = None
    mc_stderr: Optional[float] = None
    mc_n: Optional[int] = None
    mc_seed: Optional[int] = None
    abs_diff: Optional[float] = None
    rel_diff: Optional[float] = None
    tolerance: float = 1e-8
    verdict: str = "inconclusive"
    informational: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _judge(report: OracleReport, scale_floor: float = 0.0) -> OracleReport:
    ok = True
    if report.quadrature is not None:
        report.abs_diff = abs(report.closed_form - report.quadrature)
        scale = max(abs(report.quadrature), scale_floor)
        report.rel_diff = report.abs_diff / scale if scale > 0.0 else math.inf
        ok = report.rel_diff <= report.tolerance
        if scale_floor:
            report.extra["scale_floor"] = scale_floor
    if report.monte_carlo is not None:
        z = abs(report.closed_form - report.monte_carlo) / report.mc_stderr if report.mc_stderr > 0 else math.inf
        report.extra["mc_z"] = z
        ok = ok and z <= MC_SIGMAS
    report.verdict = "agree" if ok else "disagree"
    return report


@dataclass(frozen=True)
class VerifyConfig:
    """What :func:`verify_all` checks.  Empty tuples switch items off."""

    normalization: bool = True
    mean: bool = True
    pwm_orders: Sequence[int] = (0, 1, 2, 3)
    lmoments: bool = True
    trunc_points: Sequence[float] = (0.1, 0.3, 0.5, 0.7, 0.9)
    tsallis_gammas: Sequence[float] = (0.25, 0.5, 1.5, 2.0, 3.0)
    mh_gammas: Sequence[float] = (-1.0, 0.0, 0.5, 1.5)
    mh_paper_comparison: bool = True
    mc_n: int = 1_000_000
    seed: int = 20240601
    tolerance: float = 1e-8
    entropy_tolerance: float = 1e-7

    @classmethod
    def empty(cls) -> VerifyConfig:
        return cls(
            normalization=False,
            mean=False,
            pwm_orders=(),
            lmoments=False,
            trunc_points=(),
            tsallis_gammas=(),
            mh_gammas=(),
            mh_paper_comparison=False,
        )


def _log_cdf(d: UnitGompertz, x: np.ndarray) -> np.ndarray:
    return -d.alpha * np.expm1(-d.beta * np.log(x))


def _quad(f: Callable, a: float = 0.0, b: float = 1.0) -> tuple[float, float]:
    return integrate(f, a, b, 0.0, rel_tol=QUAD_REL_TOL)


def _quad_pwm(d: UnitGompertz, r: int) -> tuple[float, float]:
    return _quad(lambda x: np.exp(np.log(x) + r * _log_cdf(d, x) + d._log_pdf_inside(x)))


def _log_quad(log_integrand: Callable, a: float, b: float) -> tuple[float, float]:
    """``(log I, relative error)`` for ``I = integral_a^b exp(log_integrand)``.

    The integrand is shifted by its maximum over a probe grid so that
    integrals far outside double range still come out as finite logs.  A log
    integrand of magnitude ``L`` carries about ``L * eps`` relative noise, so
    the quadrature target is loosened accordingly.
    """
    probe = np.concatenate([a + (b - a) * np.geomspace(1e-12, 1.0, 200, endpoint=False),
                            b - (b - a) * np.geomspace(1e-12, 1.0, 200, endpoint=False)])
    li = log_integrand(probe)
    shift = float(np.max(li))
    magnitude = float(np.max(np.abs(li[li > shift - 745.0])))
    rel_tol = max(QUAD_REL_TOL, 8.0 * np.finfo(float).eps * magnitude)
    v, e = integrate(lambda t: np.exp(log_integrand(t) - shift), a, b, 0.0, rel_tol=rel_tol)
    return shift + math.log(v), e / v


def _log_density_ratio(d: UnitGompertz, t: np.ndarray, x: float) -> np.ndarray:
    """``log f(t) - log f(x)`` without subtracting two large exponents."""
    lr = np.log(t / x)
    return -d.alpha * x**-d.beta * np.expm1(-d.beta * lr) - (1.0 + d.beta) * lr


def _log_tail_ratio(d: UnitGompertz, t: np.ndarray, x: float) -> np.ndarray:
    """``log f(t) - log F(x)``, same device."""
    return (d.log_alpha + d.log_beta - (1.0 + d.beta) * np.log(t)
            - d.alpha * x**-d.beta * np.expm1(-d.beta * np.log(t / x)))


def _partial_first_moment(d: UnitGompertz, lo: float, hi: float) -> tuple[float, float]:
    return _quad(lambda t: np.exp(np.log(t) + d._log_pdf_inside(t)), lo, hi)


_LOG_REPRESENTABLE = 700.0


def _compare_logs(rep: OracleReport, log_closed: float, log_quad: float, rel_err: float) -> OracleReport:
    """Compare in linear scale when both sides are representable, else in logs."""
    if max(abs(log_closed), abs(log_quad)) < _LOG_REPRESENTABLE:
        rep.closed_form, rep.quadrature = math.exp(log_closed), math.exp(log_quad)
        rep.quad_err = rel_err * rep.quadrature
        return _judge(rep)
    # a log difference of delta is a relative difference of about delta
    rep.quantity = "log_" + rep.quantity
    rep.closed_form, rep.quadrature, rep.quad_err = log_closed, log_quad, rel_err
    rep.abs_diff = rep.rel_diff = abs(log_closed - log_quad)
    rep.extra["scale"] = "log"
    rep.verdict = "agree" if rep.rel_diff <= rep.tolerance else "disagree"
    return rep


def verify_all(d: UnitGompertz, config: Optional[VerifyConfig] = None) -> list[OracleReport]:
    """Run the verification battery for ``d`` and return the reports in a fixed order."""
    cfg = VerifyConfig() if config is None else config
    items: list[tuple[str, Callable[[OracleReport], OracleReport]]] = []
    seeds = iter(range(cfg.seed, cfg.seed + 10_000))

    def add(name: str, tol: float, run: Callable[[OracleReport], OracleReport], informational: bool = False):
        items.append((name, lambda: run(OracleReport(name, tolerance=tol, informational=informational))))

    def with_mc(rep: OracleReport, stat: Callable, seed: int) -> None:
        rep.monte_carlo, rep.mc_stderr = mc_expectation(d, stat, cfg.mc_n, seed)
        rep.mc_n, rep.mc_seed = cfg.mc_n, seed

    if cfg.normalization:
        def run_norm(rep):
            rep.closed_form = 1.0
            rep.quadrature, rep.quad_err = _quad(lambda x: np.exp(d._log_pdf_inside(x)))
            return _judge(rep)
        add("normalization", cfg.tolerance, run_norm)

    if cfg.mean:
        seed_mean = next(seeds)

        def run_mean(rep):
            rep.closed_form = d.mean
            rep.quadrature, rep.quad_err = _partial_first_moment(d, 0.0, 1.0)
            with_mc(rep, lambda x: x, seed_mean)
            return _judge(rep)
        add("mean", cfg.tolerance, run_mean)

    for r in cfg.pwm_orders:
        seed_r = next(seeds)

        def run_pwm(rep, r=int(r), seed_r=seed_r):
            rep.closed_form = lmom.pwm(d, r)
            rep.quadrature, rep.quad_err = _quad_pwm(d, r)
            with_mc(rep, lambda x: x * d.cdf(x) ** r, seed_r)
            return _judge(rep)
        add(f"pwm[r={int(r)}]", cfg.tolerance, run_pwm)

    if cfg.lmoments:
        seed_l2 = next(seeds)
        cache: dict = {}

        def lmoment_pair():
            if not cache:
                pop = lmom.population_lmoments(d)
                quads = [_quad_pwm(d, r) for r in range(4)]
                q = lmom.LMomentSet.from_pwms(*(v for v, _ in quads), source="quadrature")
                cache["pop"], cache["quad"] = pop, q
                cache["err"] = max(e for _, e in quads)
            return cache["pop"], cache["quad"], cache["err"]

        for k in (1, 2, 3, 4):
            def run_l(rep, k=k):
                pop, q, err = lmoment_pair()
                rep.closed_form = getattr(pop, f"lambda{k}")
                rep.quadrature = getattr(q, f"lambda{k}")
                rep.quad_err = err
                if k == 2:
                    rep.monte_carlo, rep.mc_stderr = mc_half_abs_difference(d, cfg.mc_n, seed_l2)
                    rep.mc_n, rep.mc_seed = cfg.mc_n, seed_l2
                    rep.extra["mc_statistic"] = "E|X1-X2|/2"
                return _judge(rep)
            add(f"lambda{k}", cfg.tolerance, run_l)

    for x in cfg.trunc_points:
        x = float(x)

        def run_g(rep, x=x):
            lq, e = _log_quad(lambda t: np.log(t) + _log_density_ratio(d, t, x), 0.0, x)
            return _compare_logs(rep, float(trunc.log_g_factor(d, x)), lq, e)

        def run_h(rep, x=x):
            lq, e = _log_quad(lambda t: np.log(t) + _log_density_ratio(d, t, x), x, 1.0)
            return _compare_logs(rep, float(trunc.log_h_factor(d, x)), lq, e)

        def run_below(rep, x=x):
            lq, e = _log_quad(lambda t: np.log(t) + _log_tail_ratio(d, t, x), 0.0, x)
            rep.closed_form = trunc.truncated_mean_below(d, x)
            rep.quadrature = math.exp(lq)
            rep.quad_err = e * rep.quadrature
            return _judge(rep)

        def run_above(rep, x=x):
            rep.closed_form = trunc.truncated_mean_above(d, x)
            log_s = math.log(float(d.survival(x)))
            lq, e = _log_quad(lambda t: np.log(t) + d._log_pdf_inside(t) - log_s, x, 1.0)
            rep.quadrature = math.exp(lq)
            rep.quad_err = e * rep.quadrature
            return _judge(rep)

        add(f"g_factor[x={x:g}]", cfg.tolerance, run_g)
        add(f"h_factor[x={x:g}]", cfg.tolerance, run_h)
        add(f"truncated_mean_below[x={x:g}]", cfg.tolerance, run_below)
        add(f"truncated_mean_above[x={x:g}]", cfg.tolerance, run_above)

    def entropy_runner(family: Callable, gamma: float) -> Callable:
        def run(rep):
            c = family(d, gamma)
            q = family(d, gamma, "quadrature")
            rep.closed_form, rep.quadrature, rep.quad_err = c.value, q.value, q.error
            return _judge(rep, scale_floor=1.0)
        return run

    for g in cfg.tsallis_gammas:
        add(f"tsallis[gamma={float(g):g}]", cfg.entropy_tolerance, entropy_runner(entropy.tsallis, float(g)))
    for g in cfg.mh_gammas:
        add(f"mathai_haubold[gamma={float(g):g}]", cfg.entropy_tolerance,
            entropy_runner(entropy.mathai_haubold, float(g)))

    if cfg.mh_paper_comparison:
        for g in cfg.mh_gammas:
            def run_paper(rep, g=float(g)):
                paper = entropy.mathai_haubold(d, g, paper_formula=True).value
                derived = entropy.mathai_haubold(d, g).value
                quad = entropy.mathai_haubold(d, g, "quadrature")
                rep.closed_form, rep.quadrature, rep.quad_err = paper, quad.value, quad.error
                scale = max(abs(quad.value), 1.0)
                derived_rel = abs(derived - quad.value) / scale
                rep.extra.update(
                    paper_closed_form=paper,
                    derived_closed_form=derived,
                    quadrature=quad.value,
                    derived_rel_diff=derived_rel,
                    derived_agrees=bool(derived_rel <= cfg.entropy_tolerance),
                )
                return _judge(rep, scale_floor=1.0)
            add(f"mathai_haubold_paper_formula[gamma={float(g):g}]", cfg.entropy_tolerance, run_paper,
                informational=True)

    reports = []
    for name, job in items:
        try:
            reports.append(job())
        except (ArithmeticError, ValueError, OverflowError) as exc:
            # UnitGompertzError subclasses land here too
            reports.append(OracleReport(name, verdict="inconclusive", extra={"error": f"{type(exc).__name__}: {exc}"}))
    return reports


def all_agree(reports: Sequence[OracleReport]) -> bool:
    """True iff every non-informational report agrees."""
    return all(r.verdict == "agree" for r in reports if not r.informational)


def format_table(reports: Sequence[OracleReport]) -> str:
    def num(v: Optional[float]) -> str:
        return "-" if v is None else f"{v:.17g}"

    header = ("quantity", "closed_form", "quadrature", "monte_carlo", "rel_diff", "tolerance", "verdict")
    rows = [header]
    for r in reports:
        verdict = r.verdict + (" (info)" if r.informational else "")
        rows.append((r.quantity, num(r.closed_form), num(r.quadrature), num(r.monte_carlo),
                     "-" if r.rel_diff is None else f"{r.rel_diff:.2e}", f"{r.tolerance:.0e}", verdict))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows)

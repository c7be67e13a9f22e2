"""Truncated first moments of the unit-Gompertz law and density reconstruction.

With ``tau(x) = f(x) / F(x)`` (reversed hazard) and ``r(x) = f(x) / (1 - F(x))``
(hazard), the conditional means factor as

    E(X | X <= x) = g(x) * tau(x),    E(X | X >= x) = h(x) * r(x),

where, with ``s = 1 - 1/beta`` and ``z = alpha / x**beta``,

    g(x) = alpha**(1/beta) / (alpha*beta) * exp(z) * x**(1+beta) * Gamma(s; z)
    h(x) = alpha**(1/beta) / (alpha*beta) * exp(z) * x**(1+beta)
           * (Gamma(s; alpha) - Gamma(s; z)).

Conversely a density is recovered from ``g`` through
``f'/f = (x - g') / g`` and from ``h`` through ``f'/f = -(x + h') / h``;
:func:`reconstruct_density_from_g` and :func:`reconstruct_density_from_h`
carry that out numerically for an arbitrary callable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import chebyshev as C

from .data import DataSample
from .dist import UnitGompertz
from .errors import ArgumentError, ConvergenceError, DomainError, NumericalOverflowError, PrecisionError
from .quadrature import integrate
from .special import log_upper_inc_gamma_scaled

__all__ = [
    "reversed_hazard",
    "hazard",
    "g_factor",
    "h_factor",
    "log_g_factor",
    "log_h_factor",
    "truncated_mean_below",
    "truncated_mean_above",
    "ReconstructionResult",
    "reconstruct_density_from_g",
    "reconstruct_density_from_h",
    "GofReport",
    "characterization_gof",
]

# relative gap Gamma(s;alpha) - Gamma(s;z) below which h(x) is refused
MIN_RELATIVE_GAP = 1e-13

_MUST_REACH = 2.0**-5
_LOG_NEGLIGIBLE = math.log(1e-17)


def _open_unit(x: float, name: str = "x") -> float:
    x = float(x)
    if not (math.isfinite(x) and 0.0 < x < 1.0):
        raise DomainError(f"{name} must lie in (0, 1), got {x!r}")
    return x


def _vectorize(fn: Callable[[UnitGompertz, float], float]) -> Callable:
    def wrapper(d: UnitGompertz, x):
        if np.ndim(x) == 0:
            return fn(d, x)
        arr = np.asarray(x, dtype=float)
        return np.array([fn(d, float(v)) for v in arr.ravel()]).reshape(arr.shape)

    wrapper.__name__ = fn.__name__
    wrapper.__qualname__ = fn.__qualname__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _log_prefactor(d: UnitGompertz, log_x: float) -> float:
    # log[alpha**(1/beta) / (alpha*beta) * x**(1+beta)]
    return d.log_alpha / d.beta - d.log_alpha - d.log_beta + (1.0 + d.beta) * log_x


def _log_g(d: UnitGompertz, x: float) -> float:
    lx = math.log(x)
    z = math.exp(d.log_alpha - d.beta * lx)
    return _log_prefactor(d, lx) + log_upper_inc_gamma_scaled(1.0 - 1.0 / d.beta, z)


def _log_h(d: UnitGompertz, x: float) -> float:
    lx = math.log(x)
    s = 1.0 - 1.0 / d.beta
    z = math.exp(d.log_alpha - d.beta * lx)
    shift = d.alpha * math.expm1(-d.beta * lx)  # z - alpha, exact near x = 1
    log_a = log_upper_inc_gamma_scaled(s, d.alpha)
    log_z = log_upper_inc_gamma_scaled(s, z)
    # Gamma(s; z) / Gamma(s; alpha) < 1 because z > alpha
    gap = -math.expm1(log_z - log_a - shift)
    if gap < MIN_RELATIVE_GAP:
        raise PrecisionError(
            f"h({x!r}) needs Gamma(s;alpha) - Gamma(s;z) with relative gap {gap:.3g} < {MIN_RELATIVE_GAP:g}"
        )
    return _log_prefactor(d, lx) + log_a + shift + math.log(gap)


@_vectorize
def reversed_hazard(d: UnitGompertz, x: float) -> float:
    """``f(x)/F(x)``, which simplifies to ``alpha * beta * x**-(beta + 1)``.

    Also defined at ``x = 1`` where ``F = 1``.
    """
    x = float(x)
    if not (math.isfinite(x) and 0.0 < x <= 1.0):
        raise DomainError(f"x must lie in (0, 1], got {x!r}")
    return math.exp(d.log_alpha + d.log_beta - (d.beta + 1.0) * math.log(x))


@_vectorize
def hazard(d: UnitGompertz, x: float) -> float:
    """``f(x) / (1 - F(x))``."""
    x = _open_unit(x)
    surv = d.survival(x)
    if surv == 0.0:
        raise NumericalOverflowError(f"survival underflows at x={x!r}; hazard is not representable")
    return d.pdf(x) / surv


@_vectorize
def g_factor(d: UnitGompertz, x: float) -> float:
    """The factor ``g`` in ``E(X | X <= x) = g(x) * tau(x)``."""
    return math.exp(_log_g(d, _open_unit(x)))


@_vectorize
def log_g_factor(d: UnitGompertz, x: float) -> float:
    """``log g(x)``; finite wherever ``g`` itself would under- or overflow."""
    return _log_g(d, _open_unit(x))


@_vectorize
def log_h_factor(d: UnitGompertz, x: float) -> float:
    """``log h(x)``; finite where ``h`` overflows (far left tail of steep laws)."""
    return _log_h(d, _open_unit(x))


@_vectorize
def h_factor(d: UnitGompertz, x: float) -> float:
    """The factor ``h`` in ``E(X | X >= x) = h(x) * r(x)``.

    Raises:
        PrecisionError: when ``x`` is so close to 1 that the gamma difference
            is cancellation noise.
    """
    x = _open_unit(x)
    log_h = _log_h(d, x)
    if log_h > 709.0:
        raise NumericalOverflowError(f"h({x!r}) = exp({log_h:.1f}) overflows")
    return math.exp(log_h)


@_vectorize
def truncated_mean_below(d: UnitGompertz, x: float) -> float:
    """``E(X | X <= x)``."""
    x = _open_unit(x)
    return math.exp(_log_g(d, x) + d.log_alpha + d.log_beta - (d.beta + 1.0) * math.log(x))


@_vectorize
def truncated_mean_above(d: UnitGompertz, x: float) -> float:
    """``E(X | X >= x)``, assembled as ``exp(log h + log f - log(1 - F))``."""
    x = _open_unit(x)
    surv = d.survival(x)
    if surv == 0.0:
        raise NumericalOverflowError(f"survival underflows at x={x!r}")
    return math.exp(_log_h(d, x) + d.log_pdf(x) - math.log(surv))


# -- reconstruction -----------------------------------------------------------


@dataclass(frozen=True)
class ReconstructionResult:
    grid: np.ndarray
    density_values: np.ndarray
    normalization_constant: float
    max_rel_error_vs_closed_form: Optional[float] = None
    log_density: np.ndarray = field(default=None, repr=False)
    lower_cutoff: float = 0.0


def _five_point_derivative(fn: Callable[[float], float], x: float) -> tuple[float, float]:
    """(fn(x), fn'(x)) from a central five-point stencil."""
    step = min(1e-6, 1e-3 * x, 1e-3 * (1.0 - x))
    f0 = fn(x)
    f1p, f1m = fn(x + step), fn(x - step)
    f2p, f2m = fn(x + 2 * step), fn(x - 2 * step)
    return f0, (8.0 * (f1p - f1m) - (f2p - f2m)) / (12.0 * step)


class _PiecewiseCheb:
    """Piecewise Chebyshev antiderivative of a log-derivative, anchored at 0.5."""

    DEGREE = 24
    MAX_SPLITS = 8

    def __init__(self, psi: Callable[[float], float], tol: float) -> None:
        self.psi = psi
        self.tol = tol
        self.pieces: list[tuple[float, float, np.ndarray]] = []  # (a, b, antiderivative coeffs)

    def _fit(self, a: float, b: float) -> np.ndarray:
        nodes = np.cos(np.pi * (np.arange(self.DEGREE + 1) + 0.5) / (self.DEGREE + 1))
        t = 0.5 * (a + b) + 0.5 * (b - a) * nodes
        y = np.array([self.psi(float(v)) for v in t])
        if not np.all(np.isfinite(y)):
            raise DomainError(f"log-derivative is not finite on [{a:.3g}, {b:.3g}]")
        return C.chebfit(nodes, y, self.DEGREE)

    def cover(
        self, a: float, b: float, depth: int = 0, parent_tail: float = math.inf
    ) -> list[tuple[float, float, np.ndarray]]:
        """Adaptive fit of psi on [a, b]; returns pieces with antiderivatives (zero at a).

        A piece is accepted once its tail coefficients, scaled by the width,
        fall below ``tol``; or when halving stopped shrinking the tail, which
        means the remaining tail is evaluation noise rather than resolution.
        """
        coef = self._fit(a, b)
        tail = float(np.max(np.abs(coef[-3:])))
        resolved = tail * (b - a) <= self.tol
        noise_floor = tail > 0.1 * parent_tail
        if not (resolved or noise_floor) and depth < self.MAX_SPLITS:
            m = 0.5 * (a + b)
            return self.cover(a, m, depth + 1, tail) + self.cover(m, b, depth + 1, tail)
        # antiderivative in the mapped variable, times the half-width
        anti = C.chebint(coef, lbnd=-1.0) * (0.5 * (b - a))
        return [(a, b, anti)]


def _reconstruct(
    psi: Callable[[float], float],
    grid_size: int,
    quad_tol: float,
    reference: Optional[UnitGompertz],
) -> ReconstructionResult:
    if isinstance(grid_size, bool) or int(grid_size) != grid_size or grid_size < 16:
        raise ArgumentError(f"grid_size must be an integer >= 16, got {grid_size!r}")
    grid_size = int(grid_size)
    cheb = _PiecewiseCheb(psi, quad_tol)

    upper_edges = [0.5] + [1.0 - 2.0**-k for k in range(2, 21)] + [1.0 - 2.0**-24]
    pieces: list[tuple[float, float, np.ndarray]] = []
    for a, b in zip(upper_edges[:-1], upper_edges[1:]):
        pieces += cheb.cover(a, b)

    log_mass = -math.inf  # log of the largest (density * width) seen so far
    running = 0.0
    for a, b, anti in pieces:
        log_mass = max(log_mass, running + math.log(b - a))
        running += float(C.chebval(1.0, anti))

    # walk down from the anchor at least to 2**-5 (below the 0.05 comparison
    # window) and then on until the density is increasing and x * density(x)
    # is negligible against the mass seen so far
    lower: list[tuple[float, float, np.ndarray]] = []
    running = 0.0  # log-density at the current lower edge
    b = 0.5
    cutoff = None
    for _ in range(1000):
        a = 0.5 * b
        try:
            new = cheb.cover(a, b)
        except (ArithmeticError, DomainError):
            if b > _MUST_REACH:
                raise
            # the callable over/underflows only where the density is negligible
            cutoff = b
            break
        for pa, pb, anti in reversed(new):
            running -= float(C.chebval(1.0, anti))
            lower.append((pa, pb, anti))
        log_mass = max(log_mass, running + math.log(b - a))
        b = a
        if b <= _MUST_REACH and math.log(b) + running < log_mass + _LOG_NEGLIGIBLE:
            try:
                increasing = psi(b) > 0.0
            except (ArithmeticError, DomainError):
                increasing = True
            if increasing:
                cutoff = b
                break
    if cutoff is None:
        raise ConvergenceError("density reconstruction could not locate a negligible lower tail",
                               partial={"lower_edge": b, "log_density": running})
    pieces = list(reversed(lower)) + pieces

    starts = np.array([p[0] for p in pieces])
    ends = np.array([p[1] for p in pieces])
    # log-density at each piece start, anchored to 0 at x = 0.5
    totals = np.array([float(C.chebval(1.0, p[2])) for p in pieces])
    anchor = int(np.searchsorted(starts, 0.5))
    base = np.zeros(len(pieces))
    base[anchor:] = np.concatenate([[0.0], np.cumsum(totals[anchor:-1])])
    base[:anchor] = -np.cumsum(totals[:anchor][::-1])[::-1]

    def log_density(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(ends, x, side="left"), 0, len(pieces) - 1)
        out = np.full_like(x, -np.inf)  # below the cutoff the mass is negligible
        for i in np.unique(idx):
            sel = (idx == i) & (x >= cutoff)
            a, b, anti = pieces[i]
            t = (2.0 * x[sel] - a - b) / (b - a)
            out[sel] = base[i] + C.chebval(t, anti)
        return out

    top = float(ends[-1])
    mass, _ = integrate(lambda x: np.exp(log_density(x)), cutoff, top, 0.0, rel_tol=quad_tol)
    # the sliver (top, 1) is closed with the boundary value of the density
    mass += math.exp(float(log_density(np.array([top]))[0])) * (1.0 - top)

    grid = (np.arange(grid_size) + 0.5) / grid_size
    log_vals = log_density(grid) - math.log(mass)
    values = np.exp(log_vals)

    max_err = None
    if reference is not None:
        inner = (grid >= 0.05) & (grid <= 0.95)
        truth = reference.log_pdf(grid[inner])
        max_err = float(np.max(np.abs(np.expm1(log_vals[inner] - truth))))
    return ReconstructionResult(
        grid=grid,
        density_values=values,
        normalization_constant=1.0 / mass,
        max_rel_error_vs_closed_form=max_err,
        log_density=log_vals,
        lower_cutoff=cutoff,
    )


def _checked(fn: Callable[[float], float], label: str) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        v = float(fn(x))
        if not v > 0.0:
            raise DomainError(f"{label}({x!r}) = {v!r} is not positive")
        return v

    return wrapped


def reconstruct_density_from_g(
    g: Callable[[float], float],
    grid_size: int = 64,
    quad_tol: float = 1e-10,
    *,
    reference: Optional[UnitGompertz] = None,
) -> ReconstructionResult:
    """Recover a density on (0, 1) from its lower truncated-mean factor ``g``.

    Solves ``f'/f = (x - g'(x)) / g(x)`` with ``g'`` from central differences,
    integrates from the anchor 0.5 and normalizes to unit mass.  When
    ``reference`` is given the result is compared against its closed-form pdf
    on the grid points inside [0.05, 0.95].
    """
    g = _checked(g, "g")

    def psi(x: float) -> float:
        gx, dg = _five_point_derivative(g, x)
        return (x - dg) / gx

    return _reconstruct(psi, grid_size, quad_tol, reference)


def reconstruct_density_from_h(
    h: Callable[[float], float],
    grid_size: int = 64,
    quad_tol: float = 1e-10,
    *,
    reference: Optional[UnitGompertz] = None,
) -> ReconstructionResult:
    """Recover a density on (0, 1) from its upper truncated-mean factor ``h``.

    Same procedure as :func:`reconstruct_density_from_g` with
    ``f'/f = -(x + h'(x)) / h(x)``.
    """
    h = _checked(h, "h")

    def psi(x: float) -> float:
        hx, dh = _five_point_derivative(h, x)
        return -(x + dh) / hx

    return _reconstruct(psi, grid_size, quad_tol, reference)


# -- goodness of fit ----------------------------------------------------------


@dataclass(frozen=True)
class GofReport:
    statistic: float
    levels: np.ndarray
    points: np.ndarray
    empirical: np.ndarray
    theoretical: np.ndarray
    n: int
    alpha: float
    beta: float

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "n": self.n,
            "params": {"alpha": self.alpha, "beta": self.beta},
            "curve": [
                {"level": float(l), "x": float(x), "empirical": float(e), "theoretical": float(t)}
                for l, x, e, t in zip(self.levels, self.points, self.empirical, self.theoretical)
            ],
        }


def characterization_gof(data: DataSample, fitted: UnitGompertz, n_eval: int = 7) -> GofReport:
    """Compare empirical and fitted ``E(X | X <= x)`` at empirical quantiles.

    Evaluation points are the sample quantiles at levels spread evenly over
    [0.2, 0.8] (the median alone when ``n_eval == 1``).  The statistic is the
    largest absolute gap between the two curves.
    """
    if data.n < 20:
        raise ArgumentError(f"goodness of fit needs at least 20 observations, got {data.n}")
    if isinstance(n_eval, bool) or int(n_eval) != n_eval or n_eval < 1:
        raise ArgumentError(f"n_eval must be a positive integer, got {n_eval!r}")
    levels = np.array([0.5]) if n_eval == 1 else np.linspace(0.2, 0.8, int(n_eval))
    values = data.values
    points = np.quantile(values, levels)
    counts = np.searchsorted(values, points, side="right")
    csum = np.concatenate([[0.0], np.cumsum(values)])
    empirical = csum[counts] / counts
    theoretical = np.array([truncated_mean_below(fitted, float(x)) for x in points])
    stat = float(np.max(np.abs(empirical - theoretical)))
    return GofReport(stat, levels, points, empirical, theoretical, data.n, fitted.alpha, fitted.beta)

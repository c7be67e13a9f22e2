"""The unit-Gompertz distribution on (0, 1).

A Gompertz variable ``Y`` with shape ``alpha`` and scale ``beta`` mapped
through ``X = exp(-Y)`` has

    pdf(x) = alpha * beta * exp(-alpha * (x**-beta - 1)) / x**(1 + beta)
    cdf(x) = exp(-alpha * (x**-beta - 1))

for ``0 < x < 1``.  The term ``x**-beta - 1`` is always evaluated as
``expm1(-beta * log(x))`` so that the cdf keeps full relative precision
near ``x = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import numpy.typing as npt

from .data import DataSample
from .errors import ArgumentError, DomainError
from .special import log_upper_inc_gamma_scaled

__all__ = ["UnitGompertz"]

ArrayOrFloat = Union[float, np.ndarray]

_SMALLEST_BELOW_ONE = float(np.nextafter(1.0, 0.0))


def _as_array(x: npt.ArrayLike, name: str = "x") -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr, arr.ndim == 0


def _out(arr: np.ndarray, scalar: bool) -> ArrayOrFloat:
    return float(arr) if scalar else arr


@dataclass(frozen=True)
class UnitGompertz:
    """Unit-Gompertz distribution with shape ``alpha > 0`` and ``beta > 0``.

    Instances are immutable; every method is a pure function of the
    parameters and its arguments.
    """

    alpha: float
    beta: float
    log_alpha: float = field(init=False, repr=False)
    log_beta: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise DomainError(f"{name} must be a real number, got {value!r}") from None
            if not (math.isfinite(value) and value > 0.0):
                raise DomainError(f"{name} must be a finite positive number, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "log_alpha", math.log(self.alpha))
        object.__setattr__(self, "log_beta", math.log(self.beta))

    # -- densities -----------------------------------------------------

    def _log_pdf_inside(self, x: np.ndarray) -> np.ndarray:
        lx = np.log(x)
        return (
            self.log_alpha
            + self.log_beta
            - self.alpha * np.expm1(-self.beta * lx)
            - (1.0 + self.beta) * lx
        )

    def log_pdf(self, x: npt.ArrayLike) -> ArrayOrFloat:
        """Log density; strict on the open support."""
        arr, scalar = _as_array(x)
        if np.any((arr <= 0.0) | (arr >= 1.0)):
            raise DomainError("log_pdf is only defined for x in (0, 1)")
        return _out(self._log_pdf_inside(arr), scalar)

    def pdf(self, x: npt.ArrayLike) -> ArrayOrFloat:
        """Density; zero outside (0, 1)."""
        arr, scalar = _as_array(x)
        inside = (arr > 0.0) & (arr < 1.0)
        out = np.zeros_like(arr)
        out[inside] = np.exp(self._log_pdf_inside(arr[inside]))
        return _out(out, scalar)

    def _exponent(self, x: np.ndarray) -> np.ndarray:
        # alpha * (x**-beta - 1) >= 0 on (0, 1)
        return self.alpha * np.expm1(-self.beta * np.log(x))

    def cdf(self, x: npt.ArrayLike) -> ArrayOrFloat:
        arr, scalar = _as_array(x)
        out = np.where(arr >= 1.0, 1.0, 0.0)
        inside = (arr > 0.0) & (arr < 1.0)
        out[inside] = np.exp(-self._exponent(arr[inside]))
        return _out(out, scalar)

    def survival(self, x: npt.ArrayLike) -> ArrayOrFloat:
        """``1 - cdf(x)`` without cancellation near ``x = 1``."""
        arr, scalar = _as_array(x)
        out = np.where(arr <= 0.0, 1.0, 0.0)
        inside = (arr > 0.0) & (arr < 1.0)
        out[inside] = -np.expm1(-self._exponent(arr[inside]))
        return _out(out, scalar)

    def quantile(self, u: npt.ArrayLike) -> ArrayOrFloat:
        """Inverse cdf ``(1 - log(u) / alpha) ** (-1 / beta)``."""
        arr, scalar = _as_array(u, "u")
        if np.any((arr <= 0.0) | (arr >= 1.0)):
            raise DomainError("quantile levels must lie in (0, 1)")
        x = np.exp(-np.log1p(-np.log(arr) / self.alpha) / self.beta)
        return _out(x, scalar)

    # -- sampling ------------------------------------------------------

    def draw(self, n: int, seed: int) -> np.ndarray:
        """``n`` i.i.d. draws in generation order (inverse-transform sampling).

        Uniforms are ``(k + 1/2) / 2**53`` with ``k`` from numpy's PCG64, so
        they never touch 0 or 1.  Draws that round onto 1.0 in double
        precision (possible only when ``alpha * beta`` is large) are moved to
        the largest double below 1.
        """
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ArgumentError(f"sample size must be a positive integer, got {n!r}")
        rng = np.random.default_rng(seed)
        k = rng.integers(0, 2**53, size=int(n), dtype=np.int64)
        u = (k.astype(float) + 0.5) * 2.0**-53
        x = np.exp(-np.log1p(-np.log(u) / self.alpha) / self.beta)
        return np.clip(x, np.finfo(float).tiny, _SMALLEST_BELOW_ONE)

    def sample(self, n: int, seed: int) -> DataSample:
        return DataSample(self.draw(n, seed))

    # -- moments -------------------------------------------------------

    def raw_moment(self, s: float) -> float:
        """``E[X**s] = alpha**(s/beta) * exp(alpha) * Gamma(1 - s/beta; alpha)``."""
        s = float(s)
        if not (math.isfinite(s) and s > 0.0):
            raise ArgumentError(f"moment order must be positive, got {s!r}")
        order = s / self.beta
        return math.exp(order * self.log_alpha + log_upper_inc_gamma_scaled(1.0 - order, self.alpha))

    @property
    def mean(self) -> float:
        return self.raw_moment(1.0)

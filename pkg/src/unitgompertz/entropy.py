"""Tsallis and Mathai-Haubold entropies of the unit-Gompertz law.

Both families are functionals of the power integral

    J(q) = integral_0^1 f(x)**q dx
         = alpha**((1-q)/beta) * beta**(q-1) * q**(-(q + beta*q - 1)/beta)
           * exp(alpha*q) * Gamma((q + beta*q - 1)/beta; alpha*q)

(substitute ``t = alpha * q * x**-beta``).  Tsallis uses ``q = gamma`` and
Mathai-Haubold uses ``q = 2 - gamma``:

    I_T(gamma)  = (1 - J(gamma)) / (gamma - 1)
    I_MH(gamma) = (J(2 - gamma) - 1) / (gamma - 1)

A second, published closed form for I_MH is kept behind ``paper_formula``
for comparison only; it does not agree with quadrature.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .dist import UnitGompertz
from .errors import ArgumentError
from .quadrature import integrate
from .special import log_upper_inc_gamma_scaled

__all__ = [
    "EntropyValue",
    "log_power_integral",
    "power_integral",
    "power_integral_quadrature",
    "tsallis",
    "mathai_haubold",
    "QUAD_REL_TOL",
]

METHODS = ("closed_form", "quadrature")
QUAD_REL_TOL = 1e-12


@dataclass(frozen=True)
class EntropyValue:
    """An entropy value with its provenance.

    ``error`` is the quadrature error estimate propagated to the entropy, or
    ``None`` for closed-form values.
    """

    value: float
    method: str
    gamma: float
    family: str
    error: Optional[float] = None
    paper_formula: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def log_power_integral(d: UnitGompertz, q: float) -> float:
    """``log J(q)`` for ``q > 0`` from the incomplete-gamma closed form."""
    q = float(q)
    if not (math.isfinite(q) and q > 0.0):
        raise ArgumentError(f"power-integral order must be positive, got {q!r}")
    a, b = d.alpha, d.beta
    s = (q + b * q - 1.0) / b
    return (
        (1.0 - q) / b * d.log_alpha
        + (q - 1.0) * d.log_beta
        - s * math.log(q)
        + log_upper_inc_gamma_scaled(s, a * q)
    )


def power_integral(d: UnitGompertz, q: float) -> float:
    return math.exp(log_power_integral(d, q))


def power_integral_quadrature(d: UnitGompertz, q: float, rel_tol: float = QUAD_REL_TOL) -> tuple[float, float]:
    """``(J(q), error_estimate)`` by adaptive quadrature of ``f**q``."""
    q = float(q)
    if not (math.isfinite(q) and q > 0.0):
        raise ArgumentError(f"power-integral order must be positive, got {q!r}")

    def integrand(x: np.ndarray) -> np.ndarray:
        return np.exp(q * d._log_pdf_inside(x))

    return integrate(integrand, 0.0, 1.0, 0.0, rel_tol=rel_tol)


def _paper_mh_log_integral(d: UnitGompertz, gamma: float) -> float:
    # published display, transcribed as printed
    a, b = d.alpha, d.beta
    q = 2.0 - gamma
    s = (1.0 + b) * (1.0 - gamma) / b + 1.0
    return (
        (1.0 - b) * (gamma - 1.0 + b) / b * d.log_alpha
        + (1.0 - gamma) * d.log_beta
        - (1.0 + b - b * b) / b * math.log(q)
        + log_upper_inc_gamma_scaled(s, a * q)
    )


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ArgumentError(f"method must be one of {METHODS}, got {method!r}")


def tsallis(d: UnitGompertz, gamma: float, method: str = "closed_form") -> EntropyValue:
    """Tsallis entropy ``(1 - J(gamma)) / (gamma - 1)`` for ``gamma > 0``, ``gamma != 1``."""
    _check_method(method)
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma <= 0.0 or gamma == 1.0:
        raise ArgumentError(f"Tsallis order must satisfy gamma > 0 and gamma != 1, got {gamma!r}")
    if method == "closed_form":
        # 1 - J = -expm1(log J) keeps precision when J is close to 1
        value = -math.expm1(log_power_integral(d, gamma)) / (gamma - 1.0)
        return EntropyValue(value, method, gamma, "tsallis")
    j, err = power_integral_quadrature(d, gamma)
    return EntropyValue((1.0 - j) / (gamma - 1.0), method, gamma, "tsallis", err / abs(gamma - 1.0))


def mathai_haubold(
    d: UnitGompertz,
    gamma: float,
    method: str = "closed_form",
    *,
    paper_formula: bool = False,
) -> EntropyValue:
    """Mathai-Haubold entropy ``(J(2 - gamma) - 1) / (gamma - 1)`` for ``gamma < 2``, ``gamma != 1``.

    Args:
        paper_formula: use the published closed-form display instead of the
            substitution-derived one.  Only meaningful with
            ``method="closed_form"``; kept for comparison reports.
    """
    _check_method(method)
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma >= 2.0 or gamma == 1.0:
        raise ArgumentError(f"Mathai-Haubold order must satisfy gamma < 2 and gamma != 1, got {gamma!r}")
    if paper_formula and method != "closed_form":
        raise ArgumentError("paper_formula applies to the closed form only")
    q = 2.0 - gamma
    if method == "closed_form":
        log_j = _paper_mh_log_integral(d, gamma) if paper_formula else log_power_integral(d, q)
        value = math.expm1(log_j) / (gamma - 1.0)
        return EntropyValue(value, method, gamma, "mathai_haubold", paper_formula=paper_formula)
    j, err = power_integral_quadrature(d, q)
    return EntropyValue((j - 1.0) / (gamma - 1.0), method, gamma, "mathai_haubold", err / abs(gamma - 1.0))

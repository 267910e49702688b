"""Closed-form radius and confidence calculators for the high-probability
deviation bounds.

Every calculator returns a :class:`BoundReport` with the radius, the
confidence level and the inputs it was computed from. Natural logarithms
throughout. Confidence levels are reported unclamped: tiny M or N can make
a bound vacuous (confidence <= 0), which is flagged rather than hidden.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

THM1_EXP = "Thm1-exp"
THM1_CHEB = "Thm1-cheb"
THM2 = "Thm2"
COR1 = "Cor1"
COR2 = "Cor2"
COR_BERN = "CorBern"


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    radius: float
    confidence: float
    inputs: dict = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return self.confidence <= 0.0

    def to_json(self) -> str:
        return json.dumps(
            {
                "bound_id": self.bound_id,
                "radius": self.radius,
                "confidence": self.confidence,
                "vacuous": self.vacuous,
                "inputs": self.inputs,
            },
            indent=2,
        )

    def summary(self) -> str:
        flag = " (vacuous)" if self.vacuous else ""
        return (
            f"{self.bound_id}: deviation < {self.radius:.6g} "
            f"with probability >= {self.confidence:.6g}{flag}"
        )


def _log_cap(m: int, p: int) -> float:
    cap = max(m, 1 + p)
    if cap < 2:
        raise ValueError("max{M, 1+p} must be at least 2 for a positive logarithm")
    return math.log(cap)


def thm1_exp_radius(d_n: float, m: int, p: int) -> BoundReport:
    """Exponential-inequality radius sqrt(3/2 * D_N log(max{M,1+p}) / M)."""
    if d_n < 0 or m < 1 or p < 0:
        raise ValueError("need D_N >= 0, M >= 1, p >= 0")
    log_cap = _log_cap(m, p)
    radius = math.sqrt(1.5 * d_n * log_cap / m)
    confidence = 1.0 - 2.0 / max(m, 1 + p) ** 2
    return BoundReport(THM1_EXP, radius, confidence, {"D_N": d_n, "M": m, "p": p})


def thm1_cheb_radius(c_n: float, delta_n: float, m: int, alpha: float) -> BoundReport:
    """Chebyshev-style radius sqrt((1 + min{|C_N|, |Delta_N|}) / (alpha M))."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if m < 1:
        raise ValueError("M must be at least 1")
    radius = math.sqrt((1.0 + min(abs(c_n), abs(delta_n))) / (alpha * m))
    return BoundReport(
        THM1_CHEB,
        radius,
        1.0 - alpha,
        {"C_N": c_n, "Delta_N": delta_n, "M": m, "alpha": alpha},
    )


def thm2_radius(d_n_restricted: float, m: int, p: int, r_n: float) -> BoundReport:
    """Restricted-support radius sqrt(27/2 * D_N(X0) log(max{M,1+p}) / M).

    Requires r(N) <= sqrt(D_N(X0) log(max{M,1+p}) / M).
    """
    if d_n_restricted < 0 or m < 1 or p < 0:
        raise ValueError("need D_N(X0) >= 0, M >= 1, p >= 0")
    if not (0.0 < r_n < 1.0):
        raise ValueError("r(N) must lie in (0, 1)")
    log_cap = _log_cap(m, p)
    rhs = math.sqrt(d_n_restricted * log_cap / m)
    if r_n > rhs:
        raise ValueError(
            f"precondition violated: r(N)={r_n} exceeds sqrt(D_N(X0) log(...)/M)={rhs}"
        )
    radius = math.sqrt(13.5 * d_n_restricted * log_cap / m)
    confidence = 1.0 - r_n - 4.0 / max(m, 1 + p) ** 2
    return BoundReport(
        THM2,
        radius,
        confidence,
        {"D_N_X0": d_n_restricted, "M": m, "p": p, "r_N": r_n},
    )


def cor1_radius(m_max: int, alpha_max: float, n: int) -> BoundReport:
    """Degree-distribution radius (1+M_max+alpha_max) sqrt(3/2 log(N)/N)."""
    if n < 3:
        raise ValueError("N must be at least 3")
    if m_max < 0 or alpha_max < 0:
        raise ValueError("M_max and alpha_max must be non-negative")
    radius = (1.0 + m_max + alpha_max) * math.sqrt(1.5 * math.log(n) / n)
    return BoundReport(
        COR1,
        radius,
        1.0 - 6.0 / n**2,
        {"M_max": m_max, "alpha_max": alpha_max, "N": n},
    )


def cor2_radius(m_max: int, alpha_max: float, n: int, beta: float) -> BoundReport:
    """Shared-partner radius (1+M_max+alpha_max) sqrt(3/2 log(N)/N^beta)
    under the minimum-density condition with exponent beta > 0."""
    if n < 3:
        raise ValueError("N must be at least 3")
    if beta <= 0:
        raise ValueError("beta must be positive")
    if m_max < 0 or alpha_max < 0:
        raise ValueError("M_max and alpha_max must be non-negative")
    radius = (1.0 + m_max + alpha_max) * math.sqrt(1.5 * math.log(n) / n**beta)
    return BoundReport(
        COR2,
        radius,
        1.0 - 11.0 / n**2,
        {"M_max": m_max, "alpha_max": alpha_max, "N": n, "beta": beta},
    )


def cor_bern_bound(
    expected_degrees: Sequence[float], n: int, alpha: float
) -> BoundReport:
    """Bernoulli-graph bound: Delta_N <= (2/N) sum_i E d_i, giving radius
    sqrt((1 + Delta-bound) / (alpha N))."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    degs = list(expected_degrees)
    if len(degs) != n:
        raise ValueError("expected_degrees must have length N")
    if any(d < 0 for d in degs):
        raise ValueError("expected degrees must be non-negative")
    delta_bound = 2.0 * sum(degs) / n
    radius = math.sqrt((1.0 + delta_bound) / (alpha * n))
    return BoundReport(
        COR_BERN,
        radius,
        1.0 - alpha,
        {"Delta_bound": delta_bound, "N": n, "alpha": alpha},
    )

"""Computable theoretical quantities: rate constants, leading regret terms,
and minimax envelopes.

These are the leading terms only; the analyses' lower-order O(.) terms have
unknown constants and are deliberately omitted, so none of these values is a
certified upper bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .env import BanditInstance


@dataclass(frozen=True)
class BoundReport:
    """Leading-term diagnostics for one instance (not certified bounds)."""

    asymptotic_rate: float
    ms_leading: float
    msplus_leading: float
    minimax_log_t: float
    minimax_log_k: float
    sigma2: float
    c: float
    horizon: int
    n_arms: int

    def to_dict(self) -> dict:
        return asdict(self)


def _positive_gaps(instance: BanditInstance) -> list[float]:
    return [float(g) for g in instance.gaps if g > 0.0]


def asymptotic_rate(instance: BanditInstance, sigma2: float) -> float:
    """The instance constant sum_{gap > 0} 2 sigma2 / gap (0 if all arms tie)."""
    return sum(2.0 * sigma2 / g for g in _positive_gaps(instance))


def _clamped_log(arg: float) -> float:
    # Floor the argument at e so the log never dips below 1, mirroring the
    # "safe assumption" regime the leading terms are derived in.
    return math.log(max(arg, math.e))


def ms_leading_term(
    instance: BanditInstance,
    sigma2: float,
    c: float,
    horizon: float,
    *,
    half_width_arg: bool = True,
) -> float:
    """Leading regret term sum 2 sigma2 (1+c)^2 ln(T gap^2 / (2 sigma2)) / gap.

    ``half_width_arg`` selects the 2*sigma2 denominator inside the log
    (default); False uses plain sigma2. Both appear in the analysis and the
    discrepancy is left to the caller.
    """
    if horizon < 1 or c <= 0.0:
        raise ValueError("need horizon >= 1 and c > 0")
    denom = 2.0 * sigma2 if half_width_arg else sigma2
    scale = 2.0 * sigma2 * (1.0 + c) ** 2
    return sum(scale * _clamped_log(horizon * g * g / denom) / g for g in _positive_gaps(instance))


def msplus_leading_term(instance: BanditInstance, sigma2: float, c: float, horizon: float) -> float:
    """Leading term with the doubly-logarithmic argument
    ln((T gap^2 / (2 sigma2)) * (1 + ln(1 + T gap^2 / (2 sigma2))))."""
    if horizon < 1 or c <= 0.0:
        raise ValueError("need horizon >= 1 and c > 0")
    scale = 2.0 * sigma2 * (1.0 + c) ** 2
    total = 0.0
    for g in _positive_gaps(instance):
        base = horizon * g * g / (2.0 * sigma2)
        total += scale * _clamped_log(base * (1.0 + math.log1p(base))) / g
    return total


def minimax_envelope(k: int, horizon: float, sigma: float, flavor: str = "logT") -> float:
    """sigma * sqrt(K T ln T) or sigma * sqrt(K T ln K); no hidden constant."""
    if k < 2 or horizon < 2:
        raise ValueError("need K >= 2 and horizon >= 2")
    if flavor == "logT":
        return sigma * math.sqrt(k * horizon * math.log(horizon))
    if flavor == "logK":
        return sigma * math.sqrt(k * horizon * math.log(k))
    raise ValueError(f"unknown flavor {flavor!r}; expected 'logT' or 'logK'")


def bound_report(instance: BanditInstance, sigma2: float, c: float, horizon: int) -> BoundReport:
    sigma = math.sqrt(sigma2)
    return BoundReport(
        asymptotic_rate=asymptotic_rate(instance, sigma2),
        ms_leading=ms_leading_term(instance, sigma2, c, horizon),
        msplus_leading=msplus_leading_term(instance, sigma2, c, horizon),
        minimax_log_t=minimax_envelope(instance.k, horizon, sigma, "logT"),
        minimax_log_k=minimax_envelope(instance.k, horizon, sigma, "logK"),
        sigma2=sigma2,
        c=c,
        horizon=horizon,
        n_arms=instance.k,
    )

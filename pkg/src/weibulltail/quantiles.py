"""Extreme quantiles and return levels from a Weibull tail fit."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .estimators import Method, SelectionResult, TailFit, _as_sample, log_spacings, ls_fit, select_k

__all__ = [
    "QuantileRequest",
    "quantile_bias_reduced",
    "quantile_weissman",
    "return_level",
    "return_period_probability",
]


@dataclass(frozen=True)
class QuantileRequest:
    """Target exceedance probability ``p`` extrapolated from the anchor ``X_{n-k+1,n}``."""

    p: float
    fit: TailFit
    anchor: float
    n: int
    k: int

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not self.anchor > 0:
            raise ValueError(f"anchor must be positive, got {self.anchor}")
        if not 1 <= self.k < self.n:
            raise ValueError(f"k must be in [1, {self.n - 1}], got {self.k}")

    @classmethod
    def from_sample(cls, sample, fit: TailFit, p: float) -> "QuantileRequest":
        sample = _as_sample(sample)
        return cls(p=p, fit=fit, anchor=sample.upper(fit.k), n=sample.n, k=fit.k)

    @property
    def log_ratio(self) -> float:
        """``u = log(1/p) / log(n/k)``."""
        return math.log(1.0 / self.p) / math.log(self.n / self.k)


def quantile_weissman(req: QuantileRequest) -> float:
    """``X_{n-k+1,n} * u**theta`` with ``u = log(1/p)/log(n/k)``."""
    return req.anchor * req.log_ratio**req.fit.theta


def quantile_bias_reduced(req: QuantileRequest, b_hat: float | None = None, rho_hat: float = -1.0) -> float:
    """Weissman-type quantile with the second-order correction ``exp(b (u**rho - 1)/rho)``.

    ``b_hat`` defaults to the bias estimate carried by a least-squares fit.
    """
    if b_hat is None:
        if req.fit.b is None:
            raise ValueError("bias-reduced quantile needs b_hat or a least-squares fit")
        b_hat = req.fit.b
    if not rho_hat < 0:
        raise ValueError(f"rho_hat must be negative, got {rho_hat}")
    u = req.log_ratio
    if not u > 0:
        raise ValueError(f"log(1/p)/log(n/k) must be positive, got {u}")
    return quantile_weissman(req) * math.exp(b_hat * (u**rho_hat - 1.0) / rho_hat)


def return_period_probability(years: float, record_years: float, n: int) -> float:
    """Per-observation exceedance probability of the ``years`` return level.

    With ``n`` exceedances over ``record_years`` the rate is ``n/record_years``
    per year, so ``p = record_years / (years * n)``.
    """
    if not (years > 0 and record_years > 0):
        raise ValueError("years and record_years must be positive")
    p = record_years / (years * n)
    if not 0 < p < 1:
        raise ValueError(f"return period too short for the data resolution (p = {p})")
    return p


def return_level(
    data,
    years: float,
    record_years: float,
    selection: SelectionResult | None = None,
    bias_reduced: bool = False,
) -> float:
    """N-year return level from threshold exceedances collected over ``record_years``.

    Uses ``theta_check`` at the selected ``k`` in the Weissman-type form. With
    ``bias_reduced=True`` the least-squares ``theta_hat``, ``b_hat`` at the same
    ``k`` feed :func:`quantile_bias_reduced` instead.
    """
    sample = _as_sample(data)
    if selection is None:
        selection = select_k(sample)
    p = return_period_probability(years, record_years, sample.n)
    k = selection.k_hat
    if bias_reduced:
        fit = ls_fit(log_spacings(sample, k))
        return quantile_bias_reduced(QuantileRequest.from_sample(sample, fit, p))
    fit = TailFit(Method.CHECK, selection.theta_at_k_hat, k, sample.n)
    return quantile_weissman(QuantileRequest.from_sample(sample, fit, p))

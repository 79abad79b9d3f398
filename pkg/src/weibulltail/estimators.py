"""Weibull tail-coefficient estimators built on upper log-spacings.

Three estimators of ``theta`` are provided for a fixed number ``k`` of
upper order statistics:

* ``theta_tilde``: ratio of log-excesses to log-log excesses,
* ``theta_check``: mean of the rescaled log-spacings ``Z_j``,
* ``ls_fit``: least-squares fit of ``Z_j`` on ``x_j = log(n/k)/log(n/j)``
  (second-order index fixed at -1), returning a bias-reduced ``theta`` and
  the bias amplitude ``b``.

:func:`estimator_curves` evaluates all of them for every ``k`` at once with
the compiled kernel, and :func:`select_k` picks ``k`` by minimising the
plug-in asymptotic mean squared error of ``theta_check``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _backend
from .distributions import DistributionSpec

__all__ = [
    "EstimatorCurves",
    "LogSpacings",
    "Method",
    "Sample",
    "SelectionResult",
    "TailFit",
    "amse_hat",
    "amse_true",
    "design_points",
    "estimator_curves",
    "log_spacings",
    "ls_fit",
    "select_k",
    "theta_check",
    "theta_tilde",
]


class Method(str, Enum):
    TILDE = "tilde"
    CHECK = "check"
    LEAST_SQUARES = "ls"


class Sample:
    """Positive observations kept sorted ascending."""

    __slots__ = ("values",)

    def __init__(self, values):
        x = np.array(values, dtype=float).ravel()
        if x.size == 0:
            raise ValueError("sample is empty")
        if not np.all(np.isfinite(x)) or np.any(x <= 0):
            raise ValueError("sample values must be finite and strictly positive")
        x.sort()
        x.flags.writeable = False
        self.values = x

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self):
        return self.values.size

    def __repr__(self):
        return f"Sample(n={self.n})"

    def upper(self, i: int) -> float:
        """``X_{n-i+1,n}``, the i-th largest observation (1-based)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"order index must be in [1, {self.n}], got {i}")
        return float(self.values[self.n - i])

    def log_desc(self, count: int) -> np.ndarray:
        """Logs of the ``count`` largest observations, largest first."""
        return np.log(self.values[::-1][:count])


def _as_sample(data) -> Sample:
    return data if isinstance(data, Sample) else Sample(data)


@dataclass(frozen=True)
class LogSpacings:
    z: np.ndarray
    n: int
    k: int


@dataclass(frozen=True)
class TailFit:
    method: Method
    theta: float
    k: int
    n: int
    b: float | None = None
    rho: float | None = None

    def as_dict(self) -> dict:
        out = {"method": self.method.value, "theta": self.theta}
        if self.b is not None:
            out["b"] = self.b
        out.update(k=self.k, n=self.n)
        return out


@dataclass(frozen=True)
class SelectionResult:
    k_hat: int
    ks: np.ndarray
    amse: np.ndarray
    theta_at_k_hat: float

    @property
    def amse_curve(self) -> np.ndarray:
        """``(k, amse_hat)`` rows over the search grid."""
        return np.column_stack([self.ks, self.amse])


def _check_k(k: int, n: int, k_min: int = 1):
    if not k_min <= k <= n - 1:
        raise ValueError(f"k must be in [{k_min}, {n - 1}] for n={n}, got {k}")


def log_spacings(sample, k: int) -> LogSpacings:
    """``Z_j = j * log(n/j) * (log X_{n-j+1,n} - log X_{n-j,n})`` for j = 1..k."""
    sample = _as_sample(sample)
    n = sample.n
    _check_k(k, n)
    u = sample.log_desc(k + 1)
    j = np.arange(1, k + 1)
    z = j * np.log(n / j) * (u[:-1] - u[1:])
    return LogSpacings(z=z, n=n, k=k)


def theta_tilde(sample, k: int) -> TailFit:
    sample = _as_sample(sample)
    n = sample.n
    _check_k(k, n)
    u = sample.log_desc(k)
    i = np.arange(1, k + 1)
    g = np.log(np.log(n / i))
    den = math.fsum(g - g[-1])
    if den == 0.0:
        raise ValueError("theta_tilde needs k >= 2 (denominator vanishes)")
    theta = math.fsum(u - u[-1]) / den
    return TailFit(Method.TILDE, theta, k, n)


def theta_check(zs: LogSpacings) -> TailFit:
    """Mean of the log-spacings; the exponential-model MLE ignoring bias."""
    if zs.k < 1:
        raise ValueError("need at least one log-spacing")
    return TailFit(Method.CHECK, math.fsum(zs.z) / zs.k, zs.k, zs.n)


def design_points(n: int, k: int) -> np.ndarray:
    """``x_j = log(n/k) / log(n/j)``, j = 1..k; increasing with ``x_k = 1``."""
    _check_k(k, n, k_min=2)
    j = np.arange(1, k + 1)
    x = math.log(n / k) / np.log(n / j)
    x[-1] = 1.0
    return x


def ls_fit(zs: LogSpacings) -> TailFit:
    """Least-squares fit of ``Z_j = theta + b * x_j`` (rho fixed to -1)."""
    if zs.k < 2:
        raise ValueError("ls_fit needs k >= 2; the bias slope is unidentifiable at k = 1")
    x = design_points(zs.n, zs.k)
    z = np.asarray(zs.z, dtype=float)
    xbar = math.fsum(x) / zs.k
    zbar = math.fsum(z) / zs.k
    dx = x - xbar
    b = math.fsum(dx * z) / math.fsum(dx * dx)
    theta = zbar - b * xbar
    return TailFit(Method.LEAST_SQUARES, theta, zs.k, zs.n, b=b, rho=-1.0)


def amse_hat(fit: TailFit) -> float:
    """Plug-in AMSE of ``theta_check``: ``theta_hat**2/k + (b_hat * mean(x))**2``."""
    if fit.method is not Method.LEAST_SQUARES or fit.b is None:
        raise ValueError("amse_hat needs a least-squares fit")
    xbar = math.fsum(design_points(fit.n, fit.k)) / fit.k
    return fit.theta**2 / fit.k + (fit.b * xbar) ** 2


def amse_true(spec: DistributionSpec, n: int, k: int) -> float:
    """AMSE of ``theta_check`` under the true ``theta``, ``b`` and ``rho``."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    var = spec.theta**2 / k
    if math.isinf(spec.rho):
        return var
    lk = math.log(n / k)
    j = np.arange(1, k + 1)
    mean_pow = math.fsum((np.log(n / j) / lk) ** spec.rho) / k
    return var + (float(spec.bias(lk)) * mean_pow) ** 2


@dataclass(frozen=True)
class EstimatorCurves:
    """All estimators for k = 1..k_max on one sample; index ``k - 1``."""

    n: int
    theta_tilde: np.ndarray
    theta_check: np.ndarray
    theta_hat: np.ndarray
    b_hat: np.ndarray
    amse_hat: np.ndarray

    @property
    def k_max(self) -> int:
        return self.theta_check.size

    @property
    def ks(self) -> np.ndarray:
        return np.arange(1, self.k_max + 1)


def _kernel_inputs(log_desc: np.ndarray, n: int, k_max: int):
    j = np.arange(1, k_max + 1)
    lnj = np.log(n / j)
    return np.ascontiguousarray(log_desc[: k_max + 1]), lnj, np.log(lnj)


def curves_from_logs(log_desc: np.ndarray, n: int, k_max: int, kernel=None) -> EstimatorCurves:
    """Kernel entry point taking the descending log order statistics directly."""
    if not 1 <= k_max <= n - 1:
        raise ValueError(f"k_max must be in [1, {n - 1}], got {k_max}")
    kernel = kernel or _backend.tail_curves
    out = kernel(*_kernel_inputs(log_desc, n, k_max), k_max)
    return EstimatorCurves(n, *out)


def estimator_curves(sample, k_max: int | None = None, kernel=None) -> EstimatorCurves:
    """Evaluate every estimator for k = 1..k_max in a single O(k_max) pass."""
    sample = _as_sample(sample)
    n = sample.n
    if k_max is None:
        k_max = n - 1
    return curves_from_logs(sample.log_desc(k_max + 1), n, k_max, kernel)


def select_k(sample, k_min: int = 2, k_max: int | None = None) -> SelectionResult:
    """Choose k minimising the plug-in AMSE over the integer grid [k_min, k_max].

    The default grid is ``[2, min(350, n-1)]``. Ties go to the smallest k.
    """
    sample = _as_sample(sample)
    n = sample.n
    if k_max is None:
        k_max = min(350, n - 1)
    if k_min < 2 or k_max > n - 1 or k_min > k_max:
        raise ValueError(f"selection grid [{k_min}, {k_max}] must satisfy 2 <= k_min <= k_max <= {n - 1}")
    curves = estimator_curves(sample, k_max)
    ks = np.arange(k_min, k_max + 1)
    amse = curves.amse_hat[k_min - 1 :]
    i = int(np.argmin(amse))
    k_hat = int(ks[i])
    return SelectionResult(k_hat, ks, amse.copy(), float(curves.theta_check[k_hat - 1]))

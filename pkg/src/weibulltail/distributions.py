"""Study distributions with a Weibull-type tail and their second-order truth.

Each family knows its Weibull tail-coefficient ``theta``, its second-order
index ``rho`` and the rate function ``b(x)`` driving the bias of the
estimators. Sampling is done through :class:`SeededStream` so that a
replication is fully determined by ``(master_seed, stream_index)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = [
    "AbsNormal",
    "DistributionSpec",
    "Gamma",
    "HallD",
    "SeededStream",
    "Weibull",
    "cdf",
    "hall_h",
    "hall_h_inverse",
    "parse_spec",
    "sample",
    "true_bias",
    "FAMILIES",
]


@dataclass(frozen=True)
class SeededStream:
    """One independent random stream per replication.

    The generator is Philox (counter-based) keyed through a
    :class:`numpy.random.SeedSequence` whose spawn key is the stream index,
    so distinct indices give decorrelated streams by construction.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must fit in 64 bits, got {self.master_seed}")
        if self.stream_index < 0:
            raise ValueError(f"stream_index must be nonnegative, got {self.stream_index}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.Philox(seq))


class DistributionSpec:
    """Base class for the simulatable families.

    Subclasses provide ``theta``, ``rho``, :meth:`bias`, :meth:`cdf` and
    :meth:`_draw`.
    """

    name: str = ""

    @property
    def theta(self) -> float:
        raise NotImplementedError

    @property
    def rho(self) -> float:
        raise NotImplementedError

    def bias(self, x):
        raise NotImplementedError

    def cdf(self, x):
        raise NotImplementedError

    def _draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def from_exponential(self, e):
        """Map standard exponential variates to this law (``H^{-1}(E)``)."""
        e = np.asarray(e, dtype=float)
        # F^{-1}(1 - exp(-E)) through the survival function keeps the far tail accurate
        return self._isf(np.exp(-e))

    def _isf(self, q):
        raise NotImplementedError

    @property
    def params(self) -> tuple:
        raise NotImplementedError

    @property
    def label(self) -> str:
        """File-name friendly identifier, e.g. ``weibull_4_4``."""
        return "_".join([self.name, *(_fmt_param(p) for p in self.params)])

    def __str__(self) -> str:
        return f"{self.name}:" + ",".join(_fmt_param(p) for p in self.params)


def _fmt_param(p: float) -> str:
    return repr(float(p)).removesuffix(".0") if float(p).is_integer() else repr(float(p))


@dataclass(frozen=True)
class Gamma(DistributionSpec):
    """Gamma law with shape ``alpha`` and rate ``beta``."""

    alpha: float
    beta: float = 1.0
    name = "gamma"

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"gamma needs shape > 0 and rate > 0, got {self.alpha}, {self.beta}")

    @property
    def params(self):
        return (self.alpha, self.beta)

    @property
    def theta(self):
        return 1.0

    @property
    def rho(self):
        return -1.0

    def bias(self, x):
        return (1.0 - self.alpha) * np.log(x) / x

    def cdf(self, x):
        return stats.gamma.cdf(x, self.alpha, scale=1.0 / self.beta)

    def _isf(self, q):
        return stats.gamma.isf(q, self.alpha, scale=1.0 / self.beta)

    def _draw(self, rng, size):
        return rng.gamma(self.alpha, 1.0 / self.beta, size)


@dataclass(frozen=True)
class AbsNormal(DistributionSpec):
    """Absolute value of a normal variable with mean ``mu`` and variance ``sigma2``."""

    mu: float = 0.0
    sigma2: float = 1.0
    name = "absnormal"

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"absnormal needs a positive variance, got {self.sigma2}")

    @property
    def params(self):
        return (self.mu, self.sigma2)

    @property
    def theta(self):
        return 0.5

    @property
    def rho(self):
        return -1.0

    def bias(self, x):
        return 0.25 * np.log(x) / x

    def _folded(self):
        sigma = math.sqrt(self.sigma2)
        if self.mu == 0:
            # closed-form quantiles; foldnorm inverts numerically
            return stats.halfnorm(scale=sigma)
        return stats.foldnorm(abs(self.mu) / sigma, scale=sigma)

    def cdf(self, x):
        return self._folded().cdf(x)

    def _isf(self, q):
        return self._folded().isf(q)

    def _draw(self, rng, size):
        return np.abs(rng.normal(self.mu, math.sqrt(self.sigma2), size))


@dataclass(frozen=True)
class Weibull(DistributionSpec):
    """Weibull law with shape ``alpha`` and scale ``lam``: ``X = lam * E**(1/alpha)``."""

    alpha: float
    lam: float = 1.0
    name = "weibull"

    def __post_init__(self):
        if not (self.alpha > 0 and self.lam > 0):
            raise ValueError(f"weibull needs shape > 0 and scale > 0, got {self.alpha}, {self.lam}")

    @property
    def params(self):
        return (self.alpha, self.lam)

    @property
    def theta(self):
        return 1.0 / self.alpha

    @property
    def rho(self):
        return -math.inf

    def bias(self, x):
        return np.zeros_like(np.asarray(x, dtype=float))[()]

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return -np.expm1(-((np.maximum(x, 0.0) / self.lam) ** self.alpha))

    def from_exponential(self, e):
        return self.lam * np.asarray(e, dtype=float) ** (1.0 / self.alpha)

    def _draw(self, rng, size):
        return self.from_exponential(rng.standard_exponential(size))


@dataclass(frozen=True)
class HallD(DistributionSpec):
    """Hall-type class with ``H^{-1}(x) = x**(1/alpha) * (1 + x**(-beta))``.

    Requires ``alpha > 0``, ``0 < beta < 1`` and ``alpha * beta <= 1``;
    then ``theta = 1/alpha`` and ``rho = -beta``.
    """

    alpha: float
    beta: float
    name = "halld"

    def __post_init__(self):
        if not (self.alpha > 0 and 0 < self.beta < 1 and self.alpha * self.beta <= 1):
            raise ValueError(
                "halld needs alpha > 0, 0 < beta < 1 and alpha*beta <= 1, "
                f"got alpha={self.alpha}, beta={self.beta}"
            )

    @property
    def params(self):
        return (self.alpha, self.beta)

    @property
    def theta(self):
        return 1.0 / self.alpha

    @property
    def rho(self):
        return -self.beta

    def bias(self, x):
        return -self.beta * np.asarray(x, dtype=float) ** (-self.beta)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = -np.expm1(-hall_h(self.alpha, self.beta, np.maximum(x, np.finfo(float).tiny)))
        return np.where(x > 0, out, 0.0)

    def from_exponential(self, e):
        return hall_h_inverse(self.alpha, self.beta, e)

    def _draw(self, rng, size):
        return self.from_exponential(rng.standard_exponential(size))


FAMILIES = {cls.name: cls for cls in (Gamma, AbsNormal, Weibull, HallD)}


def parse_spec(text: str) -> DistributionSpec:
    """Parse ``family:p1,p2`` (e.g. ``gamma:0.25,1`` or ``halld:1,0.5``)."""
    family, sep, rest = text.strip().partition(":")
    family = family.strip().lower()
    if family not in FAMILIES:
        valid = ", ".join(sorted(FAMILIES))
        raise ValueError(f"unknown distribution family {family!r}; valid families: {valid}")
    try:
        params = [float(p) for p in rest.split(",")] if sep and rest.strip() else []
    except ValueError:
        raise ValueError(f"cannot parse parameters in {text!r}") from None
    if len(params) != 2:
        raise ValueError(f"{family} takes exactly two parameters, got {text!r}")
    return FAMILIES[family](*params)


def hall_h_inverse(alpha: float, beta: float, x):
    """Evaluate ``x**(1/alpha) * (1 + x**(-beta))`` for ``x > 0``."""
    if not (alpha > 0 and 0 < beta < 1 and alpha * beta <= 1):
        raise ValueError(f"invalid halld parameters alpha={alpha}, beta={beta}")
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("hall_h_inverse is defined for x > 0 only")
    return (x ** (1.0 / alpha) * (1.0 + x ** (-beta)))[()]


def hall_h(alpha: float, beta: float, y, rtol: float = 1e-12):
    """Invert :func:`hall_h_inverse` by vectorised bisection in log space."""
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    if np.any(~(y > 0)):
        raise ValueError("hall_h is defined for y > 0 only")
    # H^{-1}(x) >= x**(1/alpha), so the root never exceeds y**alpha
    hi_log = alpha * np.log(y)
    lo_log = np.minimum(math.log(np.finfo(float).tiny), hi_log - 1.0)
    for _ in range(200):
        mid = 0.5 * (lo_log + hi_log)
        above = hall_h_inverse(alpha, beta, np.exp(mid)) >= y
        hi_log = np.where(above, mid, hi_log)
        lo_log = np.where(above, lo_log, mid)
        if np.all(hi_log - lo_log <= rtol):
            break
    out = np.exp(0.5 * (lo_log + hi_log))
    return out[0] if scalar else out


def true_bias(spec: DistributionSpec, x):
    """Rate function ``b(x)``; exactly zero for Weibull laws.

    ``x`` must be positive. Values in ``(0, 1]`` are allowed for the
    ``log(x)/x`` families (the bias changes sign there) because the true
    AMSE is evaluated on grids where ``log(n/k) < 1``.
    """
    if np.any(~(np.asarray(x, dtype=float) > 0)):
        raise ValueError("b(x) is defined for x > 0 only")
    return spec.bias(x)


def cdf(spec: DistributionSpec, x):
    return spec.cdf(x)


def sample(spec: DistributionSpec, n: int, stream: SeededStream, renyi: bool = False) -> np.ndarray:
    """Draw ``n`` i.i.d. observations, sorted ascending and strictly positive.

    With ``renyi=True`` the upper order statistics are built directly from
    the Renyi representation of exponential order statistics. That path
    has the right joint law but does not reproduce the sort-based draws.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    rng = stream.generator()
    if renyi:
        return _renyi_sample(spec, n, rng)
    x = spec._draw(rng, n)
    bad = ~((x > 0) & np.isfinite(x))
    while bad.any():
        x[bad] = spec._draw(rng, int(bad.sum()))
        bad = ~((x > 0) & np.isfinite(x))
    x.sort()
    return x


def _renyi_sample(spec, n, rng):
    f = rng.standard_exponential(n)
    # E_{i,n} = sum_{l<=i} f_l / (n - l + 1), ascending by construction
    e = np.cumsum(f / np.arange(n, 0, -1))
    x = np.asarray(spec.from_exponential(e), dtype=float)
    x = np.maximum(x, np.finfo(float).tiny)
    return np.maximum.accumulate(x)

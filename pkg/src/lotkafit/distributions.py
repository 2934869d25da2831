"""Discrete power law and discrete power law with exponential cutoff.

    power law:  p(x) = x^-alpha / zeta(alpha),                alpha > 1
    cutoff:     p(x) = e^(beta x) x^-alpha / Li_alpha(e^beta), beta < 0,
                                                    or beta = 0, alpha > 1

Both live on x = 1, 2, ...  The power law is evaluated through the same
normalizer code path as the cutoff family at beta = 0, so the two agree
exactly there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import FrequencyTable
from .errors import DomainError, EmptyInputError, InvalidParamsError, ResourceError
from .specfun import polylog

SAMPLE_TAIL_MASS = 1e-12
SAMPLE_CAP = 10**8
_CHUNK = 1 << 16


@dataclass(frozen=True)
class PowerLawParams:
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 1):
            raise InvalidParamsError(f"power law needs alpha > 1 (got {self.alpha})")

    @property
    def beta(self):
        return 0.0


@dataclass(frozen=True)
class CutoffParams:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidParamsError("parameters must be finite")
        if not (b < 0 or (b == 0 and a > 1)):
            raise InvalidParamsError(f"need beta < 0, or beta = 0 and alpha > 1 (got alpha={a}, beta={b})")


def _check(params):
    if not isinstance(params, (PowerLawParams, CutoffParams)):
        raise InvalidParamsError(f"unsupported parameter type {type(params).__name__}")


def log_normalizer(params):
    """ln Li_alpha(e^beta); ln zeta(alpha) for the power law."""
    _check(params)
    return math.log(polylog(params.alpha, params.beta).value)


def log_pmf(params, x):
    """beta x - alpha ln x - ln(normalizer); scalar or array x >= 1."""
    lz = log_normalizer(params)
    if np.ndim(x) == 0:
        if x < 1:
            raise DomainError(f"support is x >= 1 (got {x})")
        return params.beta * x - params.alpha * math.log(x) - lz
    x = np.asarray(x, dtype=float)
    if np.any(x < 1):
        raise DomainError("support is x >= 1")
    return params.beta * x - params.alpha * np.log(x) - lz


def pmf(params, x):
    lp = log_pmf(params, x)
    return math.exp(lp) if np.ndim(lp) == 0 else np.exp(lp)


def _neumaier_cumsum(values):
    out = np.empty(len(values))
    total = comp = 0.0
    for i, v in enumerate(values.tolist()):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i] = total + comp
    return out


def cdf_values(params, x_max):
    """F(1), ..., F(x_max) by compensated summation of the pmf."""
    _check(params)
    return _neumaier_cumsum(pmf(params, np.arange(1, x_max + 1)))


def cdf(params, x):
    if x < 1:
        return 0.0
    return math.fsum(pmf(params, np.arange(1, int(x) + 1)))


def tail_bound(params, x):
    """Upper bound on P(X > x)."""
    _check(params)
    a, b = params.alpha, params.beta
    lz = log_normalizer(params)
    if b == 0:
        # integral bound: sum_{k>x} k^-a <= x^(1-a)/(a-1)
        return math.exp((1 - a) * math.log(x) - lz) / (a - 1)
    # ratio of consecutive terms beyond x is at most r
    r = math.exp(b) * max(1.0, (1 + 1 / x) ** (-a))
    if r >= 1:
        return 1.0
    return math.exp(b * x - a * math.log(x) - lz) * r / (1 - r)


def model_mean(params):
    """E[X] = Li_(alpha-1)(e^beta) / Li_alpha(e^beta); needs beta < 0."""
    _check(params)
    if params.beta == 0:
        raise DomainError("model mean is only provided for beta < 0")
    return polylog(params.alpha - 1, params.beta).value / polylog(params.alpha, params.beta).value


def _tail_estimate(params, x):
    """Approximate P(X > x), used only for the table-size guard."""
    a, b = params.alpha, params.beta
    lz = log_normalizer(params)
    if b == 0:
        return math.exp((1 - a) * math.log(x + 0.5) - lz) / (a - 1)
    return tail_bound(params, x)


def _rng(seed):
    return np.random.Generator(np.random.Philox(int(seed)))


def sample(params, count, seed):
    """Draw `count` values by inverse CDF; deterministic for a given seed.

    The cumulative table conceptually runs to the first x with
    F(x) >= 1 - 1e-12, and that last cell takes the residual mass.  It is
    only materialized as far as the largest uniform drawn needs.  The
    generator is numpy's Philox (counter-based, 128-bit key) keyed by
    `seed`.
    """
    _check(params)
    count = int(count)
    if count < 1:
        raise EmptyInputError("sample count must be >= 1")
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    if _tail_estimate(params, SAMPLE_CAP) > SAMPLE_TAIL_MASS:
        raise ResourceError(
            f"1 - {SAMPLE_TAIL_MASS:g} quantile exceeds {SAMPLE_CAP:g} for {params}"
        )

    u = _rng(seed).random(count)
    u_max = float(u.max())
    target = 1.0 - SAMPLE_TAIL_MASS
    cum = []
    carry = 0.0
    start = 1
    while True:
        stop = min(start + _CHUNK, SAMPLE_CAP + 1)
        block = carry + np.cumsum(pmf(params, np.arange(start, stop)))
        cum.append(block)
        carry = float(block[-1])
        if carry >= target or carry > u_max or stop > SAMPLE_CAP:
            break
        start = stop
    F = np.concatenate(cum)
    hit = np.flatnonzero(F >= target)
    if hit.size:
        F = F[: hit[0] + 1]
        F[-1] = 1.0
    elif stop > SAMPLE_CAP:
        F[-1] = 1.0
    draws = np.searchsorted(F, u, side="right") + 1
    draws = np.minimum(draws, len(F))
    xs, counts = np.unique(draws, return_counts=True)
    return FrequencyTable(tuple(zip(xs.tolist(), counts.tolist())))

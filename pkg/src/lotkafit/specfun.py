"""Riemann zeta, real-slice polylogarithm Li_s(e^beta) and derivatives.

Every evaluator returns an :class:`EvalResult` carrying an absolute error
bound next to the value.  Three strategies are used for Li_s(e^beta):

* ``beta == 0``: Euler-Maclaurin summation for zeta(s);
* ``beta <= -0.05``: the defining series, summed until the geometric tail
  bound is negligible;
* ``-0.05 < beta < 0``: the expansion about beta = 0,

      Li_s(e^b) = Gamma(1-s) (-b)^(s-1) + sum_k zeta(s-k) b^k / k!,

  which converges for |b| < 2 pi and needs a handful of terms here.  The
  expansion has removable singularities at s = 1, 2, ...; inside
  ``NEAR_INTEGER`` of those points the value is interpolated from nodes
  outside the window and the result is flagged ``widened``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import digamma

from .errors import ConvergenceError, DomainError

EPS = float(np.finfo(float).eps)

SERIES_BETA_MAX = -0.05
NEAR_INTEGER = 1e-3
_NODE_OFFSETS = (-3.5, -2.5, -1.5, 1.5, 2.5, 3.5)

# B_2, B_4, ..., B_34
_BERNOULLI = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330, 854513 / 138,
    -236364091 / 2730, 8553103 / 6, -23749461029 / 870,
    8615841276005 / 14322, -7709321041217 / 510, 2577687858367 / 6,
)
_EM_COEF = tuple(b / math.factorial(2 * k + 2) for k, b in enumerate(_BERNOULLI))

_EM_N = 20
_EM_K_ZETA = 4  # corrections through B_8
_EM_K_CONTINUED = 16  # through B_32, used for arguments below 1
_REFLECT_BELOW = -20.0


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_error_bound: float
    widened: bool = False

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"non-finite result {self.value!r}")
        if not (math.isfinite(self.abs_error_bound) and self.abs_error_bound >= 0):
            raise DomainError(f"bad error bound {self.abs_error_bound!r}")

    def __float__(self):
        return self.value


def _euler_maclaurin(s, n_terms, n_corr):
    """(zeta, zeta', err, err') by Euler-Maclaurin with n_corr Bernoulli terms.

    Valid as analytic continuation for s > -(2 n_corr + 1), s != 1.
    """
    n = np.arange(1, n_terms, dtype=float)
    logn = np.log(n)
    pw = np.exp(-s * logn)
    N = float(n_terms)
    lnN = math.log(N)
    NS = math.exp(-s * lnN)
    integ = N * NS / (s - 1)
    half = 0.5 * NS
    vals = [math.fsum(pw), integ, half]
    dvals = [-math.fsum(logn * pw), -lnN * integ - integ / (s - 1), -lnN * half]

    # rising product P_k = s (s+1) ... (s+2k-2) and its derivative
    P, dP = s, 1.0
    Npow = NS / N  # N^(-s-1)
    omitted = domitted = 0.0
    for k in range(n_corr + 1):
        if k > 0:
            a = s + 2 * k - 1
            dP = dP * a * (a + 1) + P * (2 * a + 1)
            P = P * a * (a + 1)
            Npow /= N * N
        c = _EM_COEF[k]
        t = c * P * Npow
        dt = c * (dP - lnN * P) * Npow
        if k == n_corr:
            omitted, domitted = t, dt
        else:
            vals.append(t)
            dvals.append(dt)
    value = math.fsum(vals)
    dvalue = math.fsum(dvals)
    err = abs(omitted) + 4 * EPS * sum(abs(v) for v in vals)
    derr = abs(domitted) + abs(omitted) + 4 * EPS * sum(abs(v) for v in dvals)
    return value, dvalue, err, derr


def _zeta_reflected(x):
    """zeta and zeta' for x < _REFLECT_BELOW via the functional equation."""
    y = 1.0 - x
    zy, dzy, ezy, edzy = _euler_maclaurin(y, _EM_N, _EM_K_ZETA)
    lg = math.lgamma(y)  # Gamma(1-x) > 0 since 1-x > 0
    try:
        mag = math.exp(x * math.log(2.0) + (x - 1) * math.log(math.pi) + lg)
    except OverflowError as exc:
        raise DomainError(f"zeta({x}) overflows") from exc
    sn, cs = math.sin(math.pi * x / 2), math.cos(math.pi * x / 2)
    if x == math.floor(x) and int(x) % 2 == 0:
        sn = 0.0
    chi = mag * sn
    dchi = chi * (math.log(2.0) + math.log(math.pi) - float(digamma(y))) + mag * cs * math.pi / 2
    value = chi * zy
    dvalue = dchi * zy - chi * dzy
    err = abs(chi) * ezy + 16 * EPS * abs(value)
    derr = abs(dchi) * ezy + abs(chi) * edzy + 16 * EPS * (abs(dchi * zy) + abs(chi * dzy)) * 8
    if not (math.isfinite(value) and math.isfinite(dvalue)):
        raise DomainError(f"zeta({x}) overflows")
    return value, dvalue, err, derr


@lru_cache(maxsize=4096)
def _zeta_any(x):
    """(zeta(x), zeta'(x), err, err') for any real x != 1."""
    if x == 1.0:
        raise DomainError("zeta has a pole at 1")
    if x > 1.0:
        return _euler_maclaurin(x, _EM_N, _EM_K_ZETA)
    if x >= _REFLECT_BELOW:
        return _euler_maclaurin(x, _EM_N, _EM_K_CONTINUED)
    return _zeta_reflected(x)


def _check_s(s):
    if not math.isfinite(s):
        raise DomainError(f"argument must be finite, got {s!r}")
    if s <= 1 + 1e-12:
        raise DomainError(f"zeta(s) diverges for s <= 1 (got s={s})")


def zeta(s):
    """Riemann zeta function for real s > 1."""
    _check_s(s)
    v, _, e, _ = _zeta_any(float(s))
    return EvalResult(v, e)


def zeta_deriv(s):
    """Derivative of the zeta function for real s > 1 (always negative)."""
    _check_s(s)
    _, d, _, e = _zeta_any(float(s))
    return EvalResult(d, e)


# ---------------------------------------------------------------------------
# polylogarithm on the real slice z = e^beta


def _series(s, beta, deriv):
    """sum_n e^(beta n) n^(-s) (-ln n)^deriv for beta < 0."""
    chunk = 2048
    start = 1
    partials = []
    abs_total = 0.0
    log_mag = 0.0
    while True:
        n = np.arange(start, start + chunk, dtype=float)
        logn = np.log(n)
        lt = beta * n - s * logn
        t = np.exp(lt)
        if deriv:
            t = -logn * t
        if not np.all(np.isfinite(t)):
            raise DomainError(f"polylog series overflows at s={s}, beta={beta}")
        partials.append(math.fsum(t))
        abs_total += float(np.sum(np.abs(t)))
        log_mag = max(log_mag, float(np.max(np.abs(lt))))
        total = math.fsum(partials)
        last = start + chunk - 1
        # ratio bound a_{n+1}/a_n for n > last; decreasing in n
        ratio = math.exp(beta) * max(1.0, (1 + 1 / last) ** (-s))
        if deriv:
            ratio *= math.log(last + 2) / math.log(last + 1)
        if ratio < 1:
            nxt = last + 1.0
            a_next = math.exp(beta * nxt - s * math.log(nxt)) * (math.log(nxt) if deriv else 1.0)
            tail = a_next / (1 - ratio)
            if tail <= 1e-16 * abs(total):
                break
        start += chunk
        if start > 10**9:
            raise ConvergenceError(f"polylog series did not converge at s={s}, beta={beta}")
    err = tail + abs_total * EPS * (4 + log_mag)
    return total, err


def _gamma_sign(x):
    if x > 0:
        return 1.0
    return -1.0 if math.floor(x) % 2 else 1.0


def _expansion(s, beta, deriv):
    """Expansion about beta = 0; s must not be a positive integer."""
    L = math.log(-beta)
    y = 1.0 - s
    lg = math.lgamma(y)
    try:
        sing = _gamma_sign(y) * math.exp(lg + (s - 1) * L)
    except OverflowError as exc:
        raise DomainError(f"polylog overflows at s={s}, beta={beta}") from exc
    if deriv:
        sing *= L - float(digamma(y))
    terms = [sing]
    # rounding in exp() grows with the size of its argument
    err = abs(sing) * EPS * (abs(lg) + abs((s - 1) * L) + 4)
    coef = 1.0  # beta^k / k!
    k = 0
    small = 0
    while True:
        z, dz, ez, edz = _zeta_any(s - k)
        t = (dz if deriv else z) * coef
        err += abs(coef) * (edz if deriv else ez)
        terms.append(t)
        total = math.fsum(terms)
        if k > max(s, 0.0) + 1 and abs(t) <= 1e-17 * abs(total):
            small += 1
            if small == 2:
                break
        else:
            small = 0
        k += 1
        coef *= beta / k
        if k > 400:
            raise ConvergenceError(f"polylog expansion did not converge at s={s}, beta={beta}")
    if not math.isfinite(total):
        raise DomainError(f"polylog overflows at s={s}, beta={beta}")
    err += 2 * abs(terms[-1]) + 8 * EPS * sum(abs(v) for v in terms)
    return total, err


def _expansion_integer(m, beta):
    """Value of the expansion at a positive integer order m.

    The Gamma pole and the zeta(1) pole cancel, leaving
    beta^(m-1)/(m-1)! * (H_(m-1) - ln(-beta)) in place of both.
    """
    L = math.log(-beta)
    harmonic = math.fsum(1.0 / j for j in range(1, m))
    sing = beta ** (m - 1) / math.factorial(m - 1) * (harmonic - L)
    terms = [sing]
    err = abs(sing) * EPS * (abs(L) + 4)
    coef = 1.0
    k = 0
    small = 0
    while True:
        if k != m - 1:
            z, _, ez, _ = _zeta_any(float(m - k))
            t = z * coef
            err += abs(coef) * ez
            terms.append(t)
            total = math.fsum(terms)
            if k > m + 1 and abs(t) <= 1e-17 * abs(total):
                small += 1
                if small == 2:
                    break
            else:
                small = 0
        k += 1
        coef *= beta / k
        if k > 400:
            raise ConvergenceError(f"polylog expansion did not converge at s={m}, beta={beta}")
    err += 2 * abs(terms[-1]) + 8 * EPS * sum(abs(v) for v in terms)
    return total, err


def _lagrange(xs, ys, x):
    total = 0.0
    for i, xi in enumerate(xs):
        w = 1.0
        for j, xj in enumerate(xs):
            if j != i:
                w *= (x - xj) / (xi - xj)
        total += w * ys[i]
    return total


def _expansion_near_integer(s, beta, deriv):
    m = round(s)
    if not deriv and s == m:
        return _expansion_integer(m, beta)
    nodes = [m + o * NEAR_INTEGER for o in _NODE_OFFSETS]
    evals = [_expansion(x, beta, deriv) for x in nodes]
    if not deriv:
        nodes.insert(3, float(m))
        evals.insert(3, _expansion_integer(m, beta))
    ys = [v for v, _ in evals]
    full = _lagrange(nodes, ys, s)
    inner = _lagrange(nodes[1:-1], ys[1:-1], s)
    node_err = max(e for _, e in evals)
    # Lebesgue constant of these nodes on the window is below 4
    err = abs(full - inner) + 4 * node_err
    return full, err


def _polylog_impl(s, beta, deriv):
    s = float(s)
    beta = float(beta)
    if not (math.isfinite(s) and math.isfinite(beta)):
        raise DomainError("arguments must be finite")
    if beta > 0:
        raise DomainError(f"beta must be <= 0 (got {beta})")
    if beta == 0:
        if s <= 1 + 1e-12:
            raise DomainError(f"Li_s(1) diverges for s <= 1 (got s={s})")
        v, d, e, de = _zeta_any(s)
        return EvalResult(d, de) if deriv else EvalResult(v, e)
    if beta <= SERIES_BETA_MAX:
        return EvalResult(*_series(s, beta, deriv))
    m = round(s)
    if m >= 1 and abs(s - m) < NEAR_INTEGER:
        v, e = _expansion_near_integer(s, beta, deriv)
        return EvalResult(v, e, widened=True)
    return EvalResult(*_expansion(s, beta, deriv))


def polylog(s, beta):
    """Li_s(e^beta) for beta < 0 (any real s) or beta = 0 with s > 1."""
    return _polylog_impl(s, beta, False)


def polylog_ds(s, beta):
    """Partial derivative of Li_s(e^beta) with respect to s (negative)."""
    return _polylog_impl(s, beta, True)


def chi2_sf_1dof(t):
    """Survival function P(chi^2_1 > t) = erfc(sqrt(t/2))."""
    t = float(t)
    if not t >= 0:
        raise DomainError(f"chi-squared statistic must be >= 0 (got {t})")
    return math.erfc(math.sqrt(t / 2))

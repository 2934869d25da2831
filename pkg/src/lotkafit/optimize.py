"""Small optimizers for the one- and two-parameter fits."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize

from .errors import ConvergenceError

_GOLD = 0.5 * (3.0 - math.sqrt(5.0))


@dataclass
class Minimum:
    x: float
    fun: float
    iterations: int
    converged: bool


def brent_minimize(f, lo, hi, xtol=1e-10, maxiter=500):
    """Bounded Brent minimization: golden section plus parabolic steps.

    Unlike ``scipy.optimize.fminbound`` the stopping width is the absolute
    `xtol` alone, with no sqrt(eps)*|x| term added.
    """
    a, b = float(lo), float(hi)
    x = w = v = a + _GOLD * (b - a)
    fx = fw = fv = f(x)
    d = e = 0.0
    for it in range(1, maxiter + 1):
        m = 0.5 * (a + b)
        tol1 = xtol / 3.0 + 1e-15 * abs(x)
        tol2 = 2.0 * tol1
        if abs(x - m) <= tol2 - 0.5 * (b - a):
            return Minimum(x, fx, it, True)
        golden = True
        if abs(e) > tol1:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0:
                p = -p
            q = abs(q)
            r, e = e, d
            if abs(p) < abs(0.5 * q * r) and q * (a - x) < p < q * (b - x):
                d = p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = tol1 if x < m else -tol1
                golden = False
        if golden:
            e = (b if x < m else a) - x
            d = _GOLD * e
        u = x + (d if abs(d) >= tol1 else math.copysign(tol1, d))
        fu = f(u)
        if fu <= fx:
            if u < x:
                b = x
            else:
                a = x
            v, fv, w, fw, x, fx = w, fw, x, fx, u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv, w, fw = w, fw, u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return Minimum(x, fx, maxiter, False)


def decreasing_root(g, x0, step=0.5, lo=-math.inf, hi=math.inf, xtol=1e-13, max_expand=200):
    """Root of a decreasing function g by bracketing outward from x0, then brentq."""
    a = b = x0
    ga = gb = g(x0)
    if ga == 0:
        return x0, 0
    k = 0
    if ga > 0:
        while gb > 0:
            a, ga = b, gb
            b = min(b + step * 2**k, hi)
            gb = g(b)
            k += 1
            if k > max_expand or (b == hi and gb > 0):
                raise ConvergenceError("could not bracket the root from above")
    else:
        while ga < 0:
            b, gb = a, ga
            a = max(a - step * 2**k, lo)
            ga = g(a)
            k += 1
            if k > max_expand or (a == lo and ga < 0):
                raise ConvergenceError("could not bracket the root from below")
    root, info = brentq(g, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, full_output=True)
    if not info.converged:
        raise ConvergenceError(f"brentq failed: {info.flag}")
    return root, k + info.iterations


def newton_maximize(fun, grad, x0, stop=None, step_tol=1e-9, grad_tol=1e-7, maxiter=100,
                    fd_step=1e-6):
    """Maximize with Newton steps, analytic gradient, finite-difference Hessian.

    `fun` and `grad` act on numpy vectors.  Converged means the last step
    is below `step_tol` and ``stop(x)`` holds (default: norm of `grad`
    below `grad_tol`).  Falls back to Nelder-Mead (scipy) when
    the Hessian is not negative definite or the line search stalls, then
    resumes Newton from the simplex result.  Returns (x, iterations, converged).
    """
    if stop is None:
        stop = lambda p: np.linalg.norm(grad(p)) < grad_tol
    x = np.asarray(x0, dtype=float)
    fx = fun(x)
    used_simplex = False
    for it in range(1, maxiter + 1):
        g = grad(x)
        H = np.empty((len(x), len(x)))
        for j in range(len(x)):
            h = fd_step * max(1.0, abs(x[j]))
            xp, xm = x.copy(), x.copy()
            xp[j] += h
            xm[j] -= h
            H[:, j] = (grad(xp) - grad(xm)) / (2 * h)
        H = 0.5 * (H + H.T)
        try:
            np.linalg.cholesky(-H)
            step = np.linalg.solve(H, -g)
            ok = True
        except np.linalg.LinAlgError:
            ok = False
        if ok:
            t = 1.0
            while t > 1e-10:
                xn = x + t * step
                fn = fun(xn)
                if np.isfinite(fn) and fn >= fx - 1e-12 * abs(fx):
                    break
                t *= 0.5
            else:
                ok = False
        if not ok:
            if used_simplex:
                return x, it, False
            res = minimize(lambda p: -fun(p), x, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
            used_simplex = True
            x, fx = res.x, -res.fun
            continue
        dx = xn - x
        x, fx = xn, fn
        if np.max(np.abs(dx)) < step_tol and stop(x):
            return x, it, True
    return x, maxiter, False

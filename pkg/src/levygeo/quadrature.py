"""Quadrature rules shared by the density, geometry and mixture modules.

Everything here returns plain node/weight arrays so callers can reuse a
rule across many integrands (deterministic node sets, no adaptivity
hidden behind a callback).
"""
from __future__ import annotations

import warnings
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import IntegrationWarning, quad
from scipy.special import roots_laguerre

from .errors import QuadratureFailure

GL_ORDER = 16


@lru_cache(maxsize=8)
def _gl(order: int):
    x, w = leggauss(order)
    return x, w


def gl_panels(edges, order: int = GL_ORDER):
    """Composite Gauss-Legendre rule on consecutive panels.

    Parameters
    ----------
    edges : array_like
        Increasing panel boundaries.
    order : int
        Nodes per panel.

    Returns
    -------
    nodes, weights : ndarray
    """
    edges = np.asarray(edges, dtype=float)
    x, w = _gl(order)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (half[:, None] * x + mid[:, None]).ravel()
    weights = (half[:, None] * w).ravel()
    return nodes, weights


def oscillatory_edges(xi_max: float, x_max: float, grade: int = 40) -> np.ndarray:
    """Panel edges on [0, xi_max] for cosine transforms up to |x| <= x_max.

    Panels are geometrically graded towards the origin (to resolve cusps
    such as |xi|^alpha) and uniform beyond, with width at most one
    period 2*pi/x_max of the fastest cosine.
    """
    width = min(1.0, 2.0 * np.pi / max(x_max, 1e-300))
    width = min(width, xi_max)
    graded = np.geomspace(1e-10 * width, width, grade)
    uniform = np.arange(2.0 * width, xi_max + 0.5 * width, width)
    edges = np.concatenate([[0.0], graded, uniform])
    if edges[-1] < xi_max:
        edges = np.append(edges, xi_max)
    else:
        edges[-1] = xi_max
    return edges


@lru_cache(maxsize=16)
def gauss_laguerre(n: int):
    """Nodes and weights of the n-point Gauss-Laguerre rule (weight e^{-r})."""
    x, w = roots_laguerre(n)
    return x, w


def _exp_sinh_values(f, u):
    s = 0.5 * np.pi * np.sinh(u)
    vals = np.zeros_like(u)
    with np.errstate(over="ignore", under="ignore"):
        x = np.exp(s)
        dx = x * 0.5 * np.pi * np.cosh(u)
        ok = np.isfinite(x) & (x > 0) & np.isfinite(dx)
        if ok.any():
            vals[ok] = np.asarray(f(x[ok]), dtype=float) * dx[ok]
    vals[~np.isfinite(vals)] = 0.0
    return vals


def exp_sinh(f, tol: float = 1e-12, max_level: int = 8, h0: float = 0.5):
    """Double-exponential quadrature of f over (0, inf).

    Uses the substitution x = exp(pi/2 * sinh(u)) and halves the step until
    two successive levels agree to ``tol`` (relative).  ``f`` must accept
    arrays.

    Returns
    -------
    value : float
    error : float
        Difference between the last two levels.
    """
    h = h0
    k = np.arange(-int(6.0 / h), int(6.0 / h) + 1)
    prev = h * _exp_sinh_values(f, k * h).sum()
    err = np.inf
    for _ in range(max_level):
        h /= 2
        k = np.arange(-int(6.0 / h), int(6.0 / h) + 1)
        k = k[k % 2 != 0]  # only the new midpoints
        total = 0.5 * prev + h * _exp_sinh_values(f, k * h).sum()
        err = abs(total - prev)
        if err <= tol * abs(total):
            return float(total), float(err)
        prev = total
    raise QuadratureFailure(
        f"exp-sinh rule did not converge: last two levels differ by {err:.3e}"
    )


def cosine_transform(f, x: float, epsabs: float = 1e-13, limit: int = 400) -> float:
    """int_0^inf f(u) cos(x u) du for integrable, decaying f.

    Rapidly decaying integrands are cut where |f| drops below 1e-18 of its
    value at 0 (QUADPACK QAWO on the finite interval); slowly decaying ones
    use the QAWF Fourier-integral routine on [0, inf).  x = 0 falls back to
    the plain adaptive rule.
    """
    g = lambda u: float(f(u))  # noqa: E731
    f0 = abs(g(0.0)) or 1.0
    cut = None
    u = 1.0
    while u <= 1024.0:
        if abs(g(u)) < 1e-18 * f0:
            cut = u
            break
        u *= 2.0
    if cut is not None:
        if x == 0:
            val, _ = quad(g, 0.0, cut, epsabs=epsabs, epsrel=1e-12, limit=limit)
        else:
            val, _ = quad(g, 0.0, cut, weight="cos", wvar=abs(x), epsabs=epsabs, epsrel=1e-12, limit=limit)
        return val
    if x == 0:
        val, _ = quad(g, 0.0, np.inf, epsabs=epsabs, epsrel=1e-12, limit=limit)
        return val
    with warnings.catch_warnings():
        # QAWF flags slowly converging cycles even when the extrapolated sum is fine
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(g, 0.0, np.inf, weight="cos", wvar=abs(x), epsabs=epsabs, limlst=200, limit=limit)
    return val

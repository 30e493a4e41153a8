"""Transition densities p_t(x) = (2 pi)^(-n) int exp(-i x xi) exp(-t psi(xi)) d xi.

The transform is evaluated as a half-range cosine transform with composite
Gauss-Legendre panels (graded at the origin, at most one cosine period
wide), so no FFT periodization or aliasing enters.  Even symmetry of psi
in each coordinate is used in two dimensions, where the transform is a
tensor product.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .bernstein import BernsteinFn, stable_half_subordinator_density
from .errors import NonIntegrable, ParamOutOfRange, QuadratureFailure, UnsupportedT, WindowTooSmall
from .exponents import CharExponent, compose, eval_psi
from .geometry import DOUBLING_ON_RANGE, ball_volume, doubling_check, unit_ball_volume
from .quadrature import cosine_transform, exp_sinh, gauss_laguerre, gl_panels, oscillatory_edges
from .verdicts import jsonable

WINDOW_TOL = 1e-14
CUTOFF_TOL = 1e-18
MAX_2D_POINTS = 4096
MAX_PANEL_XI = 1e5  # beyond this cutoff the 1-D panel rule gives way to QAWF
_CHUNK = 512


@dataclass(frozen=True)
class GridSpec:
    """Lattice {k h : |k h| <= L}^n."""

    h: float = 0.01
    L: float = 40.0

    def __post_init__(self):
        if not (self.h > 0 and self.L > 0):
            raise ParamOutOfRange("grid spacing and half extent must be positive")

    @property
    def xi_max(self) -> float:
        return math.pi / self.h

    def axis(self) -> np.ndarray:
        k = int(math.floor(self.L / self.h + 1e-9))
        return np.arange(-k, k + 1) * self.h


@dataclass
class GridDensity:
    """Density values on a symmetric lattice with error metadata.

    ``aliasing_bound`` bounds the pointwise effect of truncating the
    frequency integral at the window edge pi/h.  ``tail_mass`` is the
    probability outside the lattice box, computed from the same
    characteristic function with a sine kernel.
    """

    t: float
    dim: int
    h: float
    L: float
    x: np.ndarray
    values: np.ndarray
    aliasing_bound: float
    tail_mass: float
    window_value: float
    model: dict = field(default_factory=dict)

    @property
    def trapezoid_mass(self) -> float:
        w = np.full(self.x.size, self.h)
        w[0] = w[-1] = 0.5 * self.h
        if self.dim == 1:
            return float(w @ self.values)
        return float(w @ self.values @ w)

    @property
    def mass(self) -> float:
        """Trapezoid mass on the lattice plus the mass outside it."""
        return self.trapezoid_mass + self.tail_mass

    def value_at_origin(self) -> float:
        i = self.x.size // 2
        return float(self.values[i] if self.dim == 1 else self.values[i, i])

    def meta(self) -> dict:
        return jsonable(
            {
                "t": self.t,
                "h": self.h,
                "L": self.L,
                "aliasing_bound": self.aliasing_bound,
                "tail_mass": self.tail_mass,
                "model": self.model,
            }
        )


# integrability -----------------------------------------------------------------


def _axis_psi(exp: CharExponent, z):
    z = np.asarray(z, dtype=float)
    if exp.dim == 1:
        return np.asarray(eval_psi(exp, z), dtype=float)
    pts = np.zeros(z.shape + (exp.dim,))
    pts[..., 0] = z
    a = np.asarray(eval_psi(exp, pts), dtype=float)
    if exp.kind == "sum_aniso":
        # slowest decaying block direction
        pts2 = np.zeros(z.shape + (exp.dim,))
        pts2[..., -1] = z
        a = np.minimum(a, np.asarray(eval_psi(exp, pts2), dtype=float))
    return a


def check_integrable(exp: CharExponent, t: float) -> None:
    """Raise NonIntegrable unless exp(-t psi) decays faster than |xi|^(-n).

    The decisive quantity is the growth of t psi(xi) - n ln|xi| between
    |xi| = 1e6 and 1e8 (along the slowest axis).
    """
    if not t > 0:
        raise ParamOutOfRange(f"t must be positive, got {t}")
    n = exp.dim if exp.kind != "sum_aniso" else 1
    if exp.kind == "sum_aniso":
        return  # power exponents in each block: always integrable for t > 0
    a, b = t * _axis_psi(exp, np.array([1e6, 1e8]))
    slope = (b - a) / math.log(100.0)
    if not np.isfinite(slope) or slope <= n * (1.0 + 1e-3):
        if b > n * math.log(1e8) + 60.0:
            return
        raise NonIntegrable(
            f"exp(-t psi) decays like |xi|^(-{slope:.4g}) at t = {t:g}; need more than |xi|^(-{n})"
        )


def _cutoff(exp: CharExponent, t: float, tol: float = CUTOFF_TOL) -> float:
    """Frequency beyond which exp(-t psi) < tol along the slowest axis."""
    z = 1.0
    while math.exp(-t * float(_axis_psi(exp, z))) >= tol:
        z *= 1.25
        if z > 1e12:
            break
    return z


def suggested_h(exp: CharExponent, t: float) -> float:
    return math.pi / _cutoff(exp, t, WINDOW_TOL)


def _window_check(exp: CharExponent, t: float, grid: GridSpec) -> float:
    wv = math.exp(-t * float(_axis_psi(exp, grid.xi_max)))
    if wv >= WINDOW_TOL:
        h = suggested_h(exp, t)
        raise WindowTooSmall(
            f"exp(-t psi(pi/h)) = {wv:.3e} >= {WINDOW_TOL:g}; use h <= {h:.4g}", suggested_h=h
        )
    return wv


def _tail_bound(exp: CharExponent, t: float, xi_from: float) -> float:
    """(1/pi) int_{xi_from}^inf exp(-t psi) d xi along the slowest axis."""
    val, _ = quad(lambda z: math.exp(-t * float(_axis_psi(exp, z))), xi_from, np.inf, limit=200)
    return val / math.pi


# 1-D and 2-D engines --------------------------------------------------------------


def _nodes(exp: CharExponent, t: float, x_max: float, xi_cut: float):
    edges = oscillatory_edges(xi_cut, max(x_max, 1e-12))
    return gl_panels(edges)


def _cos_apply(x: np.ndarray, nodes: np.ndarray, vec: np.ndarray) -> np.ndarray:
    out = np.empty(x.shape[0] if vec.ndim == 1 else (x.shape[0], vec.shape[1]))
    for i in range(0, x.shape[0], _CHUNK):
        c = np.cos(np.outer(x[i : i + _CHUNK], nodes))
        out[i : i + _CHUNK] = c @ vec
    return out


def _weights_2d(exp: CharExponent, t: float, nodes: np.ndarray, w: np.ndarray) -> np.ndarray:
    pts = np.stack(np.meshgrid(nodes, nodes, indexing="ij"), axis=-1)
    return np.exp(-t * eval_psi(exp, pts)) * np.outer(w, w)


def _check_even_2d(exp: CharExponent):
    if not (exp.is_radial or exp.kind == "sum_aniso"):
        raise ParamOutOfRange("2-D transforms need psi even in each coordinate")


def invert_fourier(exp: CharExponent, t: float, grid: Optional[GridSpec] = None) -> GridDensity:
    """Evaluate p_t on the lattice of ``grid`` (dimension 1 or 2).

    Raises
    ------
    WindowTooSmall
        If exp(-t psi(pi / h)) >= 1e-14 (the message suggests a spacing).
    NonIntegrable
        If exp(-t psi) is not integrable.
    """
    grid = grid or GridSpec()
    if exp.dim not in (1, 2):
        raise ParamOutOfRange("lattice densities are available for n = 1 and n = 2")
    check_integrable(exp, t)
    wv = _window_check(exp, t, grid)
    axis = grid.axis()
    if exp.dim == 2 and axis.size > MAX_2D_POINTS:
        raise ParamOutOfRange(f"2-D lattice limited to {MAX_2D_POINTS}^2 points")
    xi_cut = min(grid.xi_max, _cutoff(exp, t))
    nodes, w = _nodes(exp, t, grid.L, xi_cut)
    half = axis[axis.size // 2 :]
    x_end = float(half[-1])  # the lattice stops at floor(L / h) h, which may be short of L
    # frequency truncation error plus the window-edge value times window volume
    bound = _tail_bound(exp, t, xi_cut)
    edge = wv * (2.0 * grid.xi_max / (2.0 * math.pi)) ** exp.dim
    if exp.dim == 1:
        F = np.exp(-t * np.asarray(eval_psi(exp, nodes), dtype=float)) * w
        vals_half = _cos_apply(half, nodes, F) / math.pi
        values = np.concatenate([vals_half[:0:-1], vals_half])
        sine = np.sin(x_end * nodes) / nodes
        inside = (2.0 / math.pi) * float(sine @ F)
    else:
        _check_even_2d(exp)
        F = _weights_2d(exp, t, nodes, w)
        C = np.cos(np.outer(half, nodes))
        vals_half = C @ F @ C.T / math.pi**2
        full = np.concatenate([vals_half[:0:-1], vals_half], axis=0)
        values = np.concatenate([full[:, :0:-1], full], axis=1)
        s = np.sin(x_end * nodes) / nodes
        inside = (4.0 / math.pi**2) * float(s @ F @ s)
        bound = bound * 2.0 * (float(np.sum(w * np.exp(-t * _axis_psi(exp, nodes)))) / math.pi)
    return GridDensity(
        float(t), exp.dim, grid.h, grid.L, axis, values, float(bound + edge), float(1.0 - inside), wv, exp.to_dict()
    )


def density_at(exp: CharExponent, t: float, x) -> np.ndarray:
    """p_t at arbitrary points (shape (k,) in 1-D, (k, 2) in 2-D)."""
    check_integrable(exp, t)
    x = np.asarray(x, dtype=float)
    xi_cut = _cutoff(exp, t)
    if exp.dim == 1:
        xs = np.abs(x).ravel()
        if xi_cut > MAX_PANEL_XI:
            # algebraic decay: panels would be too many, use QUADPACK's Fourier routine per point
            f = lambda u: math.exp(-t * float(eval_psi(exp, u)))  # noqa: E731
            return (np.array([cosine_transform(f, v) for v in xs]) / math.pi).reshape(x.shape)
        nodes, w = _nodes(exp, t, float(xs.max(initial=0.0)), xi_cut)
        F = np.exp(-t * np.asarray(eval_psi(exp, nodes), dtype=float)) * w
        return (_cos_apply(xs, nodes, F) / math.pi).reshape(x.shape)
    if exp.dim == 2:
        _check_even_2d(exp)
        pts = np.abs(x.reshape(-1, 2))
        nodes, w = _nodes(exp, t, float(pts.max(initial=0.0)), xi_cut)
        F = _weights_2d(exp, t, nodes, w)
        A = _cos_apply(pts[:, 0], nodes, F)
        B = np.cos(np.outer(pts[:, 1], nodes))
        return (np.sum(A * B, axis=1) / math.pi**2).reshape(x.shape[:-1])
    raise ParamOutOfRange("density_at supports n = 1 and n = 2")


def density_slice(exp: CharExponent, t: float, x) -> np.ndarray:
    """p_t(x, 0) of a 2-D exponent at large |x| via a 1-D Fourier integral.

    p_t(x, 0) = (1/pi) int_0^inf cos(x xi) G(xi) d xi with the marginal
    G(xi) = (1/pi) int_0^inf exp(-t psi(xi, eta)) d eta; the outer integral
    uses QUADPACK's Fourier-integral routine.
    """
    if exp.dim != 2:
        raise ParamOutOfRange("density_slice is for 2-D exponents")
    _check_even_2d(exp)

    def G(z):
        val, _ = quad(lambda e: math.exp(-t * float(eval_psi(exp, np.array([z, e])))), 0.0, np.inf,
                      epsabs=0.0, epsrel=1e-13, limit=200)
        return val / math.pi

    out = []
    with warnings.catch_warnings():
        # QAWF flags slowly converging cycles even when the extrapolated sum is fine
        warnings.simplefilter("ignore", IntegrationWarning)
        for xv in np.atleast_1d(np.asarray(x, dtype=float)):
            if xv == 0:
                val, _ = quad(G, 0.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
            else:
                val, _ = quad(G, 0.0, np.inf, weight="cos", wvar=abs(xv), epsabs=1e-18, limlst=400, limit=400)
            out.append(val / math.pi)
    return np.array(out)


def closed_form(model: str, t: float, x, **params):
    """Printed closed-form density of a catalog row (see :mod:`levygeo.table`)."""
    from .table import closed_form as _cf

    return _cf(model, t, x, **params)


# diagonal -----------------------------------------------------------------------------


def _radial_integral(f, n: int, t: float, z_scale: float) -> float:
    """n omega_n int_0^inf r^(n-1) exp(-t f(r)) dr, split at a natural scale."""
    g = lambda r: r ** (n - 1) * math.exp(-t * float(f(r)))  # noqa: E731
    pieces = [(0.0, z_scale), (z_scale, 10.0 * z_scale), (10.0 * z_scale, np.inf)]
    total = 0.0
    for a, b in pieces:
        val, err = quad(g, a, b, epsabs=0.0, epsrel=1e-13, limit=400)
        total += val
    return n * unit_ball_volume(n) * total


def diagonal_direct(exp: CharExponent, t: float) -> float:
    """p_t(0) = (2 pi)^(-n) int exp(-t psi) by adaptive quadrature.

    Radial kinds reduce to a one-dimensional radial integral; the
    anisotropic sum factorizes into two radial integrals.
    """
    check_integrable(exp, t)
    n = exp.dim
    if exp.kind == "sum_aniso":
        a = _radial_integral(lambda r: r**exp.alpha, exp.m, t, t ** (-1.0 / exp.alpha))
        b = _radial_integral(lambda r: r**exp.beta, exp.n, t, t ** (-1.0 / exp.beta))
        return a * b / (2.0 * math.pi) ** n
    if not exp.is_radial:
        return float(density_at(exp, t, np.zeros((1, n)) if n > 1 else np.zeros(1))[0])
    try:
        scale = float(exp.radial_inverse(1.0 / t))
    except Exception:  # noqa: BLE001 - bounded psi: fall back to unit scale
        scale = 1.0
    scale = scale if scale > 0 else 1.0
    return _radial_integral(exp.radial, n, t, scale) / (2.0 * math.pi) ** n


@dataclass
class VolumeFormulaResult:
    value: float
    method: str
    nodes: int


def diagonal_volume_formula(exp: CharExponent, t: float, tol: float = 1e-9, detail: bool = False):
    """p_t(0) = (2 pi)^(-n) int_0^inf v(sqrt(r / t)) exp(-r) dr.

    Gauss-Laguerre with 64, 128, 256 nodes until two successive rules agree
    to ``tol``; volume functions with a root singularity at r = 0 converge
    slowly under Gauss-Laguerre, so the double-exponential rule is used when
    the doubling does not settle.
    """
    check_integrable(exp, t)
    n = exp.dim
    norm = (2.0 * math.pi) ** -n

    def v_one(ri):
        if ri <= 0:
            return 0.0
        with np.errstate(over="ignore"):
            return ball_volume(exp, math.sqrt(ri / t)).volume

    def v(r):
        return np.array([v_one(ri) for ri in np.atleast_1d(np.asarray(r, dtype=float))])

    prev = None
    for k in (64, 128, 256):
        x, w = gauss_laguerre(k)
        with np.errstate(invalid="ignore", over="ignore"):
            val = float(w @ v(x))
        if not math.isfinite(val):
            break
        if prev is not None and abs(val - prev) <= tol * abs(val):
            res = VolumeFormulaResult(norm * val, f"gauss_laguerre_{k}", k)
            return res if detail else res.value
        prev = val
    def integrand(r):
        vals = v(r)
        # exp(-r) wins against any volume growth that still overflows
        return np.where(np.isfinite(vals), vals * np.exp(-r), 0.0)

    with np.errstate(invalid="ignore", over="ignore"):
        val, _ = exp_sinh(integrand, tol=1e-13, max_level=10)
    res = VolumeFormulaResult(norm * val, "exp_sinh", 0)
    return res if detail else res.value


@dataclass
class ComparabilityTable:
    t: np.ndarray
    diagonal: np.ndarray
    volume: np.ndarray
    ratio: np.ndarray
    tag: str

    @property
    def summary(self) -> dict:
        return {"min": float(self.ratio.min()), "max": float(self.ratio.max()), "tag": self.tag}

    def rows(self):
        for t, p, v, q in zip(self.t, self.diagonal, self.volume, self.ratio):
            yield {"t": float(t), "p_t(0)": float(p), "v(1/sqrt(t))": float(v), "ratio": float(q)}


def diagonal_comparability(
    exp: CharExponent, t_list: Sequence[float], ball_exponent: Optional[CharExponent] = None
) -> ComparabilityTable:
    """Ratios p_t(0) / v(1/sqrt(t)).

    ``ball_exponent`` selects the metric whose balls are measured (defaults
    to ``exp`` itself).  The table is tagged NON_DOUBLING unless the ball
    metric doubles over [1e-3, 1e3] and the spanned radii.
    """
    ball = ball_exponent or exp
    t = np.asarray(t_list, dtype=float)
    diag = np.array([diagonal_direct(exp, ti) for ti in t])
    vol = np.array([ball_volume(ball, 1.0 / math.sqrt(ti)).volume for ti in t])
    radii = 1.0 / np.sqrt(t)
    # doubling is a property of the ball metric, so probe at least [1e-3, 1e3]
    rep = doubling_check(ball, (min(1e-3, 0.5 * radii.min()), max(1e3, radii.max())), points=31)
    tag = "DOUBLING" if rep.verdict == DOUBLING_ON_RANGE else "NON_DOUBLING"
    return ComparabilityTable(t, diag, vol, diag / vol, tag)


def stable_ratio_constant(alpha: float, n: int = 1) -> float:
    """Exact p_t(0) / v(1/sqrt t) for psi = |xi|^alpha on R^n.

    Equals (2 pi)^(-n) Gamma(1 + n / alpha) * omega_n / omega_n, i.e. the
    t-independent constant (2 pi)^(-n) Gamma(1 + n/alpha).
    """
    return math.gamma(1.0 + n / alpha) / (2.0 * math.pi) ** n


@dataclass
class SubordinationResult:
    value: float
    cross_check: float

    @property
    def rel_diff(self) -> float:
        return abs(self.value - self.cross_check) / abs(self.cross_check)


def subordinate_diagonal(
    exp: CharExponent, t: float, f: Optional[BernsteinFn] = None
) -> SubordinationResult:
    """p_t^f(0) = int_0^inf p_s(0) eta_t(s) ds for the one-half stable subordinator.

    Cross-checked against ``diagonal_direct(compose(f, exp), t)``.
    """
    f = f or BernsteinFn.power(0.5)
    if not (f.kind == "power" and f.alpha == 0.5):
        raise ParamOutOfRange("only the one-half stable subordinator has an explicit density here")
    check_integrable(compose(f, exp), t)

    def g(u):
        s = math.exp(u)
        try:
            ps = diagonal_direct(exp, s)
        except NonIntegrable as exc:
            raise NonIntegrable(f"p_s(0) is infinite at s = {s:.3g}: {exc}") from exc
        return ps * stable_half_subordinator_density(t, s) * s

    c = math.log(t * t / 6.0)  # peak of s eta_t(s) in u = ln s
    total = 0.0
    for a, b in ((c - 12.0, c), (c, c + 12.0), (c + 12.0, c + 60.0)):
        val, _ = quad(g, a, b, epsabs=0.0, epsrel=1e-11, limit=200)
        total += val
    # mass below u = c - 12: eta_t vanishes like exp(-t^2 / 4 s)
    return SubordinationResult(total, diagonal_direct(compose(f, exp), t))

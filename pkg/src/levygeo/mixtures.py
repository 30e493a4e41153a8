"""Normal variance mixtures: GIG mixing laws, generalized hyperbolic laws,
self-reciprocality and the subordination pipelines.

The generalized inverse Gaussian (GIG) density with parameters
(eta, kappa, lambda) is

    rho(s) = (kappa/eta)^lambda / (2 K_lambda(eta kappa)) s^(lambda-1)
             exp(-(eta^2 / s + kappa^2 s) / 2),

and mixing the Gaussian kernel (2 pi s)^(-n/2) det(Q)^(-1/2)
exp(-x.Q^-1 x / 2s) against it gives the generalized hyperbolic (GH) law.
Boundary parameters (eta = 0: gamma mixing; kappa = 0: inverse gamma
mixing) are handled by their limits.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import gammaln

from .bernstein import (
    BernsteinFn,
    MonotonicityReport,
    is_bernstein,
    is_completely_monotone,
    stable_half_subordinator_density,
)
from .errors import NonIntegrable, ParamOutOfRange, QuadratureFailure
from .quadrature import cosine_transform
from .special import log_bessel_k
from .verdicts import FAIL, PASS, PropertyReport

GAUSSIAN_KERNEL, CAUCHY_KERNEL, LAPLACE_KERNEL = "gaussian", "cauchy", "laplace"
_LOG_2PI = math.log(2.0 * math.pi)


# parameters -----------------------------------------------------------------


def check_gh_domain(eta: float, kappa: float, lam: float) -> None:
    """Admissible GIG/GH parameters.

    eta >= 0, kappa > 0 if lambda > 0; eta > 0, kappa > 0 if lambda = 0;
    eta > 0, kappa >= 0 if lambda < 0.
    """
    if not all(map(math.isfinite, (eta, kappa, lam))):
        raise ParamOutOfRange("GH parameters must be finite")
    if lam > 0:
        ok = eta >= 0 and kappa > 0
    elif lam == 0:
        ok = eta > 0 and kappa > 0
    else:
        ok = eta > 0 and kappa >= 0
    if not ok:
        raise ParamOutOfRange(f"(eta, kappa, lambda) = ({eta}, {kappa}, {lam}) outside the GIG domain")


@dataclass(frozen=True)
class GHParams:
    """GIG / GH parameters with a positive diagonal scale matrix Q."""

    eta: float
    kappa: float
    lam: float
    q: tuple = ()
    dim: int = 1

    def __post_init__(self):
        check_gh_domain(self.eta, self.kappa, self.lam)
        q = tuple(float(v) for v in self.q) or (1.0,) * self.dim
        if len(q) != self.dim:
            raise ParamOutOfRange(f"Q needs {self.dim} diagonal entries, got {len(q)}")
        if any(v <= 0 for v in q):
            raise ParamOutOfRange("Q diagonal entries must be positive")
        object.__setattr__(self, "q", q)

    @property
    def log_det_q(self) -> float:
        return float(np.sum(np.log(self.q)))

    def quad_form_inv(self, x) -> np.ndarray:
        """x . Q^-1 x (last axis = dim; scalars allowed when dim = 1)."""
        x = np.asarray(x, dtype=float)
        if self.dim == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            return x * x / self.q[0]
        return np.sum(x * x / np.asarray(self.q), axis=-1)

    def quad_form(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.dim == 1 and (xi.ndim == 0 or xi.shape[-1] != 1):
            return xi * xi * self.q[0]
        return np.sum(xi * xi * np.asarray(self.q), axis=-1)

    def to_dict(self) -> dict:
        return {"eta": self.eta, "kappa": self.kappa, "lambda": self.lam, "q": list(self.q), "dim": self.dim}


# GIG ------------------------------------------------------------------------------


def _log_gig_norm(eta: float, kappa: float, lam: float) -> float:
    """Log of the GIG normalizing constant, including boundary limits."""
    if eta == 0:  # gamma(lambda, rate kappa^2 / 2)
        return lam * math.log(0.5 * kappa * kappa) - math.lgamma(lam)
    if kappa == 0:  # inverse gamma(-lambda, scale eta^2 / 2)
        return -lam * math.log(0.5 * eta * eta) - math.lgamma(-lam)
    return lam * math.log(kappa / eta) - math.log(2.0) - float(log_bessel_k(lam, eta * kappa))


def log_gig_density(p: GHParams, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ParamOutOfRange("GIG density is defined for s > 0")
    e2, k2 = p.eta**2, p.kappa**2
    return _log_gig_norm(p.eta, p.kappa, p.lam) + (p.lam - 1.0) * np.log(s) - 0.5 * (e2 / s + k2 * s)


def gig_density(p: GHParams, s) -> np.ndarray:
    """GIG mixing density rho_{eta,kappa,lambda}(s)."""
    return np.exp(log_gig_density(p, s))


# GH ----------------------------------------------------------------------------------


def gh_log_charfn_radial(eta: float, kappa: float, lam: float, z) -> np.ndarray:
    """ln of the GH characteristic function at xi.Q xi = z^2."""
    z = np.abs(np.asarray(z, dtype=float))
    if eta == 0:  # variance gamma
        return -lam * np.log1p((z / kappa) ** 2)
    if kappa == 0:  # Student type: 2 (eta/2)^mu / Gamma(mu) z^mu K_mu(eta z)
        mu = -lam
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (
                math.log(2.0)
                + mu * math.log(0.5 * eta)
                - math.lgamma(mu)
                + mu * np.log(z)
                + np.asarray(log_bessel_k(mu, np.where(z > 0, eta * z, 1.0)), dtype=float)
            )
        return np.where(z > 0, out, 0.0)
    r = np.sqrt(kappa * kappa + z * z)
    return (
        lam * np.log(kappa / r)
        + np.asarray(log_bessel_k(lam, eta * r), dtype=float)
        - float(log_bessel_k(lam, eta * kappa))
    )


def gh_charfn(p: GHParams, xi) -> np.ndarray:
    """E exp(i xi.X) = (kappa^2/(kappa^2 + xi.Q xi))^(lambda/2) K_lambda(eta r) / K_lambda(eta kappa)."""
    return np.exp(gh_log_charfn_radial(p.eta, p.kappa, p.lam, np.sqrt(p.quad_form(xi))))


def gh_log_density(p: GHParams, x) -> np.ndarray:
    n, lam, eta, kappa = p.dim, p.lam, p.eta, p.kappa
    w = np.asarray(p.quad_form_inv(x), dtype=float)
    q = np.sqrt(eta * eta + w)
    base = -0.5 * n * _LOG_2PI - 0.5 * p.log_det_q
    if kappa == 0:
        mu = -lam
        return (
            base
            + 0.5 * n * math.log(2.0)
            + 2.0 * mu * math.log(eta)
            + gammaln(mu + 0.5 * n)
            - gammaln(mu)
            - (mu + 0.5 * n) * np.log(q * q)
        )
    nu = lam - 0.5 * n
    with np.errstate(divide="ignore"):
        lk = np.asarray(log_bessel_k(nu, np.where(q > 0, kappa * q, 1.0)), dtype=float)
        out = base + _log_gig_norm(eta, kappa, lam) + math.log(2.0) + lk + nu * np.log(q / kappa)
    if eta == 0:
        # x = 0 limit of K_nu(kappa q) (q/kappa)^nu
        at0 = (
            base + _log_gig_norm(eta, kappa, lam) + math.log(2.0)
            + (math.lgamma(nu) + (nu - 1.0) * math.log(2.0) - 2.0 * nu * math.log(kappa) if nu > 0 else math.inf)
        )
        out = np.where(q > 0, out, at0)
    return out


def gh_density(p: GHParams, x) -> np.ndarray:
    """Generalized hyperbolic density (symmetric, mean zero)."""
    return np.exp(gh_log_density(p, x))


def gh_delta_sq(p: GHParams, x) -> np.ndarray:
    """-ln(p(x)/p(0)), normalized so that it vanishes at the origin."""
    zero = np.zeros(p.dim) if p.dim > 1 else 0.0
    return gh_log_density(p, zero) - gh_log_density(p, x)


def gh_delta_slope(p: GHParams, r_range=(1e2, 1e3), points: int = 21) -> float:
    """Regression slope of delta^2 against |x| along the first axis.

    Asymptotically delta^2 grows like kappa |x| / sqrt(q_1).
    """
    r = np.linspace(*r_range, points)
    x = np.zeros((points, p.dim)) if p.dim > 1 else r
    if p.dim > 1:
        x[:, 0] = r
    return float(np.polyfit(r, gh_delta_sq(p, x), 1)[0])


# mixtures ------------------------------------------------------------------------------


@dataclass
class MixtureSpec:
    """Kernel family and a mixing density on (0, inf) given through its log.

    ``base`` is one of ``gaussian`` (variance s, covariance sQ), ``cauchy``
    (scale s) or ``laplace`` (rate s, one-dimensional).
    """

    base: str
    log_mixing: Callable
    dim: int = 1
    q: tuple = ()
    label: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.base not in (GAUSSIAN_KERNEL, CAUCHY_KERNEL, LAPLACE_KERNEL):
            raise ParamOutOfRange(f"unknown kernel {self.base!r}")
        if self.base == LAPLACE_KERNEL and self.dim != 1:
            raise ParamOutOfRange("the Laplace kernel is one-dimensional")
        self.q = tuple(float(v) for v in self.q) or (1.0,) * self.dim

    @classmethod
    def gig(cls, p: GHParams) -> "MixtureSpec":
        return cls(GAUSSIAN_KERNEL, lambda s: log_gig_density(p, s), p.dim, p.q, "gig", p.to_dict())

    @classmethod
    def half_stable(cls, t: float, base: str = GAUSSIAN_KERNEL, dim: int = 1) -> "MixtureSpec":
        """Mixing by the law at time t of the one-half stable subordinator."""

        def logm(s):
            s = np.asarray(s, dtype=float)
            return math.log(t / math.sqrt(4.0 * math.pi)) - 1.5 * np.log(s) - t * t / (4.0 * s)

        return cls(base, logm, dim, (), "half_stable", {"t": t})

    @classmethod
    def from_density(cls, base: str, density: Callable, dim: int = 1, label: str = "custom") -> "MixtureSpec":
        def logm(s):
            with np.errstate(divide="ignore"):
                return np.log(np.asarray(density(s), dtype=float))

        return cls(base, logm, dim, (), label)

    def mixing_mass(self) -> float:
        return _integrate_log(lambda u: self.log_mixing(np.exp(u)) + u)

    def log_kernel(self, s: np.ndarray, x) -> np.ndarray:
        n = self.dim
        x = np.asarray(x, dtype=float)
        if self.base == GAUSSIAN_KERNEL:
            w = float(np.sum(x * x / np.asarray(self.q))) if n > 1 else float(x * x / self.q[0])
            return -0.5 * n * (_LOG_2PI + np.log(s)) - 0.5 * float(np.sum(np.log(self.q))) - w / (2.0 * s)
        if self.base == CAUCHY_KERNEL:
            r2 = float(np.sum(x * x)) if n > 1 else float(x * x)
            c = gammaln(0.5 * (n + 1)) - 0.5 * (n + 1) * math.log(math.pi)
            return c + np.log(s) - 0.5 * (n + 1) * np.log(s * s + r2)
        return np.log(0.5 * s) - s * abs(float(x))


def _integrate_log(logf: Callable, lo: float = -300.0, hi: float = 300.0, rtol: float = 1e-11) -> float:
    """int exp(logf(u)) du over the line, restricted to where logf > peak - 60."""
    u = np.linspace(lo, hi, 3001)
    with np.errstate(all="ignore"):
        lv = np.asarray(logf(u), dtype=float)
    lv = np.where(np.isfinite(lv), lv, -np.inf)
    k = int(np.argmax(lv))
    peak = lv[k]
    if not np.isfinite(peak):
        return 0.0
    keep = np.nonzero(lv > peak - 60.0)[0]
    a, b = u[max(keep[0] - 1, 0)], u[min(keep[-1] + 1, u.size - 1)]
    if keep[0] == 0 or keep[-1] == u.size - 1:
        raise QuadratureFailure(
            f"mixture integrand is still significant at the edge of u = ln s in [{lo}, {hi}]"
        )

    def g(v):
        with np.errstate(all="ignore"):
            val = float(np.asarray(logf(np.array([v])), dtype=float)[0])
        return math.exp(val - peak) if np.isfinite(val) else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(g, a, b, points=[u[k]], epsabs=0.0, epsrel=rtol, limit=400)
        except IntegrationWarning as exc:
            raise QuadratureFailure(f"mixture quadrature did not converge on [{a:.3g}, {b:.3g}]: {exc}") from exc
    return val * math.exp(peak)


def variance_mean_mixture(m: MixtureSpec, x) -> np.ndarray:
    """p(x) = int kernel_s(x) rho(s) ds, integrated in u = ln s.

    ``x`` is a scalar or vector of points (shape (k,) in 1-D, (k, n) otherwise).
    """
    x = np.asarray(x, dtype=float)
    pts = x.reshape(-1, m.dim) if m.dim > 1 else x.reshape(-1)
    out = np.empty(pts.shape[0])
    for i, xi in enumerate(pts):
        out[i] = _integrate_log(lambda u: m.log_kernel(np.exp(u), xi) + m.log_mixing(np.exp(u)) + u)
    return out.reshape(x.shape[:-1] if m.dim > 1 else x.shape)


# self-reciprocality ----------------------------------------------------------------------


def self_reciprocal_check(
    mixing: Callable, n: int = 1, grid=None, tol: float = 1e-12, fourier: bool = True, xi=None
) -> PropertyReport:
    """Test rho(s) = s^((n-4)/2) rho(1/s) on a log grid.

    On PASS (and n = 1) the consequence for the Gaussian mixture is also
    verified: its characteristic function equals p(xi) / p(0).
    """
    s = np.geomspace(1e-2, 1e2, 41) if grid is None else np.asarray(grid, dtype=float)
    lhs = np.asarray(mixing(s), dtype=float)
    rhs = s ** ((n - 4) / 2.0) * np.asarray(mixing(1.0 / s), dtype=float)
    dev = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs)).clip(min=1e-300)
    k = int(np.argmax(dev))
    worst = float(dev[k])
    details = {"grid": [float(s[0]), float(s[-1]), int(s.size)]}
    notes = []
    if worst > tol:
        return PropertyReport(
            "self_reciprocal", FAIL, worst, tol, int(s.size),
            witness={"s": float(s[k]), "rho(s)": float(lhs[k]), "s^((n-4)/2) rho(1/s)": float(rhs[k])},
            details=details,
        )
    if fourier and n == 1:
        spec = MixtureSpec.from_density(GAUSSIAN_KERNEL, mixing, 1, "self_reciprocal")
        xi = np.array([0.25, 0.5, 1.0, 2.0, 3.0]) if xi is None else np.asarray(xi, dtype=float)
        p0 = float(variance_mean_mixture(spec, 0.0))
        cf = np.array([2.0 * cosine_transform(lambda u: variance_mean_mixture(spec, u), v) for v in xi])
        target = variance_mean_mixture(spec, xi) / p0
        fdev = float(np.max(np.abs(cf - target)))
        details["fourier_max_abs_dev"] = fdev
        notes.append("characteristic function checked against p(xi)/p(0) by cosine quadrature")
        if fdev > 1e-7:
            return PropertyReport("self_reciprocal", FAIL, fdev, 1e-7, int(s.size) + xi.size, details=details, notes=notes)
    return PropertyReport("self_reciprocal", PASS, worst, tol, int(s.size), details=details, notes=notes)


def scaled_reciprocal_check(p: GHParams, grid=None, tol: float = 1e-12) -> PropertyReport:
    """rho_{eta,kappa,lambda}(s) = (kappa/eta)^(2 lambda) s^((n-4)/2) rho_{kappa,eta,lambda}(1/s) at lambda = n/4."""
    s = np.geomspace(1e-2, 1e2, 41) if grid is None else np.asarray(grid, dtype=float)
    swapped = GHParams(p.kappa, p.eta, p.lam, p.q, p.dim)
    lhs = log_gig_density(p, s)
    rhs = 2 * p.lam * math.log(p.kappa / p.eta) + 0.5 * (p.dim - 4) * np.log(s) + log_gig_density(swapped, 1.0 / s)
    dev = np.abs(np.expm1(lhs - rhs))
    k = int(np.argmax(dev))
    verdict = PASS if dev[k] <= tol else FAIL
    wit = None if verdict == PASS else {"s": float(s[k])}
    return PropertyReport("scaled_reciprocal", verdict, float(dev[k]), tol, int(s.size), witness=wit)


# pipelines ---------------------------------------------------------------------------------


def _profile(logp: Callable, p0: float) -> Callable:
    """u -> -ln(p(sqrt u) / p(0)) for a density evaluator in log form."""

    def f(u):
        u = np.asarray(u, dtype=float)
        return p0 - logp(np.sqrt(u))

    return f


@dataclass
class PipelineResult:
    x: np.ndarray
    density: np.ndarray
    candidate: Callable
    report: MonotonicityReport
    notes: list = field(default_factory=list)


def sinh2_density(x) -> np.ndarray:
    """p_2^S(x) = (pi/2)(u coth u - 1) / sinh^2 u with u = pi x / 2."""
    from .table import closed_form

    return closed_form("sinh2", 2.0, x)


def sinh2_charfn(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    with np.errstate(invalid="ignore"):
        r = np.where(xi == 0, 1.0, xi / np.sinh(np.where(xi == 0, 1.0, xi)))
    return r * r


def sinh2_pair_check(xi=(0.5, 1.0, 2.0, 4.0), tol: float = 1e-8) -> PropertyReport:
    """Forward transform of p_2^S against (xi / sinh xi)^2, and p_2^S(0) = pi/6."""
    xi = np.asarray(xi, dtype=float)
    fwd = np.array([2.0 * cosine_transform(sinh2_density, v) for v in xi])
    dev = np.abs(fwd - sinh2_charfn(xi))
    at0 = float(sinh2_density(np.array([0.0]))[0])
    d0 = abs(at0 - math.pi / 6.0)
    worst = float(max(dev.max(), d0 / 1e-2))  # the origin value is held to 1e-10
    ok = dev.max() <= tol and d0 <= 1e-10
    return PropertyReport(
        "sinh2_pair", PASS if ok else FAIL, worst, tol, xi.size + 1,
        details={"xi": xi.tolist(), "forward": fwd.tolist(), "p(0)": at0, "p(0)-pi/6": d0},
        notes=["the mixing law has no closed form; the printed density/CF pair is validated instead"],
    )


def proc41_pipeline(mixing, t: float = 1.0, x_grid=None, grid=None) -> PipelineResult:
    """Gaussian mixture p_t, profile f_t(u) = -ln(p_t(sqrt u)/p_t(0)) and its Bernstein test.

    ``mixing`` is a :class:`MixtureSpec`, or ``"sinh2"`` for the squared
    sinh mixing whose density is taken from its closed form.
    """
    x_grid = np.linspace(0.0, 5.0, 11) if x_grid is None else np.asarray(x_grid, dtype=float)
    notes = []
    if isinstance(mixing, str):
        if mixing != "sinh2":
            raise ParamOutOfRange(f"unknown named mixing {mixing!r}")
        logp = lambda x: np.log(sinh2_density(np.atleast_1d(x)))  # noqa: E731
        notes.append("closed-form target density; no Laplace inversion of the mixing law")
    else:
        if mixing.base != GAUSSIAN_KERNEL:
            raise ParamOutOfRange("the pipeline mixes Gaussian kernels")
        logp = lambda x: np.log(variance_mean_mixture(mixing, np.atleast_1d(x)))  # noqa: E731
    dens = np.exp(logp(x_grid))
    p0 = float(logp(0.0)[0])
    cand = _profile(logp, p0)
    rep = is_bernstein(cand, grid=grid if grid is not None else np.geomspace(1e-2, 1e2, 21), k_max=4)
    return PipelineResult(x_grid, dens, cand, rep, notes)


@dataclass
class Sub15Result:
    t: float
    candidate: Callable
    bernstein: MonotonicityReport
    difference_cm: MonotonicityReport
    notes: list = field(default_factory=list)


def sub15_experiment(f: BernsteinFn, t: float, grid=None, k_max: int = 4) -> Sub15Result:
    """Exponent f(|xi|) on the line; test g_t(u) = -ln(p_t(sqrt u)/p_t(0)).

    Raises
    ------
    NonIntegrable
        If exp(-t f(r)) is not integrable.
    """
    from .density import check_integrable, density_at
    from .exponents import CharExponent, compose

    exp = compose(f, CharExponent.stable(1.0))
    check_integrable(exp, t)
    tail = quad(lambda r: math.exp(-t * float(f(r))), 1.0, np.inf, limit=200)[0]
    if not math.isfinite(tail):
        raise NonIntegrable("int exp(-t f(r)) dr diverges")
    p0 = float(density_at(exp, t, np.zeros(1))[0])

    def g(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return -np.log(density_at(exp, t, np.sqrt(u)) / p0)

    grid = np.geomspace(1e-2, 1e2, 21) if grid is None else np.asarray(grid, dtype=float)
    b = is_bernstein(g, grid=grid, k_max=k_max)
    h = 0.1

    def dd(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return (g(u * (1 + h)) - g(u)) / (h * u)

    cm = is_completely_monotone(dd, grid=grid, k_max=k_max - 1)
    return Sub15Result(t, g, b, cm)


def laplace_mixture(phi: Callable, x_grid=None, t: Optional[float] = None, grid=None) -> PipelineResult:
    """p(x) = int (s/2) e^(-s|x|) phi(s) ds and the Bernstein test of g(|x|) = -ln(p/p(0)).

    ``phi`` is first checked for complete monotonicity; a failure puts the
    run in diagnostic mode (recorded in ``notes``).
    """
    x_grid = np.linspace(0.0, 5.0, 11) if x_grid is None else np.asarray(x_grid, dtype=float)
    notes = []
    cm = is_completely_monotone(phi, grid=np.geomspace(1e-2, 1e2, 21))
    if not cm.verdict == PASS:
        notes.append(f"mixing density failed the complete-monotonicity check ({cm.verdict}); diagnostic mode")
    spec = MixtureSpec.from_density(LAPLACE_KERNEL, phi, 1, "laplace")

    def logp(x):
        return np.log(variance_mean_mixture(spec, np.atleast_1d(np.abs(x))))

    p0 = float(logp(0.0)[0])

    def g(r):
        return p0 - logp(np.asarray(r, dtype=float))

    dens = np.exp(logp(x_grid))
    rep = is_bernstein(g, grid=grid if grid is not None else np.geomspace(1e-2, 1e2, 21), k_max=4)
    return PipelineResult(x_grid, dens, g, rep, notes)

"""Catalog of real symmetric continuous negative definite functions psi.

Every catalog exponent is evaluated through |xi| (or block norms), so
psi(xi) == psi(-xi) holds bit for bit.  Radial kinds psi(xi) = f(|xi|)
also expose the inverse of their radial profile, which drives the exact
ball-volume formulas in :mod:`levygeo.geometry`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .bernstein import BernsteinFn, bf_inverse
from .errors import (
    ConfigError,
    DimensionMismatch,
    NonzeroAtOrigin,
    OutOfRange,
    ParamOutOfRange,
    RadiusTooLarge,
)
from .verdicts import FAIL, INCONCLUSIVE, PASS, PropertyReport, jsonable

CONFIRMED_ON_RANGE, REJECTED = "CONFIRMED_ON_RANGE", "REJECTED"

KINDS = (
    "gaussian",
    "cauchy",
    "stable",
    "meixner",
    "relativistic",
    "logcauchy",
    "truncgauss",
    "sinh_ratio",
    "gh",
    "sum_aniso",
    "composite",
    "table",
    "custom",
)

# JSON keys accepted per kind (besides "kind" and "dim")
_JSON_FIELDS = {
    "gaussian": {"c"},
    "cauchy": set(),
    "stable": {"alpha"},
    "meixner": set(),
    "relativistic": {"mass"},
    "logcauchy": {"scale"},
    "truncgauss": set(),
    "sinh_ratio": set(),
    "gh": {"eta", "kappa", "lambda"},
    "sum_aniso": {"alpha", "beta", "m", "n"},
    "composite": {"bf", "base"},
    "table": {"row"},
}

RTOL_ROOT = 1e-13
_LN2 = math.log(2.0)


def _log_cosh(z):
    z = np.abs(z)
    return z + np.log1p(np.exp(-2.0 * z)) - _LN2


def _log_sinh_ratio(z):
    """ln(sinh z / z) without cancellation at either end."""
    z = np.abs(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    small = z < 0.5
    zs = z[small] ** 2
    # sinh z / z - 1 = sum z^(2k) / (2k+1)!
    series = zs / 6.0 * (1 + zs / 20.0 * (1 + zs / 42.0 * (1 + zs / 72.0 * (1 + zs / 110.0 * (1 + zs / 156.0)))))
    out[small] = np.log1p(series)
    zl = z[~small]
    out[~small] = zl - _LN2 + np.log1p(-np.exp(-2.0 * zl)) - np.log(zl)
    return out


@dataclass(frozen=True)
class CharExponent:
    """A characteristic exponent psi on R^dim.

    Use the classmethod constructors (``CharExponent.stable(1.5)``) or
    :func:`from_spec`.  ``alpha`` is the stability index for ``stable``
    (psi = |xi|^alpha) and the first-block exponent for ``sum_aniso``.
    """

    kind: str
    dim: int = 1
    c: float = 0.5
    alpha: float = 1.0
    beta: float = 1.0
    mass: float = 1.0
    scale: float = 1.0
    eta: float = 1.0
    kappa: float = 1.0
    lam: float = 1.0
    m: int = 1
    n: int = 1
    bf: Optional[BernsteinFn] = None
    base: Optional["CharExponent"] = None
    row: Optional[str] = None
    hook: Optional[Callable] = field(default=None, compare=False, repr=False)
    hook_radial: Optional[Callable] = field(default=None, compare=False, repr=False)
    label: str = ""

    def __post_init__(self):
        k = self.kind
        if k not in KINDS:
            raise ParamOutOfRange(f"unknown exponent kind {k!r}")
        if not (isinstance(self.dim, (int, np.integer)) and self.dim >= 1):
            raise ParamOutOfRange(f"dim must be a positive integer, got {self.dim}")
        if k == "gaussian" and not self.c > 0:
            raise ParamOutOfRange(f"gaussian coefficient must be positive, got {self.c}")
        if k == "stable" and not 0.0 < self.alpha <= 2.0:
            raise ParamOutOfRange(f"stable index must lie in (0, 2], got {self.alpha}")
        if k == "relativistic" and not self.mass > 0:
            raise ParamOutOfRange(f"relativistic mass must be positive, got {self.mass}")
        if k == "logcauchy" and not self.scale > 0:
            raise ParamOutOfRange(f"logcauchy scale must be positive, got {self.scale}")
        if k == "sum_aniso":
            if not (0 < self.alpha <= 2 and 0 < self.beta <= 2):
                raise ParamOutOfRange("sum_aniso exponents must lie in (0, 2]")
            if self.m < 1 or self.n < 1 or self.dim != self.m + self.n:
                raise ParamOutOfRange("sum_aniso needs block sizes m, n >= 1 with dim = m + n")
        if k == "gh":
            from .mixtures import check_gh_domain

            check_gh_domain(self.eta, self.kappa, self.lam)
        if k == "composite":
            if self.bf is None or self.base is None:
                raise ParamOutOfRange("composite needs bf and base")
            if self.base.dim != self.dim:
                raise DimensionMismatch("composite dim must equal the base dim")
        if k == "table":
            from .table import ROWS

            if self.row not in ROWS:
                raise ParamOutOfRange(f"unknown table row {self.row!r}")
            if self.dim != 1:
                raise ParamOutOfRange("table rows are one-dimensional")
        if k == "custom" and self.hook is None and self.hook_radial is None:
            raise ParamOutOfRange("custom exponents need a callable")

    # constructors -----------------------------------------------------
    @classmethod
    def gaussian(cls, c: float = 0.5, dim: int = 1):
        """psi(xi) = c |xi|^2; c = 1/2 is standard Brownian motion."""
        return cls("gaussian", dim=dim, c=c)

    @classmethod
    def cauchy(cls, dim: int = 1):
        return cls("cauchy", dim=dim)

    @classmethod
    def stable(cls, alpha: float, dim: int = 1):
        """psi(xi) = |xi|^alpha with stability index alpha in (0, 2]."""
        return cls("stable", dim=dim, alpha=alpha)

    @classmethod
    def meixner(cls, dim: int = 1):
        return cls("meixner", dim=dim)

    @classmethod
    def relativistic(cls, mass: float = 1.0, dim: int = 1):
        return cls("relativistic", dim=dim, mass=mass)

    @classmethod
    def logcauchy(cls, scale: float = 1.0, dim: int = 1):
        """psi(xi) = ln(1 + |xi|^2 / scale^2)."""
        return cls("logcauchy", dim=dim, scale=scale)

    @classmethod
    def truncgauss(cls, dim: int = 1):
        """psi(xi) = 1 - exp(-|xi|^2)."""
        return cls("truncgauss", dim=dim)

    @classmethod
    def sinh_ratio(cls, dim: int = 1):
        """psi(xi) = ln(sinh|xi| / |xi|)."""
        return cls("sinh_ratio", dim=dim)

    @classmethod
    def gh(cls, eta: float, kappa: float, lam: float, dim: int = 1):
        """Exponent of the symmetric generalized hyperbolic law (Q = identity)."""
        return cls("gh", dim=dim, eta=eta, kappa=kappa, lam=lam)

    @classmethod
    def sum_aniso(cls, alpha: float, beta: float, m: int = 1, n: int = 1):
        """psi(xi, eta) = |xi|^alpha + |eta|^beta on R^m x R^n."""
        return cls("sum_aniso", dim=m + n, alpha=alpha, beta=beta, m=m, n=n)

    @classmethod
    def table(cls, row: str):
        return cls("table", row=row)

    @classmethod
    def from_callable(cls, fn: Callable = None, dim: int = 1, radial: Callable = None, label: str = "custom"):
        """Test hook: wrap an arbitrary function (not reachable from JSON).

        ``fn`` maps an array of shape (..., dim) (or (...) when dim is 1) to
        values; ``radial`` alternatively gives psi as a function of |xi|.
        """
        return cls("custom", dim=dim, hook=fn, hook_radial=radial, label=label)

    # structure --------------------------------------------------------
    @property
    def is_radial(self) -> bool:
        if self.kind == "sum_aniso":
            return False
        if self.kind == "custom":
            return self.hook_radial is not None
        if self.kind == "composite":
            return self.base.is_radial
        return True

    def radial(self, z):
        """psi as a function of z = |xi| >= 0 (radial kinds only)."""
        z = np.abs(np.asarray(z, dtype=float))
        k = self.kind
        if k == "gaussian":
            return self.c * z * z
        if k == "cauchy":
            return z.copy()
        if k == "stable":
            return z**self.alpha
        if k == "meixner":
            return _log_cosh(z)
        if k == "relativistic":
            # sqrt(m^2 + z^2) - m without cancellation
            return z * z / (np.sqrt(self.mass**2 + z * z) + self.mass)
        if k == "logcauchy":
            return np.log1p((z / self.scale) ** 2)
        if k == "truncgauss":
            return -np.expm1(-z * z)
        if k == "sinh_ratio":
            return _log_sinh_ratio(z)
        if k == "gh":
            from .mixtures import gh_log_charfn_radial

            return -gh_log_charfn_radial(self.eta, self.kappa, self.lam, z)
        if k == "composite":
            return np.asarray(self.bf(self.base.radial(z)), dtype=float)
        if k == "table":
            from .table import row_psi

            return row_psi(self.row, z)
        if k == "custom" and self.hook_radial is not None:
            return np.asarray(self.hook_radial(z), dtype=float)
        raise ParamOutOfRange(f"{k} exponent is not radial")

    def sup(self) -> float:
        """lim_{|xi| -> inf} psi(xi) for radial kinds (inf when unbounded)."""
        k = self.kind
        if k == "truncgauss":
            return 1.0
        if k == "composite":
            inner = self.base.sup()
            if self.bf.unbounded:
                return inner
            if self.bf.kind == "one_minus_exp":
                return float(-np.expm1(-inner)) if np.isfinite(inner) else 1.0
            if self.bf.kind == "tabulated":
                return float(self.bf.values[-1])
            return float(self.bf(inner)) if np.isfinite(inner) else math.inf
        if k == "custom":
            return float(self.radial(1e12))
        return math.inf

    def radial_inverse(self, y):
        """z = |xi| with psi = y on the radial profile.

        Raises
        ------
        RadiusTooLarge
            If y is at or above the supremum of psi.
        """
        y_arr = np.asarray(y, dtype=float)
        if np.any(y_arr < 0):
            raise OutOfRange("level must be nonnegative")
        sup = self.sup()
        if np.any(y_arr >= sup):
            raise RadiusTooLarge(f"level {np.max(y_arr):.6g} is not below sup psi = {sup:.6g}")
        k = self.kind
        if k == "gaussian":
            out = np.sqrt(y_arr / self.c)
        elif k == "cauchy":
            out = y_arr.copy()
        elif k == "stable":
            out = y_arr ** (1.0 / self.alpha)
        elif k == "meixner":
            # acosh(e^y) written to avoid overflow and cancellation
            w = np.expm1(y_arr)
            big = y_arr > 20.0
            out = np.where(
                big,
                y_arr + np.log1p(np.sqrt(-np.expm1(-2.0 * np.minimum(y_arr, 700.0)))),
                np.log1p(w + np.sqrt(w * (w + 2.0))),
            )
        elif k == "relativistic":
            out = np.sqrt(y_arr * (y_arr + 2.0 * self.mass))
        elif k == "logcauchy":
            with np.errstate(over="ignore"):
                out = self.scale * np.sqrt(np.expm1(y_arr))
        elif k == "truncgauss":
            out = np.sqrt(-np.log1p(-y_arr))
        elif k == "composite" and self.base.kind != "custom":
            out = np.asarray(self.base.radial_inverse(bf_inverse(self.bf, y_arr)), dtype=float)
        else:
            out = np.vectorize(self._radial_root, otypes=[float])(y_arr)
        return out if out.ndim else float(out)

    def _radial_root(self, y: float) -> float:
        if y == 0:
            return 0.0
        hi = 1.0
        while float(self.radial(hi)) < y:
            hi *= 2.0
            if hi > 1e300:
                raise RadiusTooLarge(f"level {y} not reached on the radial profile")
        lo = hi / 2.0
        while lo > 0 and float(self.radial(lo)) >= y:
            # geometric descent keeps the bracket narrow for tiny levels
            lo = lo * 1e-3 if lo > 1e-297 else 0.0
        return brentq(lambda z: float(self.radial(z)) - y, lo, hi, xtol=1e-300, rtol=RTOL_ROOT, maxiter=500)

    # evaluation -------------------------------------------------------
    def __call__(self, xi):
        return eval_psi(self, xi)

    # serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        k = self.kind
        d = {"kind": k, "dim": int(self.dim)}
        if k == "gaussian":
            d["c"] = self.c
        elif k == "stable":
            d["alpha"] = self.alpha
        elif k == "relativistic":
            d["mass"] = self.mass
        elif k == "logcauchy":
            d["scale"] = self.scale
        elif k == "gh":
            d.update(eta=self.eta, kappa=self.kappa, **{"lambda": self.lam})
        elif k == "sum_aniso":
            d.update(alpha=self.alpha, beta=self.beta, m=int(self.m), n=int(self.n))
        elif k == "composite":
            d["bf"] = self.bf.to_dict()
            d["base"] = self.base.to_dict()
        elif k == "table":
            d["row"] = self.row
        elif k == "custom":
            d["label"] = self.label
        return d

    def to_json(self) -> str:
        return json.dumps(jsonable(self.to_dict()), sort_keys=True, separators=(",", ":"))


def eval_psi(exp: CharExponent, xi):
    """Evaluate psi at one or many points.

    Parameters
    ----------
    exp : CharExponent
    xi : array_like
        For dim 1 any shape (each entry is a point).  For dim n > 1 the last
        axis must have length n.

    Returns
    -------
    float or ndarray
    """
    xi = np.asarray(xi, dtype=float)
    if not np.all(np.isfinite(xi)):
        raise ParamOutOfRange("xi must be finite")
    n = exp.dim
    if exp.kind == "custom" and exp.hook is not None:
        if n > 1 and (xi.ndim == 0 or xi.shape[-1] != n):
            raise DimensionMismatch(f"expected last axis of length {n}, got shape {xi.shape}")
        out = np.asarray(exp.hook(xi), dtype=float)
        return out if out.ndim else float(out)
    if n == 1:
        if xi.ndim >= 1 and xi.shape[-1] == 1 and xi.ndim > 1:
            xi = xi[..., 0]
        z = np.abs(xi)
    else:
        if xi.ndim == 0 or xi.shape[-1] != n:
            raise DimensionMismatch(f"expected last axis of length {n}, got shape {xi.shape}")
        if exp.kind == "sum_aniso":
            a = np.sqrt(np.sum(xi[..., : exp.m] ** 2, axis=-1))
            b = np.sqrt(np.sum(xi[..., exp.m :] ** 2, axis=-1))
            out = a**exp.alpha + b**exp.beta
            return out if out.ndim else float(out)
        z = np.sqrt(np.sum(xi * xi, axis=-1))
    if exp.kind == "sum_aniso":
        raise DimensionMismatch("sum_aniso needs dim >= 2")
    out = exp.radial(z)
    return out if np.ndim(out) else float(out)


# structural checks ----------------------------------------------------------


@dataclass
class PointSampler:
    """Seeded sampler of point pairs (xi, eta) in a box [low, high]^n."""

    n_pairs: int = 10_000
    low: float = -50.0
    high: float = 50.0
    seed: int = 0
    extra: tuple = ()

    def pairs(self, dim: int):
        rng = np.random.default_rng(self.seed)
        a = rng.uniform(self.low, self.high, size=(self.n_pairs, dim))
        b = rng.uniform(self.low, self.high, size=(self.n_pairs, dim))
        if self.extra:
            ex = np.asarray(self.extra, dtype=float).reshape(-1, 2, dim)
            a = np.concatenate([ex[:, 0], a])
            b = np.concatenate([ex[:, 1], b])
        return a, b


def _pts(exp, a):
    return a[:, 0] if exp.dim == 1 else a


def check_subadditivity(exp: CharExponent, sampler: Optional[PointSampler] = None) -> PropertyReport:
    """Check sqrt(psi(xi + eta)) <= sqrt(psi(xi)) + sqrt(psi(eta)) on sampled pairs."""
    sampler = sampler or PointSampler()
    a, b = sampler.pairs(exp.dim)
    ra = np.sqrt(eval_psi(exp, _pts(exp, a)))
    rb = np.sqrt(eval_psi(exp, _pts(exp, b)))
    rab = np.sqrt(eval_psi(exp, _pts(exp, a + b)))
    scale = float(np.max(np.concatenate([ra, rb, rab])))
    tol = 1e-12 * (1.0 + scale)
    excess = rab - ra - rb
    i = int(np.argmax(excess))
    worst = float(excess[i])
    tight = int(np.sum(np.abs(excess) <= tol))
    verdict = PASS if worst <= tol else FAIL
    witness = None
    if verdict == FAIL:
        witness = {"xi": a[i].tolist(), "eta": b[i].tolist(), "violation": worst}
    return PropertyReport(
        "subadditivity",
        verdict,
        worst,
        tol,
        len(ra),
        witness,
        {"worst_slack": float(-np.max(excess)), "tight_pairs": tight, "seed": sampler.seed},
    )


@dataclass
class RadiusBounds:
    """Euclidean radii m(r) <= M(r) sandwiching the metric ball of radius r."""

    r: float
    m: float
    M: float
    method: str = "exact_radial"
    rays: int = 0
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def directions(dim: int, count: Optional[int] = None) -> np.ndarray:
    """Deterministic unit vectors: both signs in 1-D, equiangular in 2-D,
    a Fibonacci lattice on the sphere in 3-D and beyond (first 3 axes)."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        k = count or 64
        th = 2.0 * np.pi * np.arange(k) / k
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    k = count or 256
    i = np.arange(k) + 0.5
    phi = np.arccos(1.0 - 2.0 * i / k)
    th = np.pi * (1.0 + 5.0**0.5) * i
    v = np.stack([np.cos(th) * np.sin(phi), np.sin(th) * np.sin(phi), np.cos(phi)], axis=1)
    if dim > 3:
        rng = np.random.default_rng(12345)
        v = rng.standard_normal((k, dim))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v


def _ray_crossings(exp: CharExponent, u: np.ndarray, level: float, rho_max: float):
    """First and last crossing of psi(rho u) = level along the ray, rho <= rho_max."""
    rho = np.concatenate([[0.0], np.geomspace(1e-12 * rho_max, rho_max, 600)])
    vals = eval_psi(exp, rho[:, None] * u[None, :]) - level
    if vals[-1] < 0:
        return None
    sign = vals >= 0
    idx = np.nonzero(sign[1:] != sign[:-1])[0]
    f = lambda q: float(eval_psi(exp, q * u)) - level  # noqa: E731
    first = brentq(f, rho[idx[0]], rho[idx[0] + 1], xtol=1e-300, rtol=RTOL_ROOT)
    last = brentq(f, rho[idx[-1]], rho[idx[-1] + 1], xtol=1e-300, rtol=RTOL_ROOT)
    return first, last


def radius_bounds(exp: CharExponent, r: float, rays: Optional[int] = None, rho_max: float = 1e8) -> RadiusBounds:
    """m(r) = inf and M(r) = sup of |eta| over the level set sqrt(psi(eta)) = r.

    Radial kinds are exact (bracketed root of the profile).  Other kinds
    are estimated along a fixed set of rays; the minimum over rays is an
    upper estimate of m and the maximum a lower estimate of M.
    """
    if not r > 0:
        raise OutOfRange(f"radius must be positive, got {r}")
    level = float(r) ** 2
    if exp.is_radial:
        z = float(exp.radial_inverse(level))
        return RadiusBounds(float(r), z, z)
    us = directions(exp.dim, rays)
    first, last = [], []
    for u in us:
        cr = _ray_crossings(exp, u, level, rho_max)
        if cr is None:
            raise RadiusTooLarge(f"level r^2 = {level:.6g} not reached within |xi| <= {rho_max:g}")
        first.append(cr[0])
        last.append(cr[1])
    return RadiusBounds(
        float(r),
        float(min(first)),
        float(max(last)),
        method="ray_sampled",
        rays=len(us),
        notes=[f"estimates from {len(us)} rays: m is an upper and M a lower estimate"],
    )


@dataclass
class RadialProbe:
    """Shell radii R_1 < ... < R_K probed for inf_{|xi| >= R_k} psi(xi)."""

    r_max: float = 1e3
    r_min: float = 1.0
    count: int = 13
    samples: int = 20_001
    rays: Optional[int] = None

    @property
    def radii(self) -> np.ndarray:
        return np.geomspace(self.r_min, self.r_max, self.count)


@dataclass
class MetricVerdict:
    verdict: str
    radii: np.ndarray
    floors: np.ndarray
    directions: int
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def is_metric_generating(exp: CharExponent, probe: Optional[RadialProbe] = None) -> MetricVerdict:
    """Estimate inf_{|xi| >= R_k} psi(xi) on a finite range of shells.

    The verdict is qualified by the probed range: CONFIRMED_ON_RANGE when
    all floors stay positive and do not decay, REJECTED when psi vanishes
    (to rounding) away from the origin, INCONCLUSIVE otherwise.
    """
    probe = probe or RadialProbe()
    us = directions(exp.dim, probe.rays)
    rho = np.linspace(probe.r_min, probe.r_max, probe.samples)
    radii = probe.radii
    floors = np.full(len(radii), np.inf)
    for u in us:
        vals = np.asarray(eval_psi(exp, rho[:, None] * u[None, :]), dtype=float)
        # refine interior local minima of the samples with bounded Brent
        loc = np.nonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:]))[0] + 1
        refined_rho, refined_val = [], []
        for i in loc[:2000]:
            res = minimize_scalar(
                lambda q: float(np.ravel(eval_psi(exp, q * u))[0]),
                bounds=(rho[i - 1], rho[i + 1]),
                method="bounded",
                options={"xatol": 1e-12},
            )
            refined_rho.append(res.x)
            refined_val.append(res.fun)
        all_rho = np.concatenate([rho, refined_rho])
        all_val = np.concatenate([vals, refined_val])
        for k, R in enumerate(radii):
            sel = all_rho >= R
            if sel.any():
                floors[k] = min(floors[k], float(all_val[sel].min()))
    notes = [f"range |xi| in [{probe.r_min:g}, {probe.r_max:g}], {len(us)} directions"]
    scale = max(1.0, float(np.max(floors[np.isfinite(floors)])) if np.isfinite(floors).any() else 1.0)
    if np.min(floors) <= 1e-10 * scale:
        verdict = REJECTED
        notes.append("psi vanishes away from the origin (periodic or degenerate exponent)")
    elif floors[-1] < 0.1 * floors[0]:
        verdict = INCONCLUSIVE
        notes.append("running infimum decays across the probed shells")
    else:
        verdict = CONFIRMED_ON_RANGE
    return MetricVerdict(verdict, radii, floors, len(us), notes)


def compose(f: BernsteinFn, exp: CharExponent) -> CharExponent:
    """Subordinate ``exp`` by the Bernstein function ``f`` (requires f(0) = 0)."""
    try:
        f0 = float(f(0.0))
    except OutOfRange as exc:
        raise NonzeroAtOrigin("f(0) is undefined for this Bernstein function") from exc
    if f0 != 0.0:
        raise NonzeroAtOrigin(f"composition needs f(0) = 0, got {f0}")
    return CharExponent("composite", dim=exp.dim, bf=f, base=exp)


# JSON / shorthand -----------------------------------------------------------


def from_spec(spec, path: str = "model") -> CharExponent:
    """Build an exponent from a JSON object (dict) or a JSON string.

    Unknown fields are rejected with :class:`ConfigError` naming the field.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", field=path) from exc
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("expected an object with a 'kind' key", field=path)
    kind = spec["kind"]
    if kind not in _JSON_FIELDS:
        raise ConfigError(f"unknown kind {kind!r}", field=f"{path}.kind")
    extra = set(spec) - _JSON_FIELDS[kind] - {"kind", "dim"}
    if extra:
        raise ConfigError(f"unknown field(s) {sorted(extra)}", field=path)
    dim = spec.get("dim", 1)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ConfigError(f"dim must be a positive integer, got {dim!r}", field=f"{path}.dim")
    try:
        if kind == "composite":
            bf = BernsteinFn.from_dict(spec.get("bf", {}), path + ".bf")
            base = from_spec(spec.get("base", {}), path + ".base")
            if "dim" in spec and base.dim != dim:
                raise ConfigError("dim differs from base dim", field=f"{path}.dim")
            return compose(bf, base)
        kw = {}
        for key in _JSON_FIELDS[kind]:
            if key in spec:
                val = spec[key]
                if key == "row":
                    kw["row"] = str(val)
                elif key in ("m", "n"):
                    kw[key] = int(val)
                elif key == "lambda":
                    kw["lam"] = float(val)
                else:
                    kw[key] = float(val)
        if kind == "sum_aniso":
            m, n = kw.get("m", 1), kw.get("n", 1)
            if "dim" in spec and dim != m + n:
                raise ConfigError("dim must equal m + n", field=f"{path}.dim")
            dim = m + n
        return CharExponent(kind, dim=dim, **kw)
    except (ParamOutOfRange, DimensionMismatch, NonzeroAtOrigin, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), field=path) from exc


_SHORTHAND_PARAM = {
    "gaussian": "c",
    "stable": "alpha",
    "relativistic": "mass",
    "logcauchy": "scale",
    "table": "row",
}


def parse_model(text: str) -> CharExponent:
    """Parse a CLI model: JSON, or shorthand such as ``stable:1.5``,
    ``gaussian:0.5``, ``sum_aniso:1,1.5``, ``gh:1,1,-0.5``, ``table:meixner``."""
    text = text.strip()
    if text.startswith("{"):
        return from_spec(text)
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    spec: dict = {"kind": kind}
    if arg:
        parts = [p.strip() for p in arg.split(",")]
        if kind in _SHORTHAND_PARAM and len(parts) == 1:
            key = _SHORTHAND_PARAM[kind]
            spec[key] = parts[0] if key == "row" else _num(parts[0], text)
        elif kind == "sum_aniso" and len(parts) == 2:
            spec.update(alpha=_num(parts[0], text), beta=_num(parts[1], text))
        elif kind == "gh" and len(parts) == 3:
            spec.update(eta=_num(parts[0], text), kappa=_num(parts[1], text), **{"lambda": _num(parts[2], text)})
        else:
            raise ConfigError(f"cannot parse shorthand {text!r}", field="model")
    return from_spec(spec)


def _num(s: str, text: str) -> float:
    try:
        return float(s)
    except ValueError as exc:
        raise ConfigError(f"non-numeric parameter in {text!r}", field="model") from exc

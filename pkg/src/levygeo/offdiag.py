"""State-side metric delta_t^2(x) = -ln(p_t(x) / p_t(0)).

Extraction from grids, closed forms or exponents; the triangle inequality
for sqrt(delta^2); randomized Gram-matrix tests of negative definiteness
(exp(-s delta^2) must be positive definite for every s > 0); the tail
criterion on dual densities exp(-t psi)/norm; and the Meixner series.

Positive-definiteness testing is a necessary-condition search: a
CONSISTENT verdict is evidence, a REFUTED verdict carries a reproducible
witness.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import CubicSpline

from .density import GridDensity, density_at, diagonal_direct
from .errors import DomainExceeded, InsufficientRange, NonpositiveDensity, ParamOutOfRange
from .exponents import CharExponent, parse_model
from .geometry import unit_ball_volume
from .parallel import pmap
from .special import log_gamma_complex
from .verdicts import FAIL, INCONCLUSIVE, PASS, PropertyReport, jsonable

CONSISTENT, REFUTED = "CONSISTENT", "REFUTED"
CLASS_N_CONSISTENT, NOT_CLASS_N = "CLASS_N_CONSISTENT", "NOT_CLASS_N"
DIVERGING, BOUNDED, VANISHING = "DIVERGING", "BOUNDED", "VANISHING"
DEFAULT_S = (0.1, 0.5, 1.0, 2.0, 5.0)


# candidates ------------------------------------------------------------------------


@dataclass
class MetricCandidate:
    """delta^2 as a function of x (through |x|), with its domain and error budget.

    ``budget`` is an absolute bound on the error of delta^2 (interpolation
    for grid-backed candidates, quadrature otherwise); ``scale`` is the
    natural length used to size point configurations.
    """

    fn: Callable
    t: float
    source: str
    domain: float = math.inf
    budget: float = 0.0
    interp_order: Optional[int] = None
    scale: float = 1.0
    dim: int = 1
    model: dict = field(default_factory=dict)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r = np.abs(x) if self.dim == 1 else np.linalg.norm(x, axis=-1)
        if np.any(r > self.domain * (1 + 1e-12)):
            raise DomainExceeded(f"|x| = {float(np.max(r)):.4g} exceeds the candidate domain {self.domain:.4g}")
        return np.asarray(self.fn(r), dtype=float)

    @classmethod
    def from_function(cls, fn: Callable, label: str = "hook", dim: int = 1) -> "MetricCandidate":
        """Wrap an arbitrary even function of |x| (test hook)."""
        return cls(lambda r: fn(np.asarray(r, dtype=float)), 1.0, label, dim=dim)

    def meta(self) -> dict:
        return jsonable(
            {
                "source": self.source,
                "t": self.t,
                "domain": self.domain,
                "budget": self.budget,
                "interp_order": self.interp_order,
                "model": self.model,
            }
        )


def _closed_exponent(exp: CharExponent, t: float):
    """Exact delta^2 for exponents with a known density, else None."""
    n = exp.dim
    if exp.kind == "gaussian":
        return lambda r: r * r / (4.0 * exp.c * t)
    if exp.kind == "cauchy":
        return lambda r: 0.5 * (n + 1) * np.log1p((r / t) ** 2)
    if exp.kind == "stable" and exp.alpha == 2.0:
        return lambda r: r * r / (4.0 * t)
    if exp.kind == "stable" and exp.alpha == 1.0:
        return lambda r: 0.5 * (n + 1) * np.log1p((r / t) ** 2)
    if exp.kind == "meixner" and n == 1:
        return lambda r: meixner_delta_closed(t, r)
    return None


def _grid_candidate(d: GridDensity, x_max: Optional[float]) -> MetricCandidate:
    i0 = d.x.size // 2
    vals = d.values[i0] if d.dim == 2 else d.values
    x = d.x[i0:]
    p = vals[i0:] if d.dim == 1 else vals[i0:]
    floor = 10.0 * max(d.aliasing_bound, 1e-300)
    bad = np.nonzero(p <= floor)[0]
    last = bad[0] - 1 if bad.size else p.size - 1
    dom = float(x[last])
    if x_max is not None and x_max > dom:
        raise NonpositiveDensity(f"grid density is not resolved above the aliasing bound beyond |x| = {dom:.4g}")
    if last < 8:
        raise NonpositiveDensity("too few positive grid values for a candidate")
    xs, lp = x[: last + 1], np.log(p[: last + 1])
    spl = CubicSpline(np.concatenate([-xs[:0:-1], xs]), np.concatenate([lp[:0:-1], lp]))
    # budget: halve the node set and compare at the dropped nodes; cubic error scales as h^4
    coarse = CubicSpline(np.concatenate([-xs[::-2][:-1], xs[::2]]), np.concatenate([lp[::-2][:-1], lp[::2]]))
    est = float(np.max(np.abs(coarse(xs[1::2]) - lp[1::2]))) / 16.0 if xs.size > 4 else math.inf
    alias = float(floor / 10.0 / p[last])
    lp0 = float(lp[0])
    return MetricCandidate(
        lambda r: lp0 - spl(r), d.t, "grid", dom, est + alias, 3, dom / 20.0, 1, d.model
    )


def extract_delta_sq(source, t: Optional[float] = None, x_max: Optional[float] = None) -> MetricCandidate:
    """Build delta^2(x) = ln p_t(0) - ln p_t(x).

    ``source`` is a :class:`GridDensity`, a catalog row id (closed form), a
    :class:`CharExponent` or a model string; the latter two use closed
    forms when available and otherwise direct Fourier quadrature at each
    requested point.

    Raises
    ------
    NonpositiveDensity
        If the density is not resolved on the requested range.
    """
    if isinstance(source, GridDensity):
        return _grid_candidate(source, x_max)
    if t is None or not t > 0:
        raise ParamOutOfRange("a positive t is required for model sources")
    if isinstance(source, str):
        from .table import ROWS, closed_form_delta_sq

        if source in ROWS:
            fn = lambda r: closed_form_delta_sq(source, t, r)  # noqa: E731
            return MetricCandidate(fn, t, f"closed_form:{source}", scale=max(t, 1.0), model={"row": source})
        source = parse_model(source)
    exp = source
    fn = _closed_exponent(exp, t)
    scale = 1.0
    if fn is not None:
        return MetricCandidate(fn, t, f"closed_form:{exp.kind}", scale=scale, dim=exp.dim, model=exp.to_dict())
    if exp.dim != 1:
        raise ParamOutOfRange("numerical candidates are one-dimensional")
    p0 = float(density_at(exp, t, np.zeros(1))[0])
    dom = math.inf if x_max is None else float(x_max)

    def fn(r):
        r = np.asarray(r, dtype=float)
        p = density_at(exp, t, r.ravel()).reshape(r.shape)
        if np.any(p <= 0):
            raise NonpositiveDensity("Fourier quadrature returned a non-positive density value")
        return np.log(p0) - np.log(p)

    return MetricCandidate(fn, t, f"fourier:{exp.kind}", dom, 1e-12, None, scale, 1, exp.to_dict())


# triangle inequality ---------------------------------------------------------------------


@dataclass(frozen=True)
class TripleSampler:
    """Seeded triples (x, y, z) uniform in [-half, half]^dim, plus fixed extras."""

    n: int = 100_000
    half: Optional[float] = None
    seed: int = 0
    extra: tuple = ((2.0, 1.0, 0.0),)

    def triples(self, dim: int, half: float):
        rng = np.random.default_rng(self.seed)
        pts = rng.uniform(-half, half, size=(3, self.n, dim))
        if self.extra:
            ex = np.asarray(self.extra, dtype=float)
            ex = np.repeat(ex[:, :, None], dim, axis=2) if ex.ndim == 2 else ex
            ex = ex * (np.arange(dim) == 0)  # extras lie on the first axis
            pts = np.concatenate([np.moveaxis(ex, 1, 0), pts], axis=1)
        return pts


def triangle_test(c: MetricCandidate, sampler: Optional[TripleSampler] = None) -> PropertyReport:
    """Check sqrt(delta^2(x - z)) <= sqrt(delta^2(x - y)) + sqrt(delta^2(y - z))."""
    sampler = sampler or TripleSampler()
    half = sampler.half if sampler.half is not None else min(5.0 * c.scale, 0.5 * c.domain)
    x, y, z = sampler.triples(c.dim, half)
    sq = lambda a: np.sqrt(np.maximum(c(a if c.dim > 1 else a[:, 0]), 0.0))  # noqa: E731
    lhs, a, b = sq(x - z), sq(x - y), sq(y - z)
    excess = lhs - a - b
    tol = 1e-10 * (1.0 + float(np.max(lhs))) + 3.0 * math.sqrt(c.budget)
    k = int(np.argmax(excess))
    worst = float(excess[k])
    verdict = PASS if worst <= tol else FAIL
    witness = None
    if verdict == FAIL:
        n_extra = len(sampler.extra)
        bad_extra = np.nonzero(excess[:n_extra] > tol)[0]
        k = int(bad_extra[0]) if bad_extra.size else k
        witness = {"x": x[k].tolist(), "y": y[k].tolist(), "z": z[k].tolist(), "d(x,z)": float(lhs[k]),
                   "d(x,y)+d(y,z)": float(a[k] + b[k])}
    return PropertyReport("triangle", verdict, worst, tol, int(lhs.size), witness, {"half_extent": half})


# negative definiteness ---------------------------------------------------------------------


@dataclass(frozen=True)
class PointConfig:
    sets: int = 20
    size: int = 24
    extents: tuple = (0.1, 1.0, 10.0)
    seed: int = 0


@dataclass
class CndfVerdict:
    s_values: list
    point_sets: dict
    min_eigenvalue: float
    min_ratio: float
    verdict: str
    witness: Optional[dict] = None
    refined: bool = False
    tol: float = 1e-8

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def _distance_matrix(c: MetricCandidate, pts: np.ndarray) -> np.ndarray:
    k = pts.shape[0]
    iu = np.triu_indices(k, 1)
    diff = pts[iu[0]] - pts[iu[1]]
    vals = c(diff if c.dim > 1 else diff[:, 0])
    D = np.zeros((k, k))
    D[iu] = vals
    return D + D.T


def _min_eig_hp(D: np.ndarray, s: float, dps: int = 30) -> float:
    import mpmath

    with mpmath.workdps(dps):
        k = D.shape[0]
        G = mpmath.matrix(k, k)
        for i in range(k):
            for j in range(k):
                G[i, j] = mpmath.exp(-mpmath.mpf(s) * mpmath.mpf(float(D[i, j])))
        ev = mpmath.eigsy(G, eigvals_only=True)
        return float(min(ev))


def cndf_matrix_test(
    c: MetricCandidate,
    s_list: Sequence[float] = DEFAULT_S,
    config: Optional[PointConfig] = None,
    tol: float = 1e-8,
    refine: bool = True,
    jitter: float = 0.01,
    max_confirm: int = 8,
) -> CndfVerdict:
    """Randomized search for a Gram matrix exp(-s delta^2(x_j - x_k)) with a negative eigenvalue.

    Candidate refutations (min eigenvalue below -tol * trace) are tried
    from the most negative down; one is accepted only if it persists when the point set is jittered by ``jitter`` times
    its extent and when the eigenvalues are recomputed in 30-digit
    arithmetic.  When no refutation is found but the smallest s still shows
    negative eigenvalues beyond roundoff, smaller s values are added once.

    Raises
    ------
    DomainExceeded
        If pairwise differences leave the candidate's domain.
    """
    cfg = config or PointConfig()
    s_values = sorted(float(s) for s in s_list)
    if 2.0 * max(cfg.extents) * c.scale > c.domain:
        raise DomainExceeded(
            f"point sets of extent {max(cfg.extents) * c.scale:.4g} leave the candidate domain {c.domain:.4g}"
        )
    rng = np.random.default_rng(cfg.seed)
    jobs = []
    for e in cfg.extents:
        for r in range(cfg.sets):
            jobs.append((e, r, rng.uniform(-e * c.scale, e * c.scale, size=(cfg.size, c.dim))))
    mats = pmap(lambda j: _distance_matrix(c, j[2]), jobs)

    def scan(svals):
        per_s, found = {}, []
        for (e, r, pts), D in zip(jobs, mats):
            for s in svals:
                G = np.exp(-s * D)
                lam = float(np.linalg.eigvalsh(G)[0])
                ratio = lam / float(np.trace(G))
                per_s[s] = min(per_s.get(s, math.inf), ratio)
                found.append((ratio, e, r, pts, D, s, lam))
        found.sort(key=lambda f: f[0])
        for f in found[:max_confirm]:
            if f[0] >= -tol:
                break
            if _confirm(c, f[3], f[4], f[5], f[1], tol, jitter, cfg.seed + f[2]):
                return per_s, found[0], f
        return per_s, found[0], None

    per_s, best, hit = scan(s_values)
    refined = False
    if hit is None and refine and per_s[s_values[0]] < -64 * np.finfo(float).eps:
        extra = sorted(s / 10.0 for s in s_values)
        refined = True
        per_s2, best2, hit = scan(extra)
        per_s.update(per_s2)
        best = min(best, best2, key=lambda b: b[0])
        s_values = sorted(set(s_values) | set(extra))
    sets = {"count": len(jobs), "size": cfg.size, "extents": [e * c.scale for e in cfg.extents], "seed": cfg.seed}
    if hit is not None:
        _, e, r, pts, D, s, lam = hit
        hp = _min_eig_hp(D, s)
        jit = _jitter_eig(c, pts, s, e, jitter, cfg.seed + r)
        witness = {
            "s": s,
            "points": pts.tolist(),
            "eigenvalue": lam,
            "trace": float(cfg.size),
            "eigenvalue_30_digits": hp,
            "eigenvalue_jittered": jit,
            "extent": e * c.scale,
        }
        return CndfVerdict(s_values, sets, lam, lam / cfg.size, REFUTED, witness, refined, tol)
    return CndfVerdict(s_values, sets, best[6], best[0], CONSISTENT, None, refined, tol)


def _jitter_eig(c, pts, s, e, jitter, seed) -> float:
    rng = np.random.default_rng([seed, 7919])
    moved = pts + jitter * e * c.scale * rng.uniform(-1.0, 1.0, size=pts.shape)
    G = np.exp(-s * _distance_matrix(c, moved))
    return float(np.linalg.eigvalsh(G)[0])


def _confirm(c, pts, D, s, e, tol, jitter, seed) -> bool:
    k = pts.shape[0]
    if _jitter_eig(c, pts, s, e, jitter, seed) >= -tol * k:
        return False
    return _min_eig_hp(D, s) < -tol * k


# tails -----------------------------------------------------------------------------


@dataclass
class TailSource:
    """Radial log-density on R^dim (normalized)."""

    logf: Callable
    dim: int = 1
    label: str = "custom"
    r_max: float = math.inf


def dual_density(exp: CharExponent, t: float) -> TailSource:
    """exp(-t psi(xi)) / ((2 pi)^n p_t(0)), the probability density on Fourier space."""
    if not exp.is_radial:
        raise ParamOutOfRange("dual densities are built for radial exponents")
    lognorm = exp.dim * math.log(2.0 * math.pi) + math.log(diagonal_direct(exp, t))
    return TailSource(lambda r: -t * np.asarray(exp.radial(r), dtype=float) - lognorm, exp.dim, f"dual:{exp.kind}")


def row_density(row_id: str, t: float) -> TailSource:
    from .table import closed_form

    def logf(r):
        with np.errstate(divide="ignore"):
            return np.log(closed_form(row_id, t, np.atleast_1d(r)))

    return TailSource(logf, 1, f"row:{row_id}")


@dataclass
class TailReport:
    r: np.ndarray
    neg_log_tail: np.ndarray
    ratio: np.ndarray
    slope: float
    trend: str
    label: str
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return jsonable(self.__dict__)


def _log_tail(src: TailSource, r: float) -> float:
    n = src.dim
    l0 = float(np.asarray(src.logf(np.array([r])))[0])

    def g(u):
        v = float(np.asarray(src.logf(np.array([r + u])))[0]) - l0
        return ((r + u) / r) ** (n - 1) * math.exp(v) if v > -745 else 0.0

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)  # slowly decaying power tails
        val, _ = quad(g, 0.0, np.inf, epsabs=0.0, epsrel=1e-10, limit=400)
    surface = n * unit_ball_volume(n)
    return math.log(surface) + l0 + (n - 1) * math.log(r) + math.log(val)


def tail_rate(source, r_grid=None, t: Optional[float] = None) -> TailReport:
    """Trend of -ln P(|X| > r) / (r ln r).

    The trend is the log-log slope of the ratio over ``r_grid``: above
    0.05 DIVERGING, below -0.05 VANISHING, otherwise BOUNDED.  Only the
    probed range is assessed.

    Raises
    ------
    InsufficientRange
        If the grid spans less than a factor 3 or exceeds a grid density's extent.
    """
    r = np.geomspace(1e2, 1e5, 16) if r_grid is None else np.asarray(r_grid, dtype=float)
    if r.size < 4 or r.max() < 3.0 * r.min() or r.min() <= 1.0:
        raise InsufficientRange("tail grid needs at least 4 points in r > 1 spanning a factor 3")
    notes = []
    if isinstance(source, GridDensity):
        if r.max() >= source.L:
            raise InsufficientRange(f"grid density extends to {source.L:g} only")
        x, p = source.x, source.values
        neg = []
        for rv in r:
            m = np.abs(x) >= rv
            neg.append(-math.log(source.tail_mass + float(np.trapezoid(p[m & (x > 0)], x[m & (x > 0)])) * 2.0))
        neg = np.array(neg)
        label = "grid"
    else:
        if isinstance(source, str):
            source = row_density(source, t)
        elif isinstance(source, CharExponent):
            source = dual_density(source, t)
        neg = -np.array([_log_tail(source, rv) for rv in r])
        label = source.label
    ratio = neg / (r * np.log(r))
    if np.any(ratio <= 0):
        notes.append("tail probability not yet small on part of the grid")
        slope = float(np.polyfit(np.log(r), ratio, 1)[0])
    else:
        slope = float(np.polyfit(np.log(r), np.log(ratio), 1)[0])
    trend = DIVERGING if slope > 0.05 else VANISHING if slope < -0.05 else BOUNDED
    return TailReport(r, neg, ratio, slope, trend, label, notes)


# classification ---------------------------------------------------------------------------


@dataclass
class ClassificationReport:
    model: dict
    t: float
    verdict: str
    reasons: list
    triangle: PropertyReport
    cndf: CndfVerdict
    tail: Optional[TailReport]
    notes: list = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.verdict == NOT_CLASS_N:
            return f"NOT_CLASS_N({', '.join(self.reasons)})"
        return self.verdict

    def to_dict(self) -> dict:
        return jsonable(
            {
                "model": self.model,
                "t": self.t,
                "verdict": self.verdict,
                "label": self.label,
                "reasons": self.reasons,
                "triangle": self.triangle,
                "cndf": self.cndf,
                "tail": self.tail,
                "notes": self.notes,
            }
        )


def _is_gaussian(exp: CharExponent) -> bool:
    return exp.kind == "gaussian" or (exp.kind == "stable" and exp.alpha == 2.0)


def classify_class_N(
    model, t: float, config: Optional[PointConfig] = None, sampler: Optional[TripleSampler] = None
) -> ClassificationReport:
    """Bundle the metric, Gram-matrix and dual-tail tests into a class-N verdict.

    NOT_CLASS_N is issued on a matrix refutation, a triangle violation, or a
    diverging dual tail of a non-Gaussian exponent (such a dual density
    cannot be infinitely divisible).  CLASS_N_CONSISTENT needs all tests
    passing and a vanishing dual tail ratio; otherwise INCONCLUSIVE.
    """
    exp = parse_model(model) if isinstance(model, str) else model
    cand = extract_delta_sq(exp, t)
    tri = triangle_test(cand, sampler or TripleSampler(n=20_000))
    cndf = cndf_matrix_test(cand, config=config)
    tail = tail_rate(exp, t=t) if exp.is_radial else None
    reasons, notes = [], []
    if cndf.verdict == REFUTED:
        reasons.append("matrix witness")
    if tri.verdict == FAIL:
        reasons.append("triangle inequality")
    if tail is not None and tail.trend == DIVERGING:
        if _is_gaussian(exp):
            notes.append("dual tail diverges, as it must for a Gaussian; the tail criterion excludes this case")
        else:
            reasons.append("dual tail criterion")
    if reasons:
        verdict = NOT_CLASS_N
    elif tail is None or tail.trend == BOUNDED:
        verdict = INCONCLUSIVE
        notes.append("dual tail trend undecided on the probed range")
    else:
        verdict = CLASS_N_CONSISTENT
    if cndf.verdict == CONSISTENT:
        notes.append("CONSISTENT Gram-matrix results are evidence, not proof")
    return ClassificationReport(exp.to_dict(), t, verdict, reasons, tri, cndf, tail, notes)


# Meixner series ---------------------------------------------------------------------------


def meixner_delta_closed(t: float, x) -> np.ndarray:
    """-ln |Gamma((t + i x)/2) / Gamma(t/2)|^2 through the complex log-Gamma."""
    x = np.asarray(x, dtype=float)
    return -2.0 * (np.real(log_gamma_complex((t + 1j * x) / 2.0)) - math.lgamma(t / 2.0))


def _log_tail_integral(x: float, t: float, j: float) -> float:
    """int_j^inf ln(1 + x^2 / (t + 2u)^2) du in closed form."""
    if x == 0:
        return 0.0
    v = t + 2.0 * j
    ax = abs(x)
    # pi x - V ln(1 + x^2/V^2) - 2 x atan(V/x) = 2x atan(x/V) - V ln(1 + x^2/V^2)
    return 0.5 * (2.0 * ax * math.atan(ax / v) - v * math.log1p((ax / v) ** 2))


@dataclass
class MeixnerSeries:
    """Partial sum of ln(1 + x^2/(t + 2j)^2) over j = start..J with tail bounds.

    ``tail_bound`` is the elementary bound x^2 / (2 (t + 2J)); ``lower`` and
    ``upper`` bracket the full series by integral comparison.
    """

    partial_sum: float
    tail_bound: float
    J: int
    start: int
    lower: float
    upper: float

    @property
    def value(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def __iter__(self):
        yield self.partial_sum
        yield self.tail_bound


def meixner_delta_series(t: float, x: float, J: Optional[int] = None, tol: float = 1e-12, start: int = 0) -> MeixnerSeries:
    """Series sum_{j >= start} ln(1 + x^2 / (t + 2j)^2).

    With ``J=None`` the cut-off is chosen so that the integral bracket is
    narrower than ``tol``.  The series with ``start=0`` equals
    -ln |Gamma((t + i x)/2) / Gamma(t/2)|^2.
    """
    if not t > 0:
        raise ParamOutOfRange("t must be positive")
    ax = abs(float(x))
    if J is None:
        J = max(start + 1, int(math.ceil((ax / math.sqrt(tol) - t) / 2.0)) + 1)
    if J < start:
        raise ParamOutOfRange("J must be at least the start index")
    j = np.arange(start, J + 1, dtype=float)
    terms = np.log1p((ax / (t + 2.0 * j)) ** 2)
    part = math.fsum(terms.tolist())
    crude = ax * ax / (2.0 * (t + 2.0 * J))
    lo = part + _log_tail_integral(ax, t, J + 1)
    hi = part + _log_tail_integral(ax, t, J)
    return MeixnerSeries(part, crude, J, start, lo, hi)


def meixner_g(t: float, z) -> np.ndarray:
    """g(t, z) = sum_j exp(-|z|(t + 2j)) = exp(-|z| t) / (1 - exp(-2|z|))."""
    z = np.abs(np.asarray(z, dtype=float))
    return np.exp(-z * t) / -np.expm1(-2.0 * z)


def meixner_levy_identity(t: float, x: float, tol: float = 1e-8) -> PropertyReport:
    """Check int (1 - cos xz) g(t, z) / |z| dz = delta_t^2(x) and g decreasing in t.

    The integrand 2 sin^2(xz/2) g(t, z)/z is evaluated without cancellation
    and replaced by its series below |z| = 1e-4.
    """
    ax = abs(float(x))

    def h(z):
        if z < 1e-4:
            # 2 sin^2(xz/2)/(z(1 - e^{-2z})) e^{-tz} ~ x^2/4 (1 + (1 - t) z)
            return 0.25 * ax * ax * (1.0 + (1.0 - t) * z)
        return 2.0 * math.sin(0.5 * ax * z) ** 2 * math.exp(-t * z) / (z * -math.expm1(-2.0 * z))

    cut = 45.0 / t
    pieces = np.unique(np.concatenate([[0.0, 1e-4], np.arange(1.0, cut, max(0.5, 2 * math.pi / max(ax, 1e-12)))[:400], [cut]]))
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        val, _ = quad(h, a, b, epsabs=0.0, epsrel=1e-12, limit=200)
        total += val
    # beyond the cut: 0 <= integrand <= 2 e^{-tz} / (z (1 - e^{-2z}))
    tail = 2.0 * math.exp(-t * cut) / (t * cut * -math.expm1(-2.0 * cut))
    total *= 2.0  # both half-lines
    series = meixner_delta_series(t, ax, tol=1e-14)
    dev = abs(total - series.value)
    z = np.array([0.1, 0.5, 1.0, 2.0])
    mono = bool(np.all(meixner_g(t, z) > meixner_g(t + 1.0, z)))
    ok = dev <= tol + 2.0 * tail and mono
    return PropertyReport(
        "meixner_levy_identity", PASS if ok else FAIL, dev, tol, 1,
        details={"integral": total, "series": series.value, "tail_bound": 2.0 * tail, "g_decreasing_in_t": mono},
    )

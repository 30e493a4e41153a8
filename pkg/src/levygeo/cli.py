"""Command-line front end.

Exit codes: 0 when the outcome passes (or, with ``--expect-fail``, when it
fails as expected), 2 on a failing or refuting verdict, 1 on errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, LevyGeoError
from .verdicts import FAIL, PASS

COMMANDS = ("density", "diagonal", "metric-check", "doubling", "classify", "verify-table", "sub15", "mixture")
FORMATS = ("csv", "json", "svg")
TOLERANCES = {
    "window": 1e-14,
    "diagonal_agreement": 1e-8,
    "gram_refutation": 1e-8,
    "table": 1e-6,
    "mixture": 1e-8,
    "subadditivity": 1e-12,
}
DEFAULT_MODEL = {
    "density": "cauchy",
    "diagonal": "cauchy",
    "metric-check": "cauchy",
    "doubling": "stable:1.5",
    "classify": "meixner",
    "mixture": "gh:1,1,-0.5",
}


@dataclass
class RunConfig:
    command: str
    model: Optional[str] = None
    t: list = field(default_factory=lambda: [1.0])
    grid: tuple = (0.01, 40.0)
    out_dir: Path = Path("levygeo-out")
    seed: int = 0
    format: str = "csv"
    expect_fail: bool = False
    rows: str = "all"
    bf: str = "power:0.5"
    r_range: tuple = (1e-3, 1e3)


@dataclass
class Outcome:
    passed: bool
    summary: str
    rows: list
    columns: list
    report: dict
    plot: Optional[dict] = None


# parsing ------------------------------------------------------------------------------


def _grid(text: str) -> tuple:
    try:
        h, L = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"expected 'h,L', got {text!r}", field="--grid") from exc
    if not (h > 0 and L > 0):
        raise ConfigError("h and L must be positive", field="--grid")
    return h, L


def _pair(text: str, name: str) -> tuple:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"expected 'a,b', got {text!r}", field=name) from exc
    if not 0 < a < b:
        raise ConfigError("need 0 < a < b", field=name)
    return a, b


def _bernstein(text: str):
    from .bernstein import BernsteinFn

    kind, _, arg = text.partition(":")
    try:
        if kind == "power":
            return BernsteinFn.power(float(arg or 0.5))
        if kind == "linear":
            return BernsteinFn.linear(float(arg or 1.0))
        if kind == "log1p":
            return BernsteinFn.log1p()
        if kind == "one_minus_exp":
            return BernsteinFn.one_minus_exp()
    except ValueError as exc:
        raise ConfigError(str(exc), field="--bf") from exc
    raise ConfigError(f"unknown Bernstein function {text!r}", field="--bf")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="levygeo", description="Metric geometry of Levy transition densities.")
    sub = p.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        s = sub.add_parser(cmd)
        s.add_argument("--model", help="model JSON or shorthand such as stable:1.5")
        s.add_argument("--t", action="append", type=float, help="time (repeatable)")
        s.add_argument("--grid", default="0.01,40", help="lattice spacing and half extent 'h,L'")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", default="levygeo-out", help="output directory")
        s.add_argument("--format", choices=FORMATS, default="csv")
        s.add_argument("--expect-fail", action="store_true", help="exit 0 when the verdict fails")
        s.add_argument("--rows", default="all", help="table rows (comma list or 'all')")
        s.add_argument("--bf", default="power:0.5", help="Bernstein function for sub15")
        s.add_argument("--range", default="1e-3,1e3", help="radius range 'a,b' for doubling")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command,
        model=ns.model,
        t=ns.t or [1.0],
        grid=_grid(ns.grid),
        out_dir=Path(ns.out),
        seed=ns.seed,
        format=ns.format,
        expect_fail=ns.expect_fail,
        rows=ns.rows,
        bf=ns.bf,
        r_range=_pair(ns.range, "--range"),
    )


def _model(cfg: RunConfig):
    from .exponents import parse_model

    text = cfg.model or DEFAULT_MODEL[cfg.command]
    try:
        return parse_model(text)
    except ConfigError as exc:
        raise ConfigError(str(exc), field="--model") from exc


# commands ------------------------------------------------------------------------------


def _density(cfg: RunConfig) -> Outcome:
    from .density import GridSpec, invert_fourier

    exp = _model(cfg)
    t = cfg.t[0]
    d = invert_fourier(exp, t, GridSpec(*cfg.grid))
    if d.dim == 1:
        rows = [{"x": float(x), "p": max(float(v), 0.0)} for x, v in zip(d.x, d.values)]
        cols = ["x", "p"]
        plot = {"series": [(d.x, d.values, "p_t")], "xlabel": "x", "ylabel": "p_t(x)"}
    else:
        rows = [
            {"x": float(x), "y": float(y), "p": max(float(d.values[i, j]), 0.0)}
            for i, x in enumerate(d.x)
            for j, y in enumerate(d.x)
        ]
        cols = ["x", "y", "p"]
        mid = d.x.size // 2
        plot = {"series": [(d.x, d.values[:, mid], "p_t(x, 0)")], "xlabel": "x", "ylabel": "p_t(x)"}
    mass_ok = abs(d.mass - 1.0) <= 1e-6
    rep = {**d.meta(), "mass": d.mass, "trapezoid_mass": d.trapezoid_mass, "p_t(0)": d.value_at_origin()}
    return Outcome(mass_ok, f"p_t(0) = {d.value_at_origin():.10g}, mass = {d.mass:.10g}", rows, cols, rep, plot)


def _diagonal(cfg: RunConfig) -> Outcome:
    from .density import diagonal_direct, diagonal_volume_formula
    from .geometry import ball_volume

    exp = _model(cfg)
    rows, ok = [], True
    for t in cfg.t:
        a = diagonal_direct(exp, t)
        vf = diagonal_volume_formula(exp, t, detail=True)
        v = ball_volume(exp, 1.0 / math.sqrt(t), seed=cfg.seed).volume
        good = abs(a - vf.value) <= TOLERANCES["diagonal_agreement"] * (1.0 + a)
        ok &= good
        rows.append({"t": t, "direct": a, "volume_formula": vf.value, "ball_volume_at_inv_sqrt_t": v,
                     "ratio": a / v, "method": vf.method, "verdict": PASS if good else FAIL})
    ts = np.array(cfg.t)
    plot = {"series": [(ts, np.array([r["ratio"] for r in rows]), "ratio")], "xlabel": "t",
            "ylabel": "p_t(0) / v(1/sqrt t)", "logx": True}
    summary = "; ".join(f"t={r['t']:g}: direct={r['direct']:.7g}, volume_formula={r['volume_formula']:.7g}" for r in rows)
    return Outcome(ok, summary, rows, list(rows[0]), {"model": exp.to_dict(), "rows": rows}, plot)


def _metric_check(cfg: RunConfig) -> Outcome:
    from .exponents import CONFIRMED_ON_RANGE, PointSampler, REJECTED, check_subadditivity, is_metric_generating

    exp = _model(cfg)
    mg = is_metric_generating(exp)
    sa = check_subadditivity(exp, PointSampler(seed=cfg.seed))
    rows = [{"R": float(r), "inf_psi": float(f)} for r, f in zip(mg.radii, mg.floors)]
    ok = mg.verdict != REJECTED and sa.verdict == PASS
    rep = {"model": exp.to_dict(), "metric_generating": mg.to_dict(), "subadditivity": sa.to_dict()}
    plot = {"series": [(mg.radii, mg.floors, "inf psi")], "xlabel": "R", "ylabel": "inf_{|xi|>=R} psi", "logx": True}
    return Outcome(ok, f"metric generating: {mg.verdict}; subadditivity: {sa.verdict}", rows, ["R", "inf_psi"], rep, plot)


def _doubling(cfg: RunConfig) -> Outcome:
    from .geometry import FAILS, doubling_check

    exp = _model(cfg)
    rep = doubling_check(exp, cfg.r_range, seed=cfg.seed)
    rows = list(rep.rows())
    plot = {"series": [(rep.radii, rep.ratios, "v(2r)/v(r)")], "xlabel": "r", "ylabel": "v(2r) / v(r)",
            "logx": True, "logy": True}
    d = {"model": exp.to_dict(), **rep.to_dict()}
    return Outcome(rep.verdict != FAILS, f"{rep.verdict}, c2 = {rep.c2_estimate:.6g}", rows, ["r", "v(r)", "v(2r)", "ratio"], d, plot)


def _classify(cfg: RunConfig) -> Outcome:
    from .offdiag import NOT_CLASS_N, PointConfig, classify_class_N

    exp = _model(cfg)
    t = cfg.t[0]
    rep = classify_class_N(exp, t, config=PointConfig(seed=cfg.seed))
    from .offdiag import extract_delta_sq

    cand = extract_delta_sq(exp, t)
    x = np.linspace(0.0, 10.0, 101)
    prof = cand(x)
    rows = [{"x": float(a), "delta_sq": float(b)} for a, b in zip(x, prof)]
    plot = {"series": [(x, prof, "delta_t^2")], "xlabel": "x", "ylabel": "delta_t^2(x, 0)"}
    return Outcome(rep.verdict != NOT_CLASS_N, rep.label, rows, ["x", "delta_sq"], rep.to_dict(), plot)


def _verify_table(cfg: RunConfig) -> Outcome:
    from .table import ROWS, verify_table

    ids = None if cfg.rows == "all" else [r.strip() for r in cfg.rows.split(",") if r.strip()]
    for r in ids or []:
        if r not in ROWS:
            raise ConfigError(f"unknown row {r!r}", field="--rows")
    checks = verify_table(ids, tol=TOLERANCES["table"])
    rows = [{**c.to_dict(), "verdict": PASS if c.passed else FAIL} for c in checks]
    ok = all(c.passed for c in checks)
    worst = np.array([max(c.density_err, c.cf_err, c.cf_psi_err, c.delta_err, c.printed_form_err, 1e-17) for c in checks])
    plot = {"series": [(np.arange(len(checks)), worst, "max error")], "xlabel": "check", "ylabel": "max abs error",
            "logy": True}
    n_rows = len({c.row for c in checks})
    summary = f"{sum(c.passed for c in checks)}/{len(checks)} checks over {n_rows} rows pass"
    return Outcome(ok, summary, rows, list(rows[0]), {"checks": rows}, plot)


def _sub15(cfg: RunConfig) -> Outcome:
    from .mixtures import sub15_experiment

    f = _bernstein(cfg.bf)
    rows, ok, reps = [], True, []
    u = np.geomspace(1e-2, 1e2, 41)
    series = []
    for t in cfg.t:
        res = sub15_experiment(f, t)
        g = res.candidate(u)
        good = res.bernstein.verdict == PASS
        ok &= good
        reps.append({"t": t, "bernstein": res.bernstein.to_dict(), "difference_cm": res.difference_cm.to_dict()})
        rows.extend({"t": t, "u": float(a), "g_t": float(b)} for a, b in zip(u, g))
        series.append((u, g, f"t={t:g}"))
    plot = {"series": series, "xlabel": "u", "ylabel": "g_t(u)", "logx": True}
    summary = "; ".join(f"t={r['t']:g}: {r['bernstein']['verdict']}" for r in reps)
    return Outcome(ok, summary, rows, ["t", "u", "g_t"], {"bf": f.to_dict(), "runs": reps}, plot)


def _mixture(cfg: RunConfig) -> Outcome:
    from .mixtures import GHParams, MixtureSpec, gh_density, variance_mean_mixture

    exp = _model(cfg)
    if exp.kind != "gh":
        raise ConfigError("the mixture command takes a gh model, e.g. gh:1,1,-0.5", field="--model")
    p = GHParams(exp.eta, exp.kappa, exp.lam)
    x = np.linspace(0.25, 5.0, 20)
    a = gh_density(p, x)
    b = variance_mean_mixture(MixtureSpec.gig(p), x)
    err = np.abs(a - b)
    ok = bool(np.all(err <= TOLERANCES["mixture"]))
    rows = [{"x": float(xi), "gh_density": float(u), "mixture": float(v), "abs_diff": float(e)}
            for xi, u, v, e in zip(x, a, b, err)]
    plot = {"series": [(x, a, "closed form"), (x, b, "mixture")], "xlabel": "x", "ylabel": "p(x)"}
    return Outcome(ok, f"max |closed form - mixture| = {err.max():.3e}", rows, list(rows[0]),
                   {"params": p.to_dict(), "max_abs_diff": float(err.max())}, plot)


HANDLERS = {
    "density": _density,
    "diagonal": _diagonal,
    "metric-check": _metric_check,
    "doubling": _doubling,
    "classify": _classify,
    "verify-table": _verify_table,
    "sub15": _sub15,
    "mixture": _mixture,
}


def run(cfg: RunConfig, stdout=None) -> int:
    """Dispatch one command, write its artifacts and return the exit code."""
    from . import report

    stdout = stdout or sys.stdout
    if cfg.command not in HANDLERS:
        raise ConfigError(f"unknown command {cfg.command!r}", field="command")
    out = HANDLERS[cfg.command](cfg)
    model_json = None
    if cfg.model or cfg.command in DEFAULT_MODEL:
        model_json = _model(cfg).to_json() if cfg.command != "verify-table" else None
    header = {"command": cfg.command, "seed": cfg.seed, "tolerances": TOLERANCES, "t": cfg.t,
              "model": model_json or "none"}
    if cfg.command == "density":
        header.update({k: out.report[k] for k in ("h", "L", "aliasing_bound")})
    out_dir = report.ensure_out_dir(cfg.out_dir)
    stem = cfg.command.replace("-", "_")
    paths = []
    if cfg.format in ("csv", "svg"):
        paths.append(report.emit_csv(out.rows, out_dir / f"{stem}.csv", header, out.columns))
    if cfg.format == "json":
        paths.append(report.emit_json({"header": header, "report": out.report, "passed": out.passed}, out_dir / f"{stem}.json"))
    if cfg.format == "svg" and out.plot:
        pl = dict(out.plot)
        series = pl.pop("series")
        paths.append(report.emit_svg(series, out_dir / f"{stem}.svg", pl.pop("xlabel"), pl.pop("ylabel"), **pl))
    print(f"{cfg.command}: {out.summary}", file=stdout)
    for pth in paths:
        print(f"wrote {pth}", file=stdout)
    if cfg.expect_fail:
        return 0 if not out.passed else 2
    return 0 if out.passed else 2


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return run(config_from_args(ns))
    except (LevyGeoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

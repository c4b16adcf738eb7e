"""Command-line experiment runner.

Each command sweeps a parameter list, computes operator-side quantities
next to their closed-form or sampled counterparts, and writes rows as CSV or
JSON. Wherever a quadrature grid is involved the value is recomputed on a
grid twice as fine; the exit code is nonzero if any such check fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Optional

import numpy as np

from . import asymptotics as asy
from . import symbols
from .errors import DomainError
from .fredholm import characteristic_function, op_trace, op_trace_power
from .identities import identity_residuals
from .montecarlo import EnsembleSpec, estimate, finite_n_prediction
from .operators import (
    bessel_kernel,
    bessel_trace,
    bessel_trace_square,
    build_bessel_operator,
    build_wiener_hopf,
    rescaled_finite_n_kernel,
    sine_kernel,
)
from .symbols import function_profile, make_symbol, power_profile, square_profile

COMMANDS = ("mean", "variance", "cf", "trace-powers", "identities", "montecarlo", "kernel-convergence")

# absolute agreement required between grid n and grid 2n
SELF_CHECK_TOL = 1e-6


@dataclass
class ExperimentConfig:
    command: str = "mean"
    ensemble: str = "bessel"
    f_id: str = "gaussian"
    nu: Optional[float] = None
    alpha_list: list = field(default_factory=lambda: [10.0, 20.0, 40.0])
    k_list: list = field(default_factory=lambda: [0.2])
    N_list: list = field(default_factory=lambda: [25, 50, 100, 200])
    n_list: list = field(default_factory=lambda: [2, 3])
    mc_replicates: int = 20000
    seed: int = 20240601
    quad_n: int = 200
    workers: int = 1
    out_format: str = "csv"
    out_path: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.ensemble not in ("sine", "bessel"):
            raise DomainError(f"unknown ensemble {self.ensemble!r}")
        if self.out_format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.out_format!r}")
        symbols.get(self.f_id)
        needs = {
            "mean": ["alpha_list"],
            "variance": ["alpha_list"],
            "cf": ["alpha_list", "k_list"],
            "trace-powers": ["alpha_list", "k_list", "n_list"],
            "identities": ["alpha_list", "k_list"],
            "montecarlo": ["N_list", "k_list"],
            "kernel-convergence": ["N_list"],
        }[self.command]
        for name in needs:
            if not getattr(self, name):
                raise DomainError(f"{name} must be non-empty for {self.command}")
        if self.quad_n < 8:
            raise DomainError("quad_n must be at least 8")

    @property
    def order(self) -> float:
        return 0.0 if self.nu is None else float(self.nu)


@dataclass
class Report:
    columns: list
    rows: list
    checks: list = field(default_factory=list)  # dicts: name, coarse, fine, difference, tol, passed

    def failed(self) -> list:
        return [c for c in self.checks if not c["passed"]]


def _check(name: str, coarse, fine, tol: float = SELF_CHECK_TOL) -> dict:
    diff = abs(complex(fine) - complex(coarse))
    return {"name": name, "coarse": coarse, "fine": fine, "difference": diff, "tol": tol, "passed": bool(diff <= tol)}


def _map(fn: Callable, items: list, workers: int) -> list:
    """Ordered map over sweep points, in a process pool when workers > 1."""
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- commands


def _mean_point(args) -> tuple[list, list]:
    cfg, alpha = args
    f = symbols.get(cfg.f_id)
    if cfg.ensemble == "sine":
        tr = op_trace(build_wiener_hopf(function_profile(f), alpha, 2 * cfg.quad_n))
        closed = alpha / math.pi * f.integral_fullline
        literal = asy.literal_sine_mean(f, alpha)
        return [alpha, tr, closed, tr - closed, literal], []
    nu = cfg.order
    tr = bessel_trace(function_profile(f), alpha, nu, x_nodes=3 * cfg.quad_n)
    tr2 = bessel_trace(function_profile(f), alpha, nu, x_nodes=6 * cfg.quad_n)
    closed = asy.bessel_mean(f, alpha, nu)
    return [alpha, tr, closed, tr - closed], [_check(f"mean alpha={alpha:g}", tr, tr2)]


def cmd_mean(cfg: ExperimentConfig) -> Report:
    cols = ["alpha", "tr_operator", "closed_form", "deviation"]
    if cfg.ensemble == "sine":
        cols.append("literal_mean")
    return _sweep(cols, _mean_point, [(cfg, a) for a in sorted(cfg.alpha_list)], cfg.workers)


def _operator_variance(cfg: ExperimentConfig, f, alpha: float, n: int) -> float:
    if cfg.ensemble == "sine":
        A = build_wiener_hopf(function_profile(f), alpha, n)
        A2 = build_wiener_hopf(square_profile(f), alpha, n, grid=A.grid)
        return float(np.real(op_trace(A2) - op_trace_power(A, 2)))
    nu = cfg.order
    return bessel_trace(square_profile(f), alpha, nu) - bessel_trace_square(function_profile(f), alpha, nu, n)


def _variance_point(args) -> tuple[list, list]:
    cfg, alpha = args
    f = symbols.get(cfg.f_id)
    n = cfg.quad_n if cfg.ensemble == "bessel" else 2 * cfg.quad_n
    v = _operator_variance(cfg, f, alpha, n)
    v2 = _operator_variance(cfg, f, alpha, 2 * n)
    if cfg.ensemble == "sine":
        row = [alpha, v, asy.sine_variance(f)]
    else:
        row = [alpha, v, asy.bessel_variance_cosine(f), asy.bessel_variance_mellin(f)]
    return row, [_check(f"variance alpha={alpha:g}", v, v2)]


def cmd_variance(cfg: ExperimentConfig) -> Report:
    if cfg.ensemble == "sine":
        cols = ["alpha", "operator_variance", "fourier_route"]
    else:
        cols = ["alpha", "operator_variance", "cosine_route", "mellin_route"]
    return _sweep(cols, _variance_point, [(cfg, a) for a in sorted(cfg.alpha_list)], cfg.workers)


def _prediction(cfg: ExperimentConfig, f, alpha: float):
    if cfg.ensemble == "sine":
        return asy.sine_prediction(f, alpha)
    return asy.bessel_cf_prediction(f, alpha, cfg.order)


def _cf_point(args) -> tuple[list, list]:
    cfg, alpha, k = args
    f = symbols.get(cfg.f_id)
    n = cfg.quad_n if cfg.ensemble == "bessel" else 2 * cfg.quad_n
    pred = _prediction(cfg, f, alpha)
    if k == 0:
        return [alpha, k, 1.0 + 0j, 1.0 + 0j, 0j], []
    d = characteristic_function(cfg.ensemble, f, k, alpha, cfg.order, n, continuous=True)
    d2 = characteristic_function(cfg.ensemble, f, k, alpha, cfg.order, 2 * n, continuous=True)
    dev = d.log_value - pred.log_cf(k)
    return [alpha, k, d.value, pred.cf(k), dev], [_check(f"log det alpha={alpha:g} k={k:g}", d.log_value, d2.log_value)]


def cmd_cf(cfg: ExperimentConfig) -> Report:
    pts = [(cfg, a, k) for a in sorted(cfg.alpha_list) for k in sorted(cfg.k_list)]
    return _sweep(["alpha", "k", "det_value", "gaussian_prediction", "log_deviation"], _cf_point, pts, cfg.workers)


def _trace_power_lhs(f, k: float, alpha: float, nu: float, n: int, grid_n: int) -> complex:
    sigma = make_symbol(f, k)
    B = build_bessel_operator(sigma, alpha, nu, grid_n)
    return complex(op_trace_power(B, n)) - complex(bessel_trace(power_profile(sigma, n), alpha, nu))


def _trace_powers_point(args) -> tuple[list, list]:
    cfg, alpha, k, n = args
    f = symbols.get(cfg.f_id)
    lhs = _trace_power_lhs(f, k, alpha, cfg.order, n, cfg.quad_n)
    lhs2 = _trace_power_lhs(f, k, alpha, cfg.order, n, 2 * cfg.quad_n)
    C = asy.trace_power_correction(f, k, n)
    return [alpha, k, n, lhs, C, lhs - C], [_check(f"trace power alpha={alpha:g} k={k:g} n={n}", lhs, lhs2)]


def cmd_trace_powers(cfg: ExperimentConfig) -> Report:
    if cfg.ensemble != "bessel":
        raise DomainError("trace-powers is defined for the bessel ensemble")
    pts = [(cfg, a, k, int(n)) for a in sorted(cfg.alpha_list) for k in sorted(cfg.k_list) for n in sorted(cfg.n_list)]
    return _sweep(["alpha", "k", "n", "lhs", "C", "deviation"], _trace_powers_point, pts, cfg.workers)


IDENTITY_NAMES = ("hankel_product", "wiener_product", "one_sided_plus", "one_sided_minus", "inverse_product")


def _identities_point(args) -> tuple[list, list]:
    cfg, f1, f2, k, alpha = args
    r = identity_residuals(symbols.get(f1), symbols.get(f2), k, alpha)
    vals = (r.hankel_product, r.wiener_product, r.one_sided_plus, r.one_sided_minus, r.inverse_product)
    return [[name, f1, f2, k, alpha, v] for name, v in zip(IDENTITY_NAMES, vals)], []


def cmd_identities(cfg: ExperimentConfig) -> Report:
    pairs = [(cfg.f_id, g) for g in ("gaussian", "cauchy")]
    pts = [(cfg, f1, f2, k, a) for f1, f2 in pairs for k in sorted(cfg.k_list) for a in sorted(cfg.alpha_list)]
    out = _map(_identities_point, pts, cfg.workers)
    rows = [row for block, _ in out for row in block]
    rng = np.random.default_rng(cfg.seed)
    kac = 0.0
    for _ in range(100):
        lhs, rhs = asy.kac_identity_check(rng.normal(size=int(rng.integers(1, 7))))
        kac = max(kac, abs(lhs - rhs))
    rows.append(["kac_identity_max_error", "", "", "", "", kac])
    for p in (0.25, 1.0 / 3.0):
        err = abs(asy.t_weight(p, p) - asy.t_weight_quadrature(p, p))
        rows.append([f"t_weight_error_p=q={p:.6g}", "", "", "", "", err])
    return Report(["check", "f1", "f2", "k", "alpha", "value"], rows)


def _montecarlo_point(args) -> tuple[list, list]:
    cfg, N = args
    f = symbols.get(cfg.f_id)
    kind, regime = ("hermite", "bulk_hermite") if cfg.ensemble == "sine" else ("laguerre", "hardedge_laguerre")
    spec = EnsembleSpec(kind, int(N), cfg.order if kind == "laguerre" else 0.0, cfg.seed)
    ks = sorted(float(k) for k in cfg.k_list)
    rep = estimate(spec, f, regime, ks, cfg.mc_replicates, cfg.workers)
    pred = finite_n_prediction(spec, f, ks)
    fine = finite_n_prediction(spec, f, ks, refine=2)

    def z(est, se, p):
        if isinstance(est, complex):
            zr = (est.real - p.real) / se.real if se.real > 0 else 0.0
            zi = (est.imag - p.imag) / se.imag if se.imag > 0 else 0.0
            return complex(zr, zi)
        return (est - p) / se if se > 0 else 0.0

    rows = [
        [N, "mean", "", rep.mean_hat, rep.mean_se, pred.mean, z(rep.mean_hat, rep.mean_se, pred.mean)],
        [N, "variance", "", rep.var_hat, rep.var_se, pred.variance, z(rep.var_hat, rep.var_se, pred.variance)],
    ]
    checks = [_check(f"mc mean prediction N={N}", pred.mean, fine.mean), _check(f"mc variance prediction N={N}", pred.variance, fine.variance)]
    for k in ks:
        est, se, p = rep.cf_hat[k], rep.cf_se[k], pred.cf[k]
        rows.append([N, "cf", k, est, se, p, z(est, se, p)])
        checks.append(_check(f"mc cf prediction N={N} k={k:g}", p, fine.cf[k]))
    return rows, checks


def cmd_montecarlo(cfg: ExperimentConfig) -> Report:
    rows, checks = [], []
    # replicate-level parallelism lives inside estimate(); sweep points run in order
    for N in sorted(int(n) for n in cfg.N_list):
        r, c = _montecarlo_point((cfg, N))
        rows.extend(r)
        checks.extend(c)
    cols = ["N", "statistic", "k", "estimate", "standard_error", "operator_prediction", "z_score"]
    return Report(cols, rows, checks)


KERNEL_GRID = np.linspace(0.2, 3.0, 10)


def kernel_distance(ensemble: str, N: int, nu: float = 0.0) -> float:
    """sup over a 10 x 10 grid in [0.2, 3]^2 of |rescaled K_N - limit kernel|."""
    X, Y = np.meshgrid(KERNEL_GRID, KERNEL_GRID, indexing="ij")
    if ensemble == "sine":
        lim = sine_kernel(X, Y)
        fin = rescaled_finite_n_kernel("hermite", N, 0.0, X, Y)
    else:
        lim = bessel_kernel(nu, X, Y)
        fin = rescaled_finite_n_kernel("laguerre", N, nu, X, Y)
    return float(np.max(np.abs(np.asarray(fin) - np.asarray(lim))))


def _kernel_point(args) -> tuple[list, list]:
    cfg, N = args
    return [N, kernel_distance(cfg.ensemble, int(N), cfg.order)], []


def cmd_kernel_convergence(cfg: ExperimentConfig) -> Report:
    pts = [(cfg, int(N)) for N in sorted(cfg.N_list)]
    return _sweep(["N", "sup_distance"], _kernel_point, pts, cfg.workers)


def _sweep(cols: list, fn: Callable, pts: list, workers: int) -> Report:
    out = _map(fn, pts, workers)
    return Report(cols, [row for row, _ in out], [c for _, cs in out for c in cs])


DISPATCH = {
    "mean": cmd_mean,
    "variance": cmd_variance,
    "cf": cmd_cf,
    "trace-powers": cmd_trace_powers,
    "identities": cmd_identities,
    "montecarlo": cmd_montecarlo,
    "kernel-convergence": cmd_kernel_convergence,
}


def run(cfg: ExperimentConfig) -> Report:
    cfg.validate()
    if cfg.ensemble == "sine" and cfg.nu is not None and cfg.command != "kernel-convergence":
        warnings.warn("nu has no meaning for the sine ensemble and is ignored", stacklevel=2)
    return DISPATCH[cfg.command](cfg)


# ---------------------------------------------------------------- serialization


def fmt_csv(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return f"{v.real:.17g}{v.imag:+.17g}j"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def to_json(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return {"re": float(f"{v.real:.17g}"), "im": float(f"{v.imag:.17g}")}
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.17g}")
    if isinstance(v, dict):
        return {k: to_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [to_json(x) for x in v]
    return v


def render(report: Report, fmt: str) -> str:
    if fmt == "csv":
        import csv
        import io

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([fmt_csv(v) for v in row])
        return buf.getvalue()
    doc = {
        "columns": report.columns,
        "rows": [dict(zip(report.columns, to_json(row))) for row in report.rows],
        "checks": to_json(report.checks),
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------- argument handling


def _floats(s: str) -> list:
    return [float(x) for x in s.split(",") if x.strip()]


def _ints(s: str) -> list:
    return [int(x) for x in s.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rmstat", description="Linear eigenvalue statistics: operators, asymptotics, sampling.")
    ap.add_argument("command", choices=COMMANDS)
    # defaults are None so that only flags given explicitly override the config file
    ap.add_argument("--ensemble", choices=["sine", "bessel"])
    ap.add_argument("--f", dest="f_id", help="catalog test function: gaussian, cauchy, bump or zero")
    ap.add_argument("--nu", type=float)
    ap.add_argument("--alpha", dest="alpha_list", type=_floats, help="comma-separated list")
    ap.add_argument("--k", dest="k_list", type=_floats, help="comma-separated list")
    ap.add_argument("--N", dest="N_list", type=_ints, help="comma-separated list")
    ap.add_argument("--n", dest="n_list", type=_ints, help="trace powers, comma-separated")
    ap.add_argument("--mc-replicates", dest="mc_replicates", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--quad-n", dest="quad_n", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--out", dest="out_path")
    ap.add_argument("--format", dest="out_format", choices=["csv", "json"])
    ap.add_argument("--config", help="JSON file with ExperimentConfig keys; flags take precedence")
    ap.add_argument("--manifest", action="store_true", help="also emit the resolved configuration")
    return ap


def resolve_config(ns: argparse.Namespace) -> ExperimentConfig:
    names = {f.name for f in fields(ExperimentConfig)}
    values: dict = {}
    if ns.config:
        with open(ns.config) as fh:
            doc = json.load(fh)
        unknown = set(doc) - names
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        values.update(doc)
    for name in names:
        v = getattr(ns, name, None)
        if v is not None:
            values[name] = v
    values["command"] = ns.command
    return ExperimentConfig(**values)


def _error_json(kind: str, message: str, failed: Optional[list] = None) -> str:
    return json.dumps({"error": {"type": kind, "message": message, "failed_checks": to_json(failed or [])}})


def main(argv: Optional[list] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(ns)
        report = run(cfg)
    except Exception as exc:  # reported, never silent
        print(_error_json(type(exc).__name__, str(exc)), file=sys.stderr)
        return 1
    text = render(report, cfg.out_format)
    if cfg.out_path:
        with open(cfg.out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if ns.manifest:
        manifest = json.dumps(asdict(cfg), indent=2, sort_keys=True) + "\n"
        if cfg.out_path:
            with open(cfg.out_path + ".manifest.json", "w") as fh:
                fh.write(manifest)
        else:
            sys.stderr.write(manifest)
    failed = report.failed()
    if failed:
        print(_error_json("SelfConvergenceError", f"{len(failed)} grid-doubling check(s) failed", failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Usage:
    orthobern basis eval --kind ortho --n 8 --samples 501 > phi8.csv
    orthobern basis coeffs --n 5 --j 5
    orthobern verify ortho --n 8
    orthobern verify sturm --n 10
    orthobern fit curve --target lissajous --n 20 --basis bernstein
    orthobern fit surface --target sinc --n 12 --m 12 --emit-samples sinc.csv
    orthobern sample --target langermann --grid 201

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric/evaluation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import approx, exact, testfns
from .basis import BasisSpec, Interval, bernstein_eval_all, onb_coeffs, onb_eval_all
from .errors import (
    BasisIndexError,
    CapabilityError,
    ConfigError,
    DomainError,
    EvaluationError,
    SingularityError,
)
from .quadrature import DEFAULT_NODES, DEFAULT_PANELS, QuadratureRule

__all__ = ["main", "build_parser", "RunConfig"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

DEFAULT_BASIS_SAMPLES = 101
DEFAULT_SAMPLE_GRID = 201


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _frac(v: Fraction) -> str:
    return str(Fraction(v))


@dataclass(frozen=True)
class RunConfig:
    """Validated options for one invocation."""

    command: str
    action: str | None = None
    n: int | None = None
    m: int | None = None
    j: int | None = None
    a: float | None = None
    b: float | None = None
    kind: str = "ortho"
    basis: str = "ortho"
    target: str | None = None
    input: Path | None = None
    output: Path | None = None
    fmt: str | None = None
    panels: int = DEFAULT_PANELS
    nodes: int = DEFAULT_NODES
    samples: int | None = None
    grid: int | None = None
    x: float | None = None
    emit_samples: Path | None = None
    sweep: tuple[int, int] | None = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        if fields.get("sweep") is not None:
            fields["sweep"] = _parse_range(fields["sweep"])
        cfg = cls(**fields)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if (self.a is None) != (self.b is None):
            raise ConfigError("--a and --b must be given together")
        for name in ("samples", "grid"):
            v = getattr(self, name)
            if v is not None and v < 2:
                raise ConfigError(f"--{name} must be at least 2, got {v}")
        if self.command == "fit":
            if (self.target is None) == (self.input is None):
                raise ConfigError("fit needs exactly one of --target or --input")
            if self.n is None and self.sweep is None:
                raise ConfigError("fit needs --n (or --sweep LO:HI)")
            if self.target is not None:
                kind, _ = testfns.TARGETS[self.target]
                if kind != self.action:
                    raise ConfigError(f"target {self.target!r} is a {kind}; use 'fit {kind}'")
        if self.command == "basis" and self.n is None:
            raise ConfigError("basis commands need --n")
        if self.command == "basis" and self.action == "eval" and self.x is not None and self.samples is not None:
            raise ConfigError("use either --x or --samples, not both")

    def interval(self, default: Interval | None = None) -> Interval:
        if self.a is not None:
            return Interval(self.a, self.b)
        return default if default is not None else Interval(0.0, 1.0)

    def rule(self) -> QuadratureRule:
        return QuadratureRule(self.panels, self.nodes)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError:
        raise ConfigError(f"--sweep expects LO:HI, got {text!r}") from None
    if lo > hi:
        raise ConfigError(f"--sweep range is empty: {text!r}")
    return lo, hi


def _write(cfg: RunConfig, text: str, out) -> None:
    if cfg.output is None:
        out.write(text)
    else:
        cfg.output.write_text(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------- basis


def cmd_basis(cfg: RunConfig, out) -> int:
    if cfg.action == "coeffs":
        return _basis_coeffs(cfg, out)
    spec = BasisSpec(cfg.n, cfg.interval())
    if cfg.x is not None:
        xs = np.array([cfg.x], dtype=float)
    else:
        xs = spec.interval.linspace(cfg.samples or DEFAULT_BASIS_SAMPLES)
    if cfg.kind == "ortho":
        values, prefix = onb_eval_all(spec, xs), "phi"
    else:
        values, prefix = bernstein_eval_all(spec, xs), "B"
    header = ["x"] + [f"{prefix}_{j}" for j in range(spec.n + 1)]
    if (cfg.fmt or "csv") == "csv":
        rows = ([float(x)] + [float(v) for v in row] for x, row in zip(xs, values))
        _write(cfg, _csv_text(header, rows), out)
    else:
        obj = {
            "kind": cfg.kind,
            "n": spec.n,
            "interval": spec.interval.as_list(),
            "x": xs.tolist(),
            "values": values.tolist(),
        }
        _write(cfg, _json_text(obj), out)
    return EXIT_OK


def _coeff_record(n: int, j: int) -> dict:
    c = onb_coeffs(n, j)
    return {
        "n": n,
        "j": j,
        "radicand": c.radicand,
        "scale": c.scale,
        "power": list(c.power),
        "combo": [{"k": k, "weight": _frac(w)} for k, w in c.combo],
    }


def _basis_coeffs(cfg: RunConfig, out) -> int:
    BasisSpec(cfg.n)  # degree cap
    js = [cfg.j] if cfg.j is not None else list(range(cfg.n + 1))
    records = [_coeff_record(cfg.n, j) for j in js]
    if (cfg.fmt or "json") == "json":
        _write(cfg, _json_text(records[0] if cfg.j is not None else records), out)
    else:
        rows = [(r["j"], p, c) for r in records for p, c in enumerate(r["power"])]
        _write(cfg, _csv_text(["j", "power", "coeff"], rows), out)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _verify_ortho(n: int) -> list[dict]:
    checks = []
    for i in range(n + 1):
        for j in range(n + 1):
            value = exact.ortho_double_sum(n, i, j)
            expected = Fraction(1, 2 * (n - i) + 1) if i == j else Fraction(0)
            checks.append(
                {"i": i, "j": j, "value": _frac(value), "expected": _frac(expected), "pass": value == expected}
            )
    return checks


def _verify_sturm(n: int) -> list[dict]:
    checks = []
    for j in range(n + 1):
        sl = exact.sturm_liouville_data(n, j)
        res = exact.sturm_residual(n, j)
        checks.append(
            {
                "j": j,
                "lambda": _frac(sl.lam),
                "residual": "0" if res.is_zero() else [_frac(c) for c in res.coeffs],
                "pass": res.is_zero(),
            }
        )
    return checks


def _verify_gram(n: int) -> list[dict]:
    gs = exact.gram_schmidt_oracle(n)
    checks = []
    for j in range(n + 1):
        factor = gs.normalization_factor(j)
        target = exact.onb_poly(n, j)
        ok = (
            factor > 0
            and gs.polys[j] == target * factor
            and factor**2 == gs.sq_norms[j] * (2 * (n - j) + 1)
        )
        checks.append(
            {"j": j, "factor": _frac(factor), "sq_norm": _frac(gs.sq_norms[j]), "pass": bool(ok)}
        )
    return checks


_VERIFIERS = {
    "ortho": ("orthonormality", _verify_ortho),
    "sturm": ("sturm-liouville", _verify_sturm),
    "gram": ("gram-schmidt", _verify_gram),
}


def cmd_verify(cfg: RunConfig, out) -> int:
    n = cfg.n
    if n is None:
        raise ConfigError("verify needs --n")
    if n < 0:
        raise BasisIndexError(f"degree must be non-negative, got {n}")
    if n > exact.EXACT_MAX_DEGREE:
        raise CapabilityError(f"exact verification limited to n <= {exact.EXACT_MAX_DEGREE}, got {n}")
    identity, run = _VERIFIERS[cfg.action]
    checks = run(n)
    passed = all(c["pass"] for c in checks)
    if (cfg.fmt or "json") == "json":
        _write(cfg, _json_text({"identity": identity, "n": n, "passed": passed, "checks": checks}), out)
    else:
        header = list(checks[0])
        rows = [[json.dumps(c[k]) if isinstance(c[k], (list, bool)) else c[k] for k in header] for c in checks]
        _write(cfg, _csv_text(header, rows), out)
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------- fit


def _read_table(path: Path) -> tuple[list[str], np.ndarray]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read input file {str(path)!r}: {exc.strerror}") from None
    rows = list(csv.reader(io.StringIO(text)))
    if len(rows) < 3:
        raise ConfigError(f"{path}: need a header and at least two data rows")
    header = [h.strip() for h in rows[0]]
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ConfigError(f"{path}: ragged rows")
    return header, data


def _load_curve(path: Path):
    header, data = _read_table(path)
    if header[0] != "t" or len(header) < 2:
        raise ConfigError(f"{path}: curve data needs columns t,x,y (or t,f)")
    order = np.argsort(data[:, 0], kind="stable")
    data = data[order]
    t = data[:, 0]
    if np.any(np.diff(t) <= 0):
        raise ConfigError(f"{path}: t values must be distinct")
    return t, {name: data[:, k] for k, name in enumerate(header) if k}


def _load_surface(path: Path):
    header, data = _read_table(path)
    if header[:3] != ["x", "y", "f"]:
        raise ConfigError(f"{path}: surface data needs columns x,y,f")
    xs, ys = np.unique(data[:, 0]), np.unique(data[:, 1])
    if len(xs) < 2 or len(ys) < 2 or len(data) != len(xs) * len(ys):
        raise ConfigError(f"{path}: points do not form a full rectangular grid")
    F = np.full((len(xs), len(ys)), np.nan)
    F[np.searchsorted(xs, data[:, 0]), np.searchsorted(ys, data[:, 1])] = data[:, 2]
    if np.isnan(F).any():
        raise ConfigError(f"{path}: points do not form a full rectangular grid")
    return xs, ys, F


def _degrees(cfg: RunConfig) -> list[int]:
    if cfg.sweep is not None:
        return list(range(cfg.sweep[0], cfg.sweep[1] + 1))
    return [cfg.n]


def _target_function(cfg: RunConfig):
    kind, params_cls = testfns.TARGETS[cfg.target]
    params = params_cls()
    if cfg.target == "lissajous":
        return (lambda t: testfns.lissajous(params, t)), params.t_interval
    if cfg.target == "sinc":
        return (lambda x, y: testfns.sinc_surface(params, x, y)), params.domain
    return (lambda x, y: testfns.langermann_surface(params, x, y)), params.domain


def _emit_curve_samples(path: Path, report: approx.FitReport, f, t: np.ndarray, columns=None) -> None:
    names = list(report.controls)
    if columns is None:
        vals = f(t)
        vals = vals if isinstance(vals, tuple) else (vals,)
        columns = dict(zip(names, vals))
    header = ["t"]
    cols = [t]
    for name in names:
        header += [name, f"{name}_fit"]
        cols += [columns[name], approx.reconstruct_curve(report.controls[name], t)]
    path.write_text(_csv_text(header, np.column_stack(cols).tolist()))


def _emit_surface_samples(path: Path, report: approx.FitReport, xs, ys, F) -> None:
    G = approx.reconstruct_surface_grid(report.controls["f"], xs, ys)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    table = np.column_stack([X.ravel(), Y.ravel(), F.ravel(), G.ravel()])
    path.write_text(_csv_text(["x", "y", "f", "f_fit"], table.tolist()))


def _report_rows(report: approx.FitReport):
    for name, ctl in report.controls.items():
        vals = np.atleast_2d(ctl.values) if ctl.values.ndim == 2 else ctl.values[:, None]
        for i, row in enumerate(vals):
            for j, v in enumerate(row):
                yield [name, i, j, float(v)]


def cmd_fit(cfg: RunConfig, out) -> int:
    reports = []
    emit = None
    if cfg.input is not None:
        if cfg.action == "curve":
            t, cols = _load_curve(cfg.input)
            iv = cfg.interval(Interval(t[0], t[-1]))
            for d in _degrees(cfg):
                reports.append(approx.fit_sampled_curve(t, cols, BasisSpec(d, iv), cfg.basis))
            emit = lambda path, r: _emit_curve_samples(path, r, None, t, cols)
        else:
            xs, ys, F = _load_surface(cfg.input)
            ix = cfg.interval(Interval(xs[0], xs[-1]))
            iy = cfg.interval(Interval(ys[0], ys[-1]))
            for d in _degrees(cfg):
                m = d if cfg.sweep is not None or cfg.m is None else cfg.m
                reports.append(
                    approx.fit_sampled_surface(xs, ys, F, BasisSpec(d, ix), BasisSpec(m, iy), cfg.basis)
                )
            emit = lambda path, r: _emit_surface_samples(path, r, xs, ys, F)
    else:
        f, default_iv = _target_function(cfg)
        iv = cfg.interval(default_iv)
        rule = cfg.rule()
        if cfg.action == "curve":
            N = cfg.samples or approx.DEFAULT_CURVE_SAMPLES
            for d in _degrees(cfg):
                reports.append(approx.fit_curve(f, BasisSpec(d, iv), cfg.basis, rule, N))
            emit = lambda path, r: _emit_curve_samples(path, r, f, iv.linspace(N))
        else:
            N = cfg.grid or cfg.samples or approx.DEFAULT_SURFACE_SAMPLES
            for d in _degrees(cfg):
                m = d if cfg.sweep is not None or cfg.m is None else cfg.m
                reports.append(
                    approx.fit_surface(f, BasisSpec(d, iv), BasisSpec(m, iv), cfg.basis, rule, N)
                )

            def emit(path, r):
                xs = ys = iv.linspace(N)
                _emit_surface_samples(path, r, xs, ys, f(xs[:, None], ys[None, :]))

    best = min(reports, key=lambda r: r.error)
    if cfg.emit_samples is not None:
        emit(cfg.emit_samples, best)
    if (cfg.fmt or "json") == "json":
        if cfg.sweep is None:
            payload = best.to_dict()
        else:
            payload = {"best": best.degrees, "reports": [r.to_dict() for r in reports]}
        _write(cfg, _json_text(payload), out)
    else:
        if cfg.sweep is None:
            _write(cfg, _csv_text(["component", "i", "j", "value"], _report_rows(best)), out)
        else:
            rows = [[r.degrees["n"], r.degrees.get("m", ""), float(r.error)] for r in reports]
            _write(cfg, _csv_text(["n", "m", "error"], rows), out)
    return EXIT_OK


# ---------------------------------------------------------------- sample


def cmd_sample(cfg: RunConfig, out) -> int:
    f, default_iv = _target_function(cfg)
    iv = cfg.interval(default_iv)
    kind, _ = testfns.TARGETS[cfg.target]
    if kind == "curve":
        t = iv.linspace(cfg.samples or approx.DEFAULT_CURVE_SAMPLES)
        x, y = f(t)
        header, table = ["t", "x", "y"], np.column_stack([t, x, y])
    else:
        N = cfg.grid or cfg.samples or DEFAULT_SAMPLE_GRID
        xs = iv.linspace(N)
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        header, table = ["x", "y", "f"], np.column_stack([X.ravel(), Y.ravel(), f(X, Y).ravel()])
    if (cfg.fmt or "csv") == "csv":
        _write(cfg, _csv_text(header, table.tolist()), out)
    else:
        _write(cfg, _json_text({"target": cfg.target, "columns": header, "rows": table.tolist()}), out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orthobern", description="Orthonormal Bernstein basis toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, interval=True, fmt=True):
        if interval:
            p.add_argument("--a", type=float, help="interval lower bound")
            p.add_argument("--b", type=float, help="interval upper bound")
        p.add_argument("--output", type=Path, help="write to this file instead of stdout")
        if fmt:
            p.add_argument("--format", dest="fmt", choices=["json", "csv"])

    basis = sub.add_parser("basis", help="evaluate bases or print exact coefficients")
    bsub = basis.add_subparsers(dest="action", required=True)
    p = bsub.add_parser("eval", help="tabulate B_j or phi_j over a grid")
    p.add_argument("--kind", choices=["ortho", "bernstein"], default="ortho")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--x", type=float, help="single abscissa")
    common(p)
    p = bsub.add_parser("coeffs", help="exact coefficients of phi_{j,n}")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int)
    common(p, interval=False)

    verify = sub.add_parser("verify", help="exact identity checks")
    vsub = verify.add_subparsers(dest="action", required=True)
    for name in _VERIFIERS:
        p = vsub.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        common(p, interval=False)

    fit = sub.add_parser("fit", help="fit a built-in target or sampled data")
    fsub = fit.add_subparsers(dest="action", required=True)
    for name in ("curve", "surface"):
        p = fsub.add_parser(name)
        p.add_argument("--target", choices=list(testfns.TARGETS))
        p.add_argument("--input", type=Path, help="CSV: t,x,y for curves; x,y,f grid for surfaces")
        p.add_argument("--n", type=int)
        if name == "surface":
            p.add_argument("--m", type=int, help="y degree (defaults to --n)")
        p.add_argument("--sweep", help="degree range LO:HI (n = m for surfaces)")
        p.add_argument("--basis", choices=["ortho", "bernstein"], default="ortho")
        p.add_argument("--panels", type=int, default=DEFAULT_PANELS)
        p.add_argument("--nodes", type=int, default=DEFAULT_NODES)
        p.add_argument("--samples", type=int, help="error-grid points per axis")
        if name == "surface":
            p.add_argument("--grid", type=int, help="alias for --samples")
        p.add_argument("--emit-samples", type=Path, help="write reconstruction-vs-truth CSV here")
        common(p)

    p = sub.add_parser("sample", help="tabulate a built-in target")
    p.add_argument("--target", choices=list(testfns.TARGETS), required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--grid", type=int)
    common(p)
    return parser


_COMMANDS = {"basis": cmd_basis, "verify": cmd_verify, "fit": cmd_fit, "sample": cmd_sample}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig.from_args(ns)
        return _COMMANDS[cfg.command](cfg, out)
    except (ConfigError, DomainError, BasisIndexError, CapabilityError) as exc:
        print(f"orthobern: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (EvaluationError, SingularityError, FloatingPointError) as exc:
        print(f"orthobern: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"orthobern: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Curve and surface fitting with orthonormal and classical Bernstein bases.

Orthonormal fits are generalized Fourier series: each coefficient is an
inner product with one basis member.  Classical Bézier control points are
then recovered by back-substitution, using the fact that
``int phi_{i,n} B_{j,n}`` vanishes for ``j < i`` (an upper-triangular
system whose entries are known in closed form).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .basis import BasisSpec, Interval, bernstein_eval_all, onb_eval_all
from .errors import ConfigError, EvaluationError, SingularityError
from .exact import phi_bern_integral
from .quadrature import QuadratureRule, _sample, default_rule

__all__ = [
    "BasisKind",
    "ControlVector",
    "ControlGrid",
    "SampleGrid",
    "FitReport",
    "DEFAULT_CURVE_SAMPLES",
    "DEFAULT_SURFACE_SAMPLES",
    "basis_matrix",
    "phi_bern_matrix",
    "fit_curve_onb",
    "fit_surface_onb",
    "back_substitute_curve",
    "back_substitute_surface",
    "bezier_curve_recover",
    "bezier_surface_recover",
    "reconstruct_curve",
    "reconstruct_surface",
    "reconstruct_surface_grid",
    "mse_curve",
    "mse_surface",
    "fit_curve",
    "fit_surface",
    "degree_sweep",
    "trapezoid_weights",
    "fit_sampled_curve",
    "fit_sampled_surface",
]

DEFAULT_CURVE_SAMPLES = 1001
DEFAULT_SURFACE_SAMPLES = 1001


class BasisKind(str, Enum):
    ORTHO = "ortho"
    BERNSTEIN = "bernstein"


def _readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ControlVector:
    kind: BasisKind
    spec: BasisSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        vals = _readonly(self.values)
        if vals.shape != (self.spec.size,):
            raise ConfigError(f"expected {self.spec.size} control values, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    def __call__(self, x):
        return reconstruct_curve(self, x)


@dataclass(frozen=True)
class ControlGrid:
    kind: BasisKind
    x_spec: BasisSpec
    y_spec: BasisSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        vals = _readonly(self.values)
        if vals.shape != (self.x_spec.size, self.y_spec.size):
            raise ConfigError(
                f"expected a {self.x_spec.size}x{self.y_spec.size} control grid, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def __call__(self, x, y):
        return reconstruct_surface(self, x, y)


@dataclass(frozen=True)
class SampleGrid:
    """Uniform abscissae including endpoints; one axis for curves, two for surfaces."""

    intervals: tuple[Interval, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if len(self.intervals) != len(self.counts) or len(self.counts) not in (1, 2):
            raise ConfigError("a sample grid has one or two axes, each with an interval and a count")
        if any(c < 2 for c in self.counts):
            raise ConfigError(f"each grid axis needs at least 2 points, got {self.counts}")

    @classmethod
    def curve(cls, interval: Interval, N: int = DEFAULT_CURVE_SAMPLES) -> "SampleGrid":
        return cls((interval,), (N,))

    @classmethod
    def surface(
        cls,
        x_interval: Interval,
        y_interval: Interval,
        N: int = DEFAULT_SURFACE_SAMPLES,
        M: int | None = None,
    ) -> "SampleGrid":
        return cls((x_interval, y_interval), (N, N if M is None else M))

    def axes(self) -> list[np.ndarray]:
        return [iv.linspace(c) for iv, c in zip(self.intervals, self.counts)]

    def as_dict(self) -> dict:
        return dict(zip(("N", "M"), self.counts))


def basis_matrix(kind: BasisKind, spec: BasisSpec, x) -> np.ndarray:
    """Basis values with a trailing index axis, for either basis kind."""
    if BasisKind(kind) is BasisKind.ORTHO:
        return onb_eval_all(spec, x)
    return bernstein_eval_all(spec, x)


def phi_bern_matrix(spec: BasisSpec) -> np.ndarray:
    """``M[i, j] = int_a^b phi_{i,n} B_{j,n} dx`` from the closed form; zero below the diagonal."""
    n = spec.n
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1):
            entry = phi_bern_integral(n, i, j, spec.interval)
            if j < i:
                assert entry.is_zero(), (i, j)
                continue
            out[i, j] = float(entry)
    return out


def _curve_moments(f, spec: BasisSpec, rule: QuadratureRule) -> np.ndarray:
    """``int_a^b f(x) phi_{j,n}(x) dx`` for every ``j``."""
    x, w = rule.on(spec.interval)
    vals = _checked_samples(f, x)
    return onb_eval_all(spec, x).T @ (w * vals)


def _surface_moments(f, x_spec: BasisSpec, y_spec: BasisSpec, rule: QuadratureRule) -> np.ndarray:
    x, wx = rule.on(x_spec.interval)
    y, wy = rule.on(y_spec.interval)
    vals = _checked_samples(f, x[:, None], y[None, :])
    return onb_eval_all(x_spec, x).T @ (wx[:, None] * vals * wy[None, :]) @ onb_eval_all(y_spec, y)


def _checked_samples(f, *args) -> np.ndarray:
    vals = _sample(f, *args)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = np.unravel_index(np.argmax(bad), vals.shape)
        at = tuple(float(np.broadcast_to(a, vals.shape)[idx]) for a in args)
        at = at[0] if len(at) == 1 else at
        raise EvaluationError(f"integrand is not finite at {at!r}", abscissa=at)
    return vals


def fit_curve_onb(f, spec: BasisSpec, rule: QuadratureRule | None = None) -> ControlVector:
    """Generalized Fourier coefficients ``P_j = (1/(b-a)) int_a^b phi_{j,n} f``."""
    rule = rule or default_rule()
    moments = _curve_moments(f, spec, rule)
    return ControlVector(BasisKind.ORTHO, spec, moments / spec.interval.length)


def fit_surface_onb(
    f, x_spec: BasisSpec, y_spec: BasisSpec, rule: QuadratureRule | None = None
) -> ControlGrid:
    """``P_ij = (1/area) int int f(x, y) phi_{i,n}(x) phi_{j,m}(y)``."""
    rule = rule or default_rule()
    moments = _surface_moments(f, x_spec, y_spec, rule)
    area = x_spec.interval.length * y_spec.interval.length
    return ControlGrid(BasisKind.ORTHO, x_spec, y_spec, moments / area)


def _check_diagonal(mat: np.ndarray) -> None:
    zero = np.flatnonzero(np.diag(mat) == 0.0)
    if zero.size:
        raise SingularityError(f"zero pivot in back-substitution at index {int(zero[0])}")


def back_substitute_curve(moments: np.ndarray, spec: BasisSpec) -> np.ndarray:
    """Solve ``M P = moments`` for ``i = n, n-1, ..., 0`` with ``M`` from :func:`phi_bern_matrix`."""
    mat = phi_bern_matrix(spec)
    _check_diagonal(mat)
    n = spec.n
    P = np.zeros(n + 1)
    for i in range(n, -1, -1):
        P[i] = (moments[i] - mat[i, i + 1 :] @ P[i + 1 :]) / mat[i, i]
    return P


def back_substitute_surface(moments: np.ndarray, x_spec: BasisSpec, y_spec: BasisSpec) -> np.ndarray:
    """Tensor-product triangular solve, ``i = n..0`` outer and ``j = m..0`` inner.

    When ``P[i, j]`` is solved, every ``(k, l)`` with ``k > i``, or
    ``k == i`` and ``l > j``, is already known and subtracted; pairs with
    ``l < j`` drop out because the y-factor vanishes there.
    """
    mx = phi_bern_matrix(x_spec)
    my = phi_bern_matrix(y_spec)
    _check_diagonal(mx)
    _check_diagonal(my)
    n, m = x_spec.n, y_spec.n
    P = np.zeros((n + 1, m + 1))
    for i in range(n, -1, -1):
        for j in range(m, -1, -1):
            # P[i, j] is still 0 here, so the block product covers exactly the solved pairs.
            known = mx[i, i:] @ P[i:, j:] @ my[j, j:]
            P[i, j] = (moments[i, j] - known) / (mx[i, i] * my[j, j])
    return P


def bezier_curve_recover(f, spec: BasisSpec, rule: QuadratureRule | None = None) -> ControlVector:
    """Classical Bézier control points best approximating ``f`` in L^2.

    The moments ``c_i = int f phi_i`` come from quadrature; the triangular
    matrix ``int phi_i B_j`` is exact.
    """
    rule = rule or default_rule()
    moments = _curve_moments(f, spec, rule)
    return ControlVector(BasisKind.BERNSTEIN, spec, back_substitute_curve(moments, spec))


def bezier_surface_recover(
    f, x_spec: BasisSpec, y_spec: BasisSpec, rule: QuadratureRule | None = None
) -> ControlGrid:
    """Tensor-product analogue of :func:`bezier_curve_recover`."""
    rule = rule or default_rule()
    moments = _surface_moments(f, x_spec, y_spec, rule)
    return ControlGrid(BasisKind.BERNSTEIN, x_spec, y_spec, back_substitute_surface(moments, x_spec, y_spec))


def reconstruct_curve(cv: ControlVector, x):
    out = basis_matrix(cv.kind, cv.spec, x) @ cv.values
    return float(out) if np.ndim(out) == 0 else out


def reconstruct_surface(cg: ControlGrid, x, y):
    """Pointwise evaluation; ``x`` and ``y`` broadcast against each other."""
    bx = basis_matrix(cg.kind, cg.x_spec, x)
    by = basis_matrix(cg.kind, cg.y_spec, y)
    out = np.sum((bx @ cg.values) * by, axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def reconstruct_surface_grid(cg: ControlGrid, xs, ys) -> np.ndarray:
    """Values on the tensor grid ``xs`` x ``ys`` (shape ``(len(xs), len(ys))``)."""
    return basis_matrix(cg.kind, cg.x_spec, xs) @ cg.values @ basis_matrix(cg.kind, cg.y_spec, ys).T


def mse_curve(fx, fy, gx, gy, grid: SampleGrid) -> float:
    """Mean of ``(fx - gx)^2 + (fy - gy)^2`` over the grid; pass ``None`` for both
    ``fy`` and ``gy`` to score a scalar curve."""
    (t,) = grid.axes()
    err = (_sample(fx, t) - _sample(gx, t)) ** 2
    if (fy is None) != (gy is None):
        raise ConfigError("fy and gy must both be given or both be None")
    if fy is not None:
        err = err + (_sample(fy, t) - _sample(gy, t)) ** 2
    return float(np.mean(err))


def mse_surface(f, g, grid: SampleGrid) -> float:
    """Mean of ``(f - g)^2`` over the ``N x M`` grid.

    ``g`` may be a :class:`ControlGrid` (evaluated as a tensor product) or
    any callable broadcasting over ``(x[:, None], y[None, :])``.
    """
    xs, ys = grid.axes()
    truth = _sample(f, xs[:, None], ys[None, :])
    if isinstance(g, ControlGrid):
        approx = reconstruct_surface_grid(g, xs, ys)
    else:
        approx = _sample(g, xs[:, None], ys[None, :])
    return float(np.mean((truth - approx) ** 2))


@dataclass(frozen=True)
class FitReport:
    """Outcome of one fit together with the grids it was scored on."""

    basis: BasisKind
    degrees: dict
    intervals: dict
    controls: dict = field(repr=False)
    error: float = math.nan
    grid: dict = field(default_factory=dict)
    quadrature: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.degrees["n"]

    def coefficients(self):
        """JSON-ready coefficients; parametric curves give one list per coordinate, grids are row-major."""
        out = {}
        for name, ctl in self.controls.items():
            out[name] = ctl.values.tolist()
        if list(out) == ["f"]:
            return out["f"]
        return out

    def to_dict(self) -> dict:
        return {
            "basis": BasisKind(self.basis).value,
            "degrees": dict(self.degrees),
            "intervals": {k: list(v) for k, v in self.intervals.items()},
            "coefficients": self.coefficients(),
            "error": float(self.error),
            "grid": dict(self.grid),
            "quadrature": dict(self.quadrature),
        }

    def to_json(self, indent: int | None = 2) -> str:
        # repr-based float output is the shortest round-trip form, so output is reproducible.
        return json.dumps(self.to_dict(), indent=indent)


def _split_components(f, probe_x) -> dict[str, Callable]:
    """Scalar curves give ``{"f": f}``; parametric ones (tuple output) one entry per coordinate."""
    probe = f(probe_x)
    if isinstance(probe, tuple):
        names = ("x", "y", "z")[: len(probe)] if len(probe) <= 3 else [f"c{i}" for i in range(len(probe))]
        return {name: (lambda t, i=i: f(t)[i]) for i, name in enumerate(names)}
    return {"f": f}


def fit_curve(
    f,
    spec: BasisSpec,
    basis: BasisKind | str = BasisKind.ORTHO,
    rule: QuadratureRule | None = None,
    samples: int = DEFAULT_CURVE_SAMPLES,
) -> FitReport:
    """Fit a scalar or parametric curve and score it.

    A parametric ``f`` returns a tuple of coordinate arrays; each
    coordinate is fitted independently with the same basis.
    """
    basis = BasisKind(basis)
    rule = rule or default_rule()
    grid = SampleGrid.curve(spec.interval, samples)
    parts = _split_components(f, np.array([spec.interval.a, spec.interval.b]))
    fitter = fit_curve_onb if basis is BasisKind.ORTHO else bezier_curve_recover
    controls = {name: fitter(fc, spec, rule) for name, fc in parts.items()}
    (t,) = grid.axes()
    err = np.zeros_like(t)
    for name, fc in parts.items():
        err += (_sample(fc, t) - reconstruct_curve(controls[name], t)) ** 2
    return FitReport(
        basis=basis,
        degrees={"n": spec.n},
        intervals={"t": spec.interval.as_list()},
        controls=controls,
        error=float(np.mean(err)),
        grid=grid.as_dict(),
        quadrature=rule.as_dict(),
    )


def fit_surface(
    f,
    x_spec: BasisSpec,
    y_spec: BasisSpec,
    basis: BasisKind | str = BasisKind.ORTHO,
    rule: QuadratureRule | None = None,
    samples: int | tuple[int, int] = DEFAULT_SURFACE_SAMPLES,
) -> FitReport:
    basis = BasisKind(basis)
    rule = rule or default_rule()
    N, M = (samples, samples) if np.isscalar(samples) else samples
    grid = SampleGrid.surface(x_spec.interval, y_spec.interval, N, M)
    fitter = fit_surface_onb if basis is BasisKind.ORTHO else bezier_surface_recover
    ctl = fitter(f, x_spec, y_spec, rule)
    return FitReport(
        basis=basis,
        degrees={"n": x_spec.n, "m": y_spec.n},
        intervals={"x": x_spec.interval.as_list(), "y": y_spec.interval.as_list()},
        controls={"f": ctl},
        error=mse_surface(f, ctl, grid),
        grid=grid.as_dict(),
        quadrature=rule.as_dict(),
    )


def degree_sweep(
    f,
    degrees: Sequence[int],
    interval: Interval,
    y_interval: Interval | None = None,
    basis: BasisKind | str = BasisKind.ORTHO,
    rule: QuadratureRule | None = None,
    samples: int | None = None,
) -> list[FitReport]:
    """One report per degree, in the given order; surfaces use ``n = m = d``.

    No stopping rule: the caller picks the minimum-error entry.
    """
    degrees = list(degrees)
    if not degrees:
        raise ConfigError("degree sweep needs at least one degree")
    reports = []
    for d in degrees:
        if y_interval is None:
            reports.append(
                fit_curve(f, BasisSpec(d, interval), basis, rule, samples or DEFAULT_CURVE_SAMPLES)
            )
        else:
            reports.append(
                fit_surface(
                    f,
                    BasisSpec(d, interval),
                    BasisSpec(d, y_interval),
                    basis,
                    rule,
                    samples or DEFAULT_SURFACE_SAMPLES,
                )
            )
    return reports


def trapezoid_weights(x: np.ndarray) -> np.ndarray:
    w = np.zeros_like(x)
    dx = np.diff(x)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


def fit_sampled_curve(
    t: np.ndarray, columns: dict[str, np.ndarray], spec: BasisSpec, basis: BasisKind | str = BasisKind.ORTHO
) -> FitReport:
    """Fit tabulated curve data, one entry of ``columns`` per coordinate.

    Projections use trapezoidal weights on the given abscissae, so accuracy
    is limited to second order in the sample spacing.  The error is scored
    on the data points themselves.
    """
    basis = BasisKind(basis)
    t = np.asarray(t, dtype=float)
    for vals in columns.values():
        _checked_samples(lambda x: vals, t)
    w = trapezoid_weights(t)
    phi = onb_eval_all(spec, t)
    controls = {}
    err = np.zeros_like(t)
    for name, vals in columns.items():
        moments = phi.T @ (w * vals)
        if basis is BasisKind.ORTHO:
            ctl = ControlVector(basis, spec, moments / spec.interval.length)
        else:
            ctl = ControlVector(basis, spec, back_substitute_curve(moments, spec))
        controls[name] = ctl
        err += (vals - reconstruct_curve(ctl, t)) ** 2
    return FitReport(
        basis=basis,
        degrees={"n": spec.n},
        intervals={"t": spec.interval.as_list()},
        controls=controls,
        error=float(np.mean(err)),
        grid={"N": len(t)},
        quadrature={"rule": "trapezoid", "points": len(t)},
    )


def fit_sampled_surface(
    xs: np.ndarray,
    ys: np.ndarray,
    F: np.ndarray,
    x_spec: BasisSpec,
    y_spec: BasisSpec,
    basis: BasisKind | str = BasisKind.ORTHO,
) -> FitReport:
    """Surface counterpart of :func:`fit_sampled_curve`; ``F[i, j] = f(xs[i], ys[j])``."""
    basis = BasisKind(basis)
    F = _checked_samples(lambda x, y: F, xs[:, None], ys[None, :])
    wx, wy = trapezoid_weights(xs), trapezoid_weights(ys)
    moments = onb_eval_all(x_spec, xs).T @ (wx[:, None] * F * wy[None, :]) @ onb_eval_all(y_spec, ys)
    if basis is BasisKind.ORTHO:
        area = x_spec.interval.length * y_spec.interval.length
        ctl = ControlGrid(basis, x_spec, y_spec, moments / area)
    else:
        ctl = ControlGrid(basis, x_spec, y_spec, back_substitute_surface(moments, x_spec, y_spec))
    G = reconstruct_surface_grid(ctl, xs, ys)
    return FitReport(
        basis=basis,
        degrees={"n": x_spec.n, "m": y_spec.n},
        intervals={"x": x_spec.interval.as_list(), "y": y_spec.interval.as_list()},
        controls={"f": ctl},
        error=float(np.mean((F - G) ** 2)),
        grid={"N": len(xs), "M": len(ys)},
        quadrature={"rule": "trapezoid", "points": len(xs) * len(ys)},
    )

"""Composite Gauss–Legendre quadrature in one and two dimensions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .basis import Interval
from .errors import CapabilityError, ConfigError, EvaluationError

__all__ = [
    "MAX_POINTS",
    "DEFAULT_PANELS",
    "DEFAULT_NODES",
    "gauss_nodes",
    "QuadratureRule",
    "default_rule",
    "basis_rule",
    "integrate",
    "integrate2d",
]

MAX_POINTS = 128
DEFAULT_PANELS = 64
DEFAULT_NODES = 16

_NEWTON_TOL = 1e-15
_NEWTON_MAXITER = 100


@lru_cache(maxsize=None)
def _gauss_cached(points: int) -> tuple[np.ndarray, np.ndarray]:
    nodes = np.empty(points)
    weights = np.empty(points)
    half = (points + 1) // 2
    for i in range(half):
        # Roots ascend as the cosine guess's angle shrinks; take the i-th from the left.
        x = -math.cos(math.pi * (i + 0.75) / (points + 0.5))
        for _ in range(_NEWTON_MAXITER):
            p0, p1 = 1.0, x
            for k in range(2, points + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = points * (x * p1 - p0) / (x * x - 1.0)
            dx = p1 / dp
            x -= dx
            if abs(dx) <= _NEWTON_TOL:
                break
        p0, p1 = 1.0, x
        for k in range(2, points + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = points * (x * p1 - p0) / (x * x - 1.0)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        nodes[i], nodes[points - 1 - i] = x, -x
        weights[i] = weights[points - 1 - i] = w
    if points % 2:
        nodes[half - 1] = 0.0
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_nodes(points: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes (ascending) and weights on ``[-1, 1]``.

    Newton iteration on the three-term Legendre recurrence from cosine
    initial guesses; results are cached and read-only.
    """
    if isinstance(points, bool) or int(points) != points or not 1 <= points <= MAX_POINTS:
        raise CapabilityError(f"Gauss rule needs 1..{MAX_POINTS} points, got {points!r}")
    return _gauss_cached(int(points))


@dataclass(frozen=True)
class QuadratureRule:
    """``panels`` equal subintervals, each with a ``nodes_per_panel``-point Gauss rule.

    ``nodes``/``weights`` live on the reference interval ``[0, 1]``.
    """

    panels: int = DEFAULT_PANELS
    nodes_per_panel: int = DEFAULT_NODES
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.panels, bool) or int(self.panels) != self.panels or self.panels < 1:
            raise ConfigError(f"panels must be a positive integer, got {self.panels!r}")
        g, w = gauss_nodes(self.nodes_per_panel)
        edges = np.arange(self.panels + 1) / self.panels
        half = 0.5 / self.panels
        mids = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mids[:, None] + half * g[None, :]).ravel()
        weights = np.broadcast_to(half * w, (self.panels, len(w))).ravel().copy()
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def exact_degree(self) -> int:
        return 2 * self.nodes_per_panel - 1

    def on(self, interval: Interval) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped onto ``interval``."""
        h = interval.length
        x = interval.a + h * self.nodes
        # Guard against a last-ulp overshoot past b.
        np.clip(x, interval.a, interval.b, out=x)
        return x, h * self.weights

    def as_dict(self) -> dict:
        return {"panels": self.panels, "nodes": self.nodes_per_panel}


def default_rule() -> QuadratureRule:
    """64 panels of 16 points, for non-polynomial integrands."""
    return QuadratureRule(DEFAULT_PANELS, DEFAULT_NODES)


def basis_rule(n: int) -> QuadratureRule:
    """Single panel with ``n + 1`` points: exact for basis products of degree ``2n``."""
    return QuadratureRule(1, n + 1)


def _sample(f, *args) -> np.ndarray:
    """Evaluate ``f`` on array arguments, broadcasting scalar results."""
    vals = np.asarray(f(*args), dtype=float)
    shape = np.broadcast_shapes(*(np.shape(a) for a in args))
    if vals.shape != shape:
        vals = np.broadcast_to(vals, shape)
    return vals


def integrate(f, interval: Interval, rule: QuadratureRule | None = None) -> float:
    """Composite Gauss–Legendre estimate of ``int_a^b f(x) dx``.

    ``f`` is called once with the array of all abscissae.
    """
    rule = rule or default_rule()
    x, w = rule.on(interval)
    vals = _sample(f, x)
    bad = ~np.isfinite(vals)
    if bad.any():
        at = float(x[np.argmax(bad)])
        raise EvaluationError(f"integrand is not finite at x={at!r}", abscissa=at)
    return float(np.dot(w, vals))


def integrate2d(f, x_interval: Interval, y_interval: Interval, rule: QuadratureRule | None = None) -> float:
    """Tensor-product rule for ``int int f(x, y) dy dx``; ``f`` gets meshgrid arrays."""
    rule = rule or default_rule()
    x, wx = rule.on(x_interval)
    y, wy = rule.on(y_interval)
    vals = _sample(f, x[:, None], y[None, :])
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = np.unravel_index(np.argmax(bad), vals.shape)
        at = (float(x[i]), float(y[j]))
        raise EvaluationError(f"integrand is not finite at (x, y)={at!r}", abscissa=at)
    return float(wx @ vals @ wy)

"""Benchmark targets: one parametric curve and two surfaces."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import Interval
from .errors import ConfigError

__all__ = [
    "LissajousParams",
    "SincParams",
    "LangermannParams",
    "lissajous",
    "sinc_surface",
    "langermann_surface",
    "TARGETS",
]


@dataclass(frozen=True)
class LissajousParams:
    A: float = 1.0
    B: float = 1.0
    a_freq: int = 4
    b_freq: int = 3
    delta: float = math.pi / 3
    t_interval: Interval = field(default_factory=lambda: Interval(-math.pi, math.pi))


@dataclass(frozen=True)
class SincParams:
    s: float = 1e-6
    domain: Interval = field(default_factory=lambda: Interval(-8.0, 8.0))


@dataclass(frozen=True)
class LangermannParams:
    c: tuple[float, ...] = (1.0, 2.0)
    q: tuple[float, ...] = (2.0, 3.0)
    r: tuple[float, ...] = (3.0, 2.0)
    domain: Interval = field(default_factory=lambda: Interval(1.0, 3.0))

    def __post_init__(self):
        for name in ("c", "q", "r"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not len(self.c) == len(self.q) == len(self.r):
            raise ConfigError(
                f"Langermann lists differ in length: c={len(self.c)}, q={len(self.q)}, r={len(self.r)}"
            )

    @property
    def p(self) -> int:
        """Number of terms."""
        return len(self.c)


def lissajous(params: LissajousParams, t):
    """``(A sin(a t + delta), B sin(b t))``; ``t`` must lie in ``params.t_interval``."""
    t = params.t_interval.check(t)
    x = params.A * np.sin(params.a_freq * t + params.delta)
    y = params.B * np.sin(params.b_freq * t)
    if t.ndim == 0:
        return float(x), float(y)
    return x, y


def sinc_surface(params: SincParams, x, y):
    # s regularizes only the denominator, so the value at the origin is 0.
    rho = 1.5 * np.hypot(x, y)
    out = np.sin(rho) / (params.s + rho)
    return float(out) if np.ndim(out) == 0 else out


def langermann_surface(params: LangermannParams, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast_shapes(x.shape, y.shape))
    for c, q, r in zip(params.c, params.q, params.r):
        d = (x - q) ** 2 + (y - r) ** 2
        total = total + c * np.exp(-d / math.pi) * np.cos(math.pi * d)
    return float(total) if total.ndim == 0 else total


# name -> (kind, default params factory)
TARGETS = {
    "lissajous": ("curve", LissajousParams),
    "sinc": ("surface", SincParams),
    "langermann": ("surface", LangermannParams),
}

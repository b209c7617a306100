"""Classical and orthonormal Bernstein bases on an arbitrary interval.

The classical basis of degree ``n`` on ``[a, b]`` is::

    B_{j,n}(x) = C(n, j) (x - a)^j (b - x)^(n - j) / (b - a)^n

and the orthonormal basis is built as a signed combination of classical
Bernstein polynomials of degrees ``n - j .. n``::

    phi_{j,n}(t) = sqrt(2(n-j)+1) * sum_k (-1)^k C(2n+1-k, j-k) C(j, k) / C(n-k, j-k) * B_{j-k, n-k}(t)

with ``t = (x - a) / (b - a)``.  The members satisfy
``int_a^b phi_i phi_j dx = (b - a) delta_ij``.

All evaluators accept a scalar or an array of abscissae.  Scalars give
Python floats (or a 1-D array for the ``*_all`` variants); arrays give
arrays with a trailing basis axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import BasisIndexError, CapabilityError, ConfigError, DomainError

__all__ = [
    "MAX_DEGREE",
    "Interval",
    "UNIT",
    "BasisSpec",
    "OrthoCoeffs",
    "bernstein_eval",
    "bernstein_eval_all",
    "bernstein_triangle",
    "onb_coeffs",
    "onb_eval",
    "onb_eval_all",
    "onb_eval_combo",
    "onb_eval_explicit",
]

MAX_DEGREE = 64


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[a, b]`` with ``a < b``."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ConfigError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not a < b:
            raise ConfigError(f"interval needs a < b, got [{self.a}, {self.b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def check(self, x) -> np.ndarray:
        """Return ``x`` as a float array, raising DomainError if any point lies outside."""
        x = np.asarray(x, dtype=float)
        bad = ~((x >= self.a) & (x <= self.b))
        if bad.any():
            first = float(x[bad].flat[0]) if x.ndim else float(x)
            raise DomainError(f"x outside interval: {first!r} not in [{self.a}, {self.b}]")
        return x

    def to_unit(self, x):
        """Map checked abscissae to ``(t, 1 - t)``.

        Both halves are formed from a single subtraction so that ``t`` is
        exactly 0 at ``a`` and ``1 - t`` is exactly 0 at ``b``.
        """
        x = self.check(x)
        h = self.length
        return (x - self.a) / h, (self.b - x) / h

    def linspace(self, count: int) -> np.ndarray:
        return np.linspace(self.a, self.b, count)

    def as_list(self) -> list[float]:
        return [self.a, self.b]


UNIT = Interval(0.0, 1.0)


@dataclass(frozen=True)
class BasisSpec:
    """Degree ``n`` plus defining interval: one complete basis of ``n + 1`` functions."""

    n: int
    interval: Interval = UNIT

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n:
            raise ConfigError(f"degree must be an integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.n < 0:
            raise BasisIndexError(f"degree must be non-negative, got {self.n}")
        if self.n > MAX_DEGREE:
            raise CapabilityError(f"degree {self.n} exceeds the supported ceiling {MAX_DEGREE}")

    @property
    def size(self) -> int:
        return self.n + 1


def _check_index(n: int, j: int) -> None:
    if n < 0 or j < 0:
        raise BasisIndexError(f"indices must be non-negative, got n={n}, j={j}")
    if j > n:
        raise BasisIndexError(f"basis index j={j} exceeds degree n={n}")


def bernstein_triangle(t, s, n: int) -> list[np.ndarray]:
    """All Bernstein values of degrees ``0..n`` at ``t`` (with ``s = 1 - t``).

    Row ``d`` has shape ``t.shape + (d + 1,)``.  Each row is produced from
    the previous one by ``B_{i,d} = s B_{i,d-1} + t B_{i-1,d-1}``; every
    term is non-negative, so no cancellation occurs.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    row = np.ones(t.shape + (1,))
    rows = [row]
    tt = t[..., None]
    ss = s[..., None]
    for d in range(1, n + 1):
        new = np.empty(t.shape + (d + 1,))
        new[..., :d] = ss * row
        new[..., d] = 0.0
        new[..., 1:] += tt * row
        rows.append(new)
        row = new
    return rows


def bernstein_eval_all(spec: BasisSpec, x):
    """``[B_{0,n}(x), ..., B_{n,n}(x)]``, trailing axis indexes ``j``."""
    t, s = spec.interval.to_unit(x)
    return bernstein_triangle(t, s, spec.n)[spec.n]


def bernstein_eval(spec: BasisSpec, j: int, x):
    _check_index(spec.n, j)
    out = bernstein_eval_all(spec, x)[..., j]
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class OrthoCoeffs:
    """Exact description of one orthonormal Bernstein polynomial.

    ``combo`` lists ``(k, weight)`` for the combination of ``B_{j-k, n-k}``;
    ``power`` holds ascending power-basis integer coefficients of
    ``phi_{j,n} / scale``; ``inner_desc`` the descending coefficients of
    the non-factorable part ``q`` in ``phi_{j,n} = scale (1-t)^(n-j) q(t)``.
    ``scale == sqrt(radicand)``.
    """

    j: int
    n: int
    radicand: int
    scale: float
    combo: tuple[tuple[int, Fraction], ...]
    power: tuple[int, ...]
    inner_desc: tuple[int, ...]

    def float_weights(self) -> tuple[float, ...]:
        return tuple(float(w) for _, w in self.combo)


@lru_cache(maxsize=None)
def onb_coeffs(n: int, j: int) -> OrthoCoeffs:
    """Exact combination weights and expanded power coefficients of ``phi_{j,n}``.

    >>> c = onb_coeffs(5, 5)
    >>> c.power
    (-1, 35, -280, 840, -1050, 462)
    """
    _check_index(n, j)
    if n > MAX_DEGREE:
        raise CapabilityError(f"degree {n} exceeds the supported ceiling {MAX_DEGREE}")
    comb = math.comb
    combo = []
    inner = [0] * (j + 1)  # inner[p] multiplies t^p
    for k in range(j + 1):
        sign = -1 if k % 2 else 1
        c = sign * comb(2 * n + 1 - k, j - k) * comb(j, k)
        inner[j - k] = c
        combo.append((k, Fraction(c, comb(n - k, j - k))))
    m = n - j
    factor = [(-1) ** r * comb(m, r) for r in range(m + 1)]  # (1 - t)^m
    power = [0] * (n + 1)
    for p, cp in enumerate(inner):
        for r, fr in enumerate(factor):
            power[p + r] += cp * fr
    radicand = 2 * (n - j) + 1
    return OrthoCoeffs(
        j, n, radicand, math.sqrt(radicand), tuple(combo), tuple(power), tuple(reversed(inner))
    )


def _dyadic(t: np.ndarray):
    """Exact numerators/denominators of float abscissae as object arrays of ints."""
    flat = t.ravel().tolist()
    num = np.empty(len(flat), dtype=object)
    den = np.empty(len(flat), dtype=object)
    for i, v in enumerate(flat):
        num[i], den[i] = v.as_integer_ratio()
    return num, den


def _exact_values(t: np.ndarray, n: int, indices) -> np.ndarray:
    """Correctly rounded ``phi_{j,n}(t)/scale`` for each ``j`` in ``indices``.

    With ``t = N/D`` exactly, term ``k`` of the Bernstein combination is
    ``(-1)^k C(2n+1-k, j-k) C(j, k) N^(j-k) (D-N)^(n-j) D^k / D^n``: the
    ``C(n-k, j-k)`` of the weight cancels the one inside ``B_{j-k,n-k}``.
    The sum is formed in integers and divided once, so the alternating
    weights (up to ~1e14 at n = 20) cause no cancellation error.
    """
    num, den = _dyadic(t)
    rest = den - num
    den_pows = [np.ones(num.shape, dtype=object)]
    for _ in range(n):
        den_pows.append(den_pows[-1] * den)
    full = den_pows[n]
    out = np.empty((num.size, len(indices)))
    for col, j in enumerate(indices):
        acc = np.zeros(num.shape, dtype=object)
        for k, c in enumerate(onb_coeffs(n, j).inner_desc):
            acc = acc * num + c * den_pows[k]
        acc = acc * rest ** (n - j)
        out[:, col] = [a / d for a, d in zip(acc.tolist(), full.tolist())]
    return out.reshape(t.shape + (len(indices),))


def onb_eval(spec: BasisSpec, j: int, x):
    """``phi_{j,n}`` at ``x``, exact up to a final rounding.

    The Bernstein combination is summed in integer arithmetic on the
    exactly represented abscissa ``t = (x - a)/(b - a)``; see
    :func:`onb_eval_combo` for the plain floating version.
    """
    _check_index(spec.n, j)
    t, _ = spec.interval.to_unit(x)
    out = onb_coeffs(spec.n, j).scale * _exact_values(t, spec.n, [j])[..., 0]
    return float(out) if out.ndim == 0 else out


def onb_eval_all(spec: BasisSpec, x) -> np.ndarray:
    t, _ = spec.interval.to_unit(x)
    n = spec.n
    scales = np.array([onb_coeffs(n, j).scale for j in range(n + 1)])
    return scales * _exact_values(t, n, range(n + 1))


@lru_cache(maxsize=None)
def _weights(n: int) -> tuple[tuple[float, tuple[float, ...]], ...]:
    return tuple((c.scale, c.float_weights()) for c in (onb_coeffs(n, j) for j in range(n + 1)))


def onb_eval_combo(spec: BasisSpec, j: int, x):
    """``phi_{j,n}`` as a floating combination of recurrence Bernstein values.

    Fast and fine for small ``n``, but the signed weights grow like
    ``C(2n, n)`` so roughly ``log10(max weight)`` digits are lost
    (about 1e-2 absolute error at n = 20).
    """
    _check_index(spec.n, j)
    t, s = spec.interval.to_unit(x)
    n = spec.n
    rows = bernstein_triangle(t, s, n)
    scale, weights = _weights(n)[j]
    acc = weights[0] * rows[n][..., j]
    for k in range(1, j + 1):
        acc = acc + weights[k] * rows[n - k][..., j - k]
    out = scale * acc
    return float(out) if out.ndim == 0 else out


def onb_eval_explicit(spec: BasisSpec, j: int, x):
    """``phi_{j,n}`` from the factored form ``scale (1-t)^(n-j) q(t)`` in floating point.

    Horner on ``q`` suffers the same cancellation as the combination form.
    """
    _check_index(spec.n, j)
    t, s = spec.interval.to_unit(x)
    q = np.zeros_like(t)
    for c in onb_coeffs(spec.n, j).inner_desc:
        q = q * t + float(c)
    out = math.sqrt(2 * (spec.n - j) + 1) * s ** (spec.n - j) * q
    return float(out) if out.ndim == 0 else out

"""Exact rational verification of the orthonormal Bernstein identities.

Everything here runs on :class:`fractions.Fraction`.  Square-root scale
factors never enter: identities are restated on the radical-free part
``phi_{j,n} / sqrt(2(n-j)+1)`` and radicals only multiply in at the
floating boundary (:class:`ScaledRadical`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .basis import Interval, UNIT, onb_coeffs
from .errors import BasisIndexError, CapabilityError

__all__ = [
    "EXACT_MAX_DEGREE",
    "RationalPoly",
    "ScaledRadical",
    "SturmLiouvilleData",
    "GramSchmidtResult",
    "bernstein_poly",
    "onb_poly",
    "bernstein_pair_integral",
    "ortho_double_sum",
    "phi_bern_sum",
    "phi_bern_integral",
    "gram_schmidt_oracle",
    "sturm_liouville_data",
    "sturm_residual",
]

# O(n^2) big-rational terms per identity; keeps exhaustive sweeps fast.
EXACT_MAX_DEGREE = 15


class RationalPoly:
    """Univariate polynomial with exact rational coefficients, ascending order.

    Always canonical: trailing zeros trimmed, so the zero polynomial has
    an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "RationalPoly":
        return cls([0] * power + [coeff])

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"

    def __neg__(self):
        return RationalPoly(-c for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RationalPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, RationalPoly):
            other = RationalPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RationalPoly):
            f = Fraction(other)
            return RationalPoly(c * f for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = RationalPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def antiderivative(self) -> "RationalPoly":
        return RationalPoly([0] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def integrate(self, lo=0, hi=1) -> Fraction:
        """Exact definite integral, ``[0, 1]`` by default."""
        F = self.antiderivative()
        return F(Fraction(hi)) - F(Fraction(lo))

    def divmod_linear(self, root) -> tuple["RationalPoly", Fraction]:
        """Synthetic division by ``(x - root)``: returns ``(quotient, remainder)``."""
        root = Fraction(root)
        if self.is_zero():
            return RationalPoly(), Fraction(0)
        acc = Fraction(0)
        q = []
        for c in reversed(self.coeffs):
            acc = acc * root + c
            q.append(acc)
        rem = q.pop()
        return RationalPoly(reversed(q)), rem

    def root_multiplicity(self, root) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has every root with infinite multiplicity")
        count, p = 0, self
        while True:
            q, rem = p.divmod_linear(root)
            if rem != 0:
                return count
            count, p = count + 1, q


def inner(p: RationalPoly, q: RationalPoly) -> Fraction:
    """L^2[0, 1] inner product."""
    return (p * q).integrate()


def bernstein_poly(j: int, n: int) -> RationalPoly:
    """``B_{j,n}(t)`` on ``[0, 1]`` in the power basis."""
    if not 0 <= j <= n:
        raise BasisIndexError(f"need 0 <= j <= n, got j={j}, n={n}")
    t = RationalPoly([0, 1])
    return math.comb(n, j) * t**j * RationalPoly([1, -1]) ** (n - j)


def onb_poly(n: int, j: int) -> RationalPoly:
    """Radical-free part of ``phi_{j,n}`` as an exact polynomial."""
    return RationalPoly(onb_coeffs(n, j).power)


def _check_pair(p, q, name_p="p", name_q="q"):
    if not 0 <= p <= q:
        raise BasisIndexError(f"need 0 <= {name_p} <= {name_q}, got {name_p}={p}, {name_q}={q}")


def bernstein_pair_integral(p: int, q: int, r: int, s: int) -> Fraction:
    """``int_0^1 B_{p,q} B_{r,s} dt = C(q,p) C(s,r) / ((q+s+1) C(q+s, p+r))``."""
    _check_pair(p, q, "p", "q")
    _check_pair(r, s, "r", "s")
    comb = math.comb
    return Fraction(comb(q, p) * comb(s, r), (q + s + 1) * comb(q + s, p + r))


def _check_ij(n: int, i: int, j: int) -> None:
    if n < 0 or not (0 <= i <= n and 0 <= j <= n):
        raise BasisIndexError(f"need 0 <= i, j <= n, got n={n}, i={i}, j={j}")


def ortho_double_sum(n: int, i: int, j: int) -> Fraction:
    """Closed-form ``int_0^1 phi_i phi_j dt`` with the two radicals stripped.

    Equals 0 for ``i != j`` and ``1 / (2(n-i)+1)`` on the diagonal.
    """
    _check_ij(n, i, j)
    comb = math.comb
    total = Fraction(0)
    for k in range(i + 1):
        a = comb(2 * n + 1 - k, i - k) * comb(i, k)
        for l in range(j + 1):
            b = comb(2 * n + 1 - l, j - l) * comb(j, l)
            kl = k + l
            den = (2 * n + 1 - kl) * comb(2 * n - kl, i + j - kl)
            term = Fraction(a * b, den)
            total += -term if kl % 2 else term
    return total


def phi_bern_sum(n: int, i: int, j: int) -> Fraction:
    """Rational factor ``R`` of ``int_0^1 phi_{i,n} B_{j,n} = sqrt(2(n-i)+1) R``.

    Evaluates the closed-form sum for any ``j``, including ``j < i``
    where it must vanish.
    """
    _check_ij(n, i, j)
    comb = math.comb
    total = Fraction(0)
    cj = comb(n, j)
    for k in range(i + 1):
        term = Fraction(
            comb(2 * n + 1 - k, i - k) * comb(i, k) * cj,
            (2 * n + 1 - k) * comb(2 * n - k, i + j - k),
        )
        total += -term if k % 2 else term
    return total


@dataclass(frozen=True)
class ScaledRadical:
    """``length * sqrt(radicand) * rational``: exact core plus a real scale."""

    rational: Fraction
    radicand: int
    length: float = 1.0

    def __float__(self):
        return self.length * math.sqrt(self.radicand) * float(self.rational)

    @property
    def value(self) -> float:
        return float(self)

    def is_zero(self) -> bool:
        return self.rational == 0


@lru_cache(maxsize=None)
def _phi_bern_cached(n: int, i: int, j: int) -> Fraction:
    return phi_bern_sum(n, i, j) if j >= i else Fraction(0)


def phi_bern_integral(n: int, i: int, j: int, interval: Interval = UNIT) -> ScaledRadical:
    """``int_a^b phi_{i,n}(x) B_{j,n}(x) dx``; exactly zero when ``j < i``."""
    _check_ij(n, i, j)
    return ScaledRadical(_phi_bern_cached(n, i, j), 2 * (n - i) + 1, interval.length)


@dataclass(frozen=True)
class GramSchmidtResult:
    """Unnormalized Gram–Schmidt output over ``B_{0,n}, ..., B_{n,n}``."""

    n: int
    polys: tuple[RationalPoly, ...]
    sq_norms: tuple[Fraction, ...]

    def normalization_factor(self, j: int) -> Fraction:
        """Positive rational ``c`` with ``polys[j] == c * onb_poly(n, j)``."""
        return self.polys[j].leading / onb_poly(self.n, j).leading


def gram_schmidt_oracle(n: int) -> GramSchmidtResult:
    """Classical Gram–Schmidt on the degree-``n`` Bernstein basis, ascending ``j``.

    Vectors are tracked as exact coordinate lists in the Bernstein basis so
    that every inner product reduces to :func:`bernstein_pair_integral`.
    """
    if n < 0:
        raise BasisIndexError(f"degree must be non-negative, got {n}")
    if n > EXACT_MAX_DEGREE:
        raise CapabilityError(f"exact Gram-Schmidt limited to n <= {EXACT_MAX_DEGREE}, got {n}")
    size = n + 1
    gram = [[bernstein_pair_integral(p, n, r, n) for r in range(size)] for p in range(size)]

    def ip(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
        return sum(
            (u[p] * v[r] * gram[p][r] for p in range(size) if u[p] for r in range(size) if v[r]),
            Fraction(0),
        )

    basis_vecs: list[list[Fraction]] = []
    norms: list[Fraction] = []
    for j in range(size):
        e_j = [Fraction(int(p == j)) for p in range(size)]
        v = list(e_j)
        for u, nu in zip(basis_vecs, norms):
            coef = ip(e_j, u) / nu
            v = [vp - coef * up for vp, up in zip(v, u)]
        basis_vecs.append(v)
        norms.append(ip(v, v))

    bern = [bernstein_poly(p, n) for p in range(size)]
    polys = []
    for v in basis_vecs:
        poly = RationalPoly()
        for p, c in enumerate(v):
            if c:
                poly = poly + bern[p] * c
        polys.append(poly)
    return GramSchmidtResult(n, tuple(polys), tuple(norms))


@dataclass(frozen=True)
class SturmLiouvilleData:
    """Coefficients of ``(p u')' + q u + lambda w u = 0`` for degree ``n``, index ``j``."""

    n: int
    j: int
    p_poly: RationalPoly
    q_poly: RationalPoly
    w: Fraction
    lam: Fraction


def sturm_liouville_data(n: int, j: int) -> SturmLiouvilleData:
    _check_ij(n, j, j)
    p = RationalPoly([0, 1]) * RationalPoly([1, -1]) ** 2  # x (1 - x)^2
    q = RationalPoly([1, -1]) * (n * (n + 2))
    lam = Fraction((n - j + 1) * (j - n))
    return SturmLiouvilleData(n, j, p, q, Fraction(1), lam)


def sturm_residual(n: int, j: int, lam=None) -> RationalPoly:
    """``d/dx[p phi'] + q phi + lambda w phi`` for the radical-free ``phi_{j,n}``.

    Identically zero for the true eigenvalue ``(n-j+1)(j-n)``; pass ``lam``
    to test other values.
    """
    _check_ij(n, j, j)
    if n > EXACT_MAX_DEGREE:
        raise CapabilityError(f"exact Sturm-Liouville check limited to n <= {EXACT_MAX_DEGREE}, got {n}")
    sl = sturm_liouville_data(n, j)
    lam = sl.lam if lam is None else Fraction(lam)
    phi = onb_poly(n, j)
    return (sl.p_poly * phi.derivative()).derivative() + sl.q_poly * phi + phi * (lam * sl.w)

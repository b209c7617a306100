import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthobern.approx import (
    BasisKind,
    ControlGrid,
    ControlVector,
    SampleGrid,
    back_substitute_curve,
    basis_matrix,
    bezier_curve_recover,
    bezier_surface_recover,
    degree_sweep,
    fit_curve,
    fit_curve_onb,
    fit_sampled_curve,
    fit_sampled_surface,
    fit_surface,
    fit_surface_onb,
    mse_curve,
    mse_surface,
    phi_bern_matrix,
    reconstruct_curve,
    reconstruct_surface,
    reconstruct_surface_grid,
)
from orthobern.basis import BasisSpec, Interval, bernstein_eval, bernstein_eval_all, onb_eval, onb_eval_combo
from orthobern.errors import ConfigError, DomainError, EvaluationError
from orthobern.exact import bernstein_poly, onb_poly
from orthobern.quadrature import QuadratureRule, basis_rule
from orthobern.testfns import LissajousParams, SincParams, lissajous, sinc_surface

UNIT4 = BasisSpec(4)


def bezier(Q, spec):
    return lambda x: bernstein_eval_all(spec, x) @ Q


def bezier2(Q, xs, ys):
    return lambda x, y: np.sum((bernstein_eval_all(xs, x) @ Q) * bernstein_eval_all(ys, y), axis=-1)


# -------------------------------------------------------------- containers


def test_control_shapes_checked():
    with pytest.raises(ConfigError):
        ControlVector("ortho", UNIT4, np.zeros(4))
    with pytest.raises(ConfigError):
        ControlGrid("bernstein", UNIT4, BasisSpec(2), np.zeros((5, 2)))
    with pytest.raises(ValueError):
        ControlVector("chebyshev", UNIT4, np.zeros(5))
    cv = ControlVector("ortho", UNIT4, np.zeros(5))
    assert cv.kind is BasisKind.ORTHO
    with pytest.raises(ValueError):
        cv.values[0] = 1.0


def test_sample_grid():
    g = SampleGrid.curve(Interval(-1, 1), 5)
    (t,) = g.axes()
    assert t.tolist() == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert g.as_dict() == {"N": 5}
    s = SampleGrid.surface(Interval(0, 1), Interval(2, 5), 3, 4)
    assert s.as_dict() == {"N": 3, "M": 4}
    with pytest.raises(ConfigError):
        SampleGrid.curve(Interval(0, 1), 1)


def test_sample_grid_uniform_spacing():
    (t,) = SampleGrid.curve(Interval(-math.pi, math.pi), 1001).axes()
    assert t[0] == -math.pi and t[-1] == math.pi
    assert np.ptp(np.diff(t)) < 1e-14


# -------------------------------------------------------------- orthonormal fits


def test_fit_picks_out_basis_member():
    spec = BasisSpec(6)
    cv = fit_curve_onb(lambda x: onb_eval(spec, 2, x), spec, basis_rule(6))
    np.testing.assert_allclose(cv.values, np.eye(7)[2], atol=1e-10)


@pytest.mark.parametrize("n", [0, 3, 11, 20])
def test_fit_constant_reproduces_one(n):
    spec = BasisSpec(n)
    cv = fit_curve_onb(lambda x: 1.0, spec)
    x = np.linspace(0, 1, 301)
    assert np.abs(reconstruct_curve(cv, x) - 1).max() < 1e-11


def test_quartic_reproduced_exactly():
    spec = BasisSpec(4, Interval(-1, 2))
    f = lambda x: 3 * x**4 - x**3 + 0.5 * x - 2  # noqa: E731
    cv = fit_curve_onb(f, spec)
    for N in (2, 17, 1001):
        assert mse_curve(f, None, cv, None, SampleGrid.curve(spec.interval, N)) < 1e-20


def test_fit_surface_picks_out_product():
    spec = UNIT4
    f = lambda x, y: onb_eval(spec, 1, x) * onb_eval(spec, 2, y)  # noqa: E731
    cg = fit_surface_onb(f, spec, spec, basis_rule(4))
    expected = np.zeros((5, 5))
    expected[1, 2] = 1
    np.testing.assert_allclose(cg.values, expected, atol=1e-10)


def test_fit_surface_separable():
    xs, ys = BasisSpec(5, Interval(-1, 1)), BasisSpec(3, Interval(0, 2))
    g, h = np.cos, (lambda y: np.exp(-y) * y)
    cg = fit_surface_onb(lambda x, y: g(x) * h(y), xs, ys)
    outer = np.outer(fit_curve_onb(g, xs).values, fit_curve_onb(h, ys).values)
    np.testing.assert_allclose(cg.values, outer, atol=1e-11)


def test_fit_propagates_evaluation_error():
    with pytest.raises(EvaluationError) as info:
        fit_curve_onb(lambda x: np.where(x > 0.9, np.inf, x), UNIT4)
    assert info.value.abscissa > 0.9


@settings(max_examples=25)
@given(n=st.integers(0, 10), seed=st.integers(0, 2**31))
def test_projection_idempotent(n, seed):
    rng = np.random.default_rng(seed)
    spec = BasisSpec(n, Interval(-2, 1.5))
    first = fit_curve_onb(lambda x: np.sin(3 * x) + rng.uniform(-1, 1) * x, spec)
    second = fit_curve_onb(first, spec, basis_rule(n))
    np.testing.assert_allclose(second.values, first.values, atol=1e-11)


# -------------------------------------------------------------- Bézier recovery


def test_phi_bern_matrix_upper_triangular():
    m = phi_bern_matrix(BasisSpec(9, Interval(-3, 4)))
    assert np.all(np.tril(m, -1) == 0)
    assert np.all(np.diag(m) != 0)


@pytest.mark.parametrize("n", [1, 5, 12])
def test_recover_last_bernstein(n):
    spec = BasisSpec(n)
    cv = bezier_curve_recover(lambda x: bernstein_eval(spec, n, x), spec, basis_rule(n))
    np.testing.assert_allclose(cv.values, np.eye(n + 1)[n], atol=1e-10)
    assert cv.kind is BasisKind.BERNSTEIN


def test_curve_round_trip(rng):
    spec = BasisSpec(8, Interval(-1.5, 2.0))
    for _ in range(10):
        Q = rng.uniform(-1, 1, 9)
        cv = bezier_curve_recover(bezier(Q, spec), spec)
        assert np.abs(cv.values - Q).max() < 1e-9


def test_surface_round_trip(rng):
    xs, ys = BasisSpec(4, Interval(0, 2)), BasisSpec(4, Interval(-1, 1))
    for _ in range(3):
        Q = rng.uniform(-1, 1, (5, 5))
        cg = bezier_surface_recover(bezier2(Q, xs, ys), xs, ys)
        assert np.abs(cg.values - Q).max() < 1e-9


def test_surface_round_trip_rectangular(rng):
    xs, ys = BasisSpec(3), BasisSpec(6, Interval(2, 3))
    Q = rng.uniform(-1, 1, (4, 7))
    cg = bezier_surface_recover(bezier2(Q, xs, ys), xs, ys)
    assert np.abs(cg.values - Q).max() < 1e-9


def test_surface_corner():
    xs, ys = BasisSpec(3), BasisSpec(5)
    cg = bezier_surface_recover(lambda x, y: bernstein_eval(xs, 3, x) * bernstein_eval(ys, 5, y), xs, ys)
    expected = np.zeros((4, 6))
    expected[3, 5] = 1
    np.testing.assert_allclose(cg.values, expected, atol=1e-10)


def test_back_substitution_solves_triangular_system(rng):
    spec = BasisSpec(7, Interval(1, 4))
    moments = rng.normal(size=8)
    P = back_substitute_curve(moments, spec)
    np.testing.assert_allclose(phi_bern_matrix(spec) @ P, moments, atol=1e-12)


def test_basis_equivalence():
    spec = BasisSpec(10, Interval(-1, 3))
    f = lambda x: np.exp(np.sin(2 * x))  # noqa: E731
    ortho = fit_curve_onb(f, spec)
    bern = bezier_curve_recover(f, spec)
    x = np.linspace(-1, 3, 501)
    assert np.abs(ortho(x) - bern(x)).max() < 1e-11


def test_basis_equivalence_surface():
    xs, ys = BasisSpec(6, Interval(-2, 2)), BasisSpec(5, Interval(0, 1))
    f = lambda x, y: np.cos(x * y) + y**2  # noqa: E731
    a = fit_surface_onb(f, xs, ys)
    b = bezier_surface_recover(f, xs, ys)
    gx, gy = np.linspace(-2, 2, 41), np.linspace(0, 1, 37)
    assert np.abs(reconstruct_surface_grid(a, gx, gy) - reconstruct_surface_grid(b, gx, gy)).max() < 1e-11


# -------------------------------------------------------------- reconstruction and error


def test_reconstruct_examples():
    spec = BasisSpec(6, Interval(-1, 1))
    x = np.linspace(-1, 1, 11)
    assert np.all(reconstruct_curve(ControlVector("ortho", spec, np.zeros(7)), x) == 0)
    flat = ControlVector("bernstein", spec, np.full(7, 2.5))
    assert np.abs(reconstruct_curve(flat, x) - 2.5).max() < 1e-14
    unit = ControlVector("ortho", spec, np.eye(7)[4])
    assert np.array_equal(reconstruct_curve(unit, x), onb_eval(spec, 4, x))
    with pytest.raises(DomainError):
        reconstruct_curve(unit, 1.5)


def test_reconstruct_surface_forms_agree(rng):
    xs, ys = BasisSpec(3, Interval(0, 2)), BasisSpec(4)
    cg = ControlGrid("ortho", xs, ys, rng.normal(size=(4, 5)))
    gx, gy = np.linspace(0, 2, 6), np.linspace(0, 1, 7)
    grid = reconstruct_surface_grid(cg, gx, gy)
    pointwise = reconstruct_surface(cg, gx[:, None], gy[None, :])
    np.testing.assert_allclose(pointwise, grid, atol=1e-13)
    assert reconstruct_surface(cg, gx[3], gy[3]) == pytest.approx(grid[3, 3], abs=1e-13)
    flat = ControlGrid("bernstein", xs, ys, np.full((4, 5), -1.25))
    assert np.abs(flat(gx[:, None], gy[None, :]) + 1.25).max() < 1e-14


def test_mse_examples():
    grid = SampleGrid.curve(Interval(0, 2), 101)
    assert mse_curve(np.sin, np.cos, np.sin, np.cos, grid) == 0
    assert mse_curve(np.sin, np.cos, np.sin, lambda t: np.cos(t) + 0.3, grid) == pytest.approx(0.09, rel=1e-12)
    with pytest.raises(ConfigError):
        mse_curve(np.sin, np.cos, np.sin, None, grid)
    sgrid = SampleGrid.surface(Interval(0, 1), Interval(0, 1), 11)
    f = lambda x, y: x * y  # noqa: E731
    assert mse_surface(f, f, sgrid) == 0
    assert mse_surface(f, lambda x, y: x * y - 0.2, sgrid) == pytest.approx(0.04, rel=1e-12)


# -------------------------------------------------------------- reports and sweeps


def test_fit_curve_parametric_report():
    params = LissajousParams()
    spec = BasisSpec(6, params.t_interval)
    rep = fit_curve(lambda t: lissajous(params, t), spec, "bernstein", samples=201)
    assert set(rep.controls) == {"x", "y"}
    d = json.loads(rep.to_json())
    assert list(d) == ["basis", "degrees", "intervals", "coefficients", "error", "grid", "quadrature"]
    assert d["basis"] == "bernstein" and d["degrees"] == {"n": 6} and d["grid"] == {"N": 201}
    assert len(d["coefficients"]["x"]) == len(d["coefficients"]["y"]) == 7
    assert d["quadrature"] == {"panels": 64, "nodes": 16}
    assert rep.to_json() == rep.to_json()


def test_fit_curve_error_matches_mse():
    spec = BasisSpec(5, Interval(0, 3))
    rep = fit_curve(np.exp, spec, samples=301)
    cv = rep.controls["f"]
    assert rep.error == pytest.approx(mse_curve(np.exp, None, cv, None, SampleGrid.curve(spec.interval, 301)))
    assert rep.coefficients() == cv.values.tolist()


def test_fit_surface_report():
    xs, ys = BasisSpec(2, Interval(-1, 1)), BasisSpec(3, Interval(0, 1))
    rep = fit_surface(lambda x, y: x**2 * y**3 - y, xs, ys, samples=(21, 11))
    assert rep.error < 1e-25
    d = rep.to_dict()
    assert d["degrees"] == {"n": 2, "m": 3} and d["grid"] == {"N": 21, "M": 11}
    assert np.array(d["coefficients"]).shape == (3, 4)


def test_degree_sweep_quadratic():
    reps = degree_sweep(lambda x: 2 * x**2 - x, range(5), Interval(-1, 2))
    errs = [r.error for r in reps]
    assert [r.n for r in reps] == [0, 1, 2, 3, 4]
    assert errs[0] > errs[1] > 1e-3
    assert all(e < 1e-20 for e in errs[2:])


def test_degree_sweep_rejects_empty():
    with pytest.raises(ConfigError):
        degree_sweep(np.sin, [], Interval(0, 1))


def test_lissajous_sweep_keeps_improving():
    """With correctly rounded evaluation the error keeps falling past n = 20."""
    params = LissajousParams()
    reps = degree_sweep(lambda t: lissajous(params, t), range(16, 25), params.t_interval)
    errs = np.array([r.error for r in reps])
    assert np.all(np.diff(errs) < 0)
    assert errs[4] < 1e-7


def test_lissajous_sweep_with_floating_combination_bottoms_out_at_20():
    """Summing the signed combination in floating point puts the sweep minimum at n = 20."""
    params = LissajousParams()
    iv = params.t_interval
    rule = QuadratureRule()
    x, w = rule.on(iv)
    t = iv.linspace(1001)
    fx, fy = lissajous(params, x)
    gx_true, gy_true = lissajous(params, t)
    errs = {}
    for n in range(16, 25):
        spec = BasisSpec(n, iv)
        phi_q = np.stack([onb_eval_combo(spec, j, x) for j in range(n + 1)], -1)
        phi_t = np.stack([onb_eval_combo(spec, j, t) for j in range(n + 1)], -1)
        px = phi_q.T @ (w * fx) / iv.length
        py = phi_q.T @ (w * fy) / iv.length
        errs[n] = np.mean((phi_t @ px - gx_true) ** 2 + (phi_t @ py - gy_true) ** 2)
    assert min(errs, key=errs.get) == 20
    assert errs[24] > 1e3 * errs[20]


def test_sinc_sweep_minimum_location():
    params = SincParams()
    reps = degree_sweep(lambda x, y: sinc_surface(params, x, y), range(10, 15), params.domain, params.domain)
    errs = [r.error for r in reps]
    assert reps[int(np.argmin(errs))].degrees == {"n": 14, "m": 14}


# -------------------------------------------------------------- sampled data


def test_fit_sampled_curve_second_order():
    spec = BasisSpec(3, Interval(0, 2))
    f = lambda t: np.exp(t) - t  # noqa: E731
    exact = {kind: fit_curve(f, spec, kind).coefficients() for kind in ("ortho", "bernstein")}
    for kind in ("ortho", "bernstein"):
        gaps = []
        for N in (401, 801, 1601):
            t = np.linspace(0, 2, N)
            rep = fit_sampled_curve(t, {"f": f(t)}, spec, kind)
            assert rep.quadrature == {"rule": "trapezoid", "points": N}
            gaps.append(np.abs(np.subtract(rep.coefficients(), exact[kind])).max())
        # trapezoid weights: halving the spacing quarters the coefficient error
        assert 3.5 < gaps[0] / gaps[1] < 4.5 and 3.5 < gaps[1] / gaps[2] < 4.5


def test_fit_sampled_curve_columns_fit_independently():
    spec = BasisSpec(3, Interval(0, 2))
    t = np.linspace(0, 2, 11)
    x, y = np.cos(t), t**2
    both = fit_sampled_curve(t, {"x": x, "y": y}, spec, "bernstein")
    only_x = fit_sampled_curve(t, {"x": x}, spec, "bernstein")
    only_y = fit_sampled_curve(t, {"y": y}, spec, "bernstein")
    assert both.controls["x"].values.tolist() == only_x.controls["x"].values.tolist()
    assert both.error == pytest.approx(only_x.error + only_y.error, rel=1e-12)
    assert both.grid == {"N": 11}


def test_fit_sampled_surface_second_order():
    xs, ys = BasisSpec(4, Interval(-1, 1)), BasisSpec(4, Interval(0, 2))
    f = lambda x, y: np.sin(x + y)  # noqa: E731
    analytic = bezier_surface_recover(f, xs, ys).values
    gaps = []
    for N in (201, 401, 801):
        gx, gy = np.linspace(-1, 1, N), np.linspace(0, 2, N)
        rep = fit_sampled_surface(gx, gy, f(gx[:, None], gy[None, :]), xs, ys, "bernstein")
        gaps.append(np.abs(rep.controls["f"].values - analytic).max())
    assert 3.5 < gaps[0] / gaps[1] < 4.5 and 3.5 < gaps[1] / gaps[2] < 4.5


def test_basis_matrix_kinds():
    spec = BasisSpec(5)
    x = np.array([0.0, 0.4, 1.0])
    assert np.array_equal(basis_matrix("bernstein", spec, x), bernstein_eval_all(spec, x))
    assert basis_matrix(BasisKind.ORTHO, spec, x).shape == (3, 6)


def test_exact_polynomials_agree_with_float_fit():
    # control points of B_{2,4} + phi_{1,4} in each basis, checked against exact polynomials
    spec = UNIT4
    target = bernstein_poly(2, 4) + onb_poly(4, 1) * 3
    f = lambda x: np.polyval([float(c) for c in reversed(target.coeffs)], x)  # noqa: E731
    ortho = fit_curve_onb(f, spec, basis_rule(4))
    x = np.linspace(0, 1, 9)
    np.testing.assert_allclose(ortho(x), f(x), atol=1e-12)


def test_sampled_fit_rejects_non_finite_data():
    t = np.linspace(0, 1, 5)
    with pytest.raises(EvaluationError) as info:
        fit_sampled_curve(t, {"f": np.array([0, 1, np.nan, 1, 0.0])}, BasisSpec(2))
    assert info.value.abscissa == 0.5
    F = np.zeros((3, 4))
    F[2, 1] = np.inf
    with pytest.raises(EvaluationError) as info:
        fit_sampled_surface(np.linspace(0, 1, 3), np.linspace(0, 3, 4), F, BasisSpec(1), BasisSpec(1, Interval(0, 3)))
    assert info.value.abscissa == (1.0, 1.0)


def test_sinc_origin_sample_dominates_coarse_grid_error():
    """The regularized sinc is 0 at the origin while the fit is near 1 there.

    That one sample adds about 0.95 / N^2 to the grid error, which is why the
    surface default grid is 1001 points per axis.
    """
    p = SincParams()
    spec = BasisSpec(12, p.domain)
    cg = fit_surface_onb(lambda x, y: sinc_surface(p, x, y), spec, spec)
    rest = {}
    for N in (201, 1001):
        xs = p.domain.linspace(N)
        sq = (sinc_surface(p, xs[:, None], xs[None, :]) - reconstruct_surface_grid(cg, xs, xs)) ** 2
        c = N // 2
        assert sq[c, c] > 0.9
        rest[N] = np.delete(sq.ravel(), c * N + c).mean()
        if N == 201:
            assert sq.mean() > 5e-5
    # away from the origin the two grids agree to within 10%
    assert rest[201] == pytest.approx(rest[1001], rel=0.1)

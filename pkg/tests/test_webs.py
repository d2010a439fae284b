import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from statfrob.webs import (
    LeafExitsDomain,
    SimplexPoint,
    WebError,
    WebFunction,
    barycentric_fields,
    builtin_web,
    ceva_product,
    cevian_config,
    generalized_ceva_check,
    hexagon_closure,
    load_web,
    multinomial_fisher,
    project_edge_points,
    reference_simplex,
    sphere_embedding,
    to_cartesian,
    web_curvature,
)


def symbolic_curvature(expr, at):
    x, y = sp.symbols("x y")
    F = sp.sympify(expr)
    Fx, Fy = sp.diff(F, x), sp.diff(F, y)
    K = -sp.diff(sp.log(Fx / Fy), x, y) / (Fx * Fy)
    return float(K.subs({x: at[0], y: at[1]}))


def interior_points(count, dim=2, seed=0):
    return np.random.default_rng(seed).dirichlet(np.ones(dim + 1), size=count)


# barycentric fields -------------------------------------------------------


def test_fields_at_barycenter():
    f = barycentric_fields([1 / 3, 1 / 3, 1 / 3])
    p = np.full(3, 1 / 3)
    assert f.x == pytest.approx((np.eye(3) - p) / 3, abs=1e-16)
    assert np.max(np.abs(f.x_sum)) < 1e-15


def test_conditional_foot():
    f = barycentric_fields([0.2, 0.3, 0.5])
    assert f.q[2] == pytest.approx([0.4, 0.6, 0.0], abs=1e-15)


def test_boundary_point_rejected():
    with pytest.raises(WebError, match="conditional undefined on boundary"):
        barycentric_fields([1.0, 0.0, 0.0])


def test_simplex_point_validation():
    with pytest.raises(WebError):
        SimplexPoint([0.5, 0.6])
    assert not SimplexPoint([0.0, 1.0]).interior


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 1.0), min_size=3, max_size=6))
def test_field_invariants(weights):
    p = np.array(weights) / np.sum(weights)
    p[-1] = 1 - p[:-1].sum()
    f = barycentric_fields(p)
    assert np.max(np.abs(f.x_sum)) < 1e-13
    for k in range(p.size):
        assert abs(f.q[k, k]) < 1e-13
        assert abs(f.q[k].sum() - 1) < 1e-13
        assert f.z[k] == pytest.approx(f.y[k] / (1 - p[k]), abs=1e-12)
        # p = p_k e_k + (1 - p_k) q_k
        assert p == pytest.approx(p[k] * np.eye(p.size)[k] + (1 - p[k]) * f.q[k], abs=1e-13)


# Ceva ----------------------------------------------------------------------


def test_reference_simplex_is_regular():
    for n in (2, 3, 4):
        V = reference_simplex(n)
        d = [np.linalg.norm(V[i] - V[j]) for i in range(n + 1) for j in range(i + 1, n + 1)]
        assert np.allclose(d, 1.0, atol=1e-14)


def test_medians():
    T = reference_simplex(2)
    mids = [(T[1] + T[2]) / 2, (T[2] + T[0]) / 2, (T[0] + T[1]) / 2]
    assert ceva_product(T, mids) == pytest.approx(-1.0, abs=1e-15)


def test_feet_match_barycentric_formula():
    T = reference_simplex(2)
    for b in interior_points(20):
        feet = cevian_config(T, point=to_cartesian(T, b)).feet
        for k in range(3):
            expected = b.copy()
            expected[k] = 0
            assert feet[k] == pytest.approx(to_cartesian(T, expected / expected.sum()), abs=1e-12)


def test_concurrent_cevians_give_minus_one():
    T = reference_simplex(2)
    for b in interior_points(100, seed=1):
        cfg = cevian_config(T, point=to_cartesian(T, b))
        assert abs(ceva_product(T, cfg.feet) + 1) < 1e-10


def test_parallel_cevians_give_minus_one():
    T = reference_simplex(2)
    for angle in np.linspace(0.1, 3.0, 15):
        d = [math.cos(angle), math.sin(angle)]
        try:
            cfg = cevian_config(T, direction=d)
            prod = ceva_product(T, cfg.feet)
        except WebError:
            continue  # direction parallel to a side
        assert abs(prod + 1) < 1e-10


def test_perturbed_feet_fail():
    T = reference_simplex(2)
    cfg = cevian_config(T, point=to_cartesian(T, [0.2, 0.3, 0.5]))
    feet = cfg.feet.copy()
    feet[1] = feet[1] + 0.01 * (T[0] - T[2])
    assert abs(ceva_product(T, feet) + 1) > 1e-3


def test_degenerate_and_off_side_feet():
    T = reference_simplex(2)
    with pytest.raises(WebError, match="degenerate ratio"):
        ceva_product(T, [T[1], (T[2] + T[0]) / 2, (T[0] + T[1]) / 2])
    with pytest.raises(WebError, match="off its side"):
        ceva_product(T, [(T[1] + T[2]) / 2 + [0.1, 0.0], (T[2] + T[0]) / 2, (T[0] + T[1]) / 2])


def test_generalized_ceva_midpoints():
    S = reference_simplex(3)
    mids = {(i, j): (S[i] + S[j]) / 2 for i in range(4) for j in range(i + 1, 4)}
    rep = generalized_ceva_check(S, mids)
    assert all(v == pytest.approx(1.0, abs=1e-15) for v in rep["products"].values())


def test_projected_edge_points_match_weights():
    S = reference_simplex(3)
    w = np.array([0.1, 0.2, 0.3, 0.4])
    edges = project_edge_points(S, to_cartesian(S, w))
    for (i, j), B in edges.items():
        assert B == pytest.approx((w[i] * S[i] + w[j] * S[j]) / (w[i] + w[j]), abs=1e-12)


def test_generalized_ceva_projection_and_perturbation():
    for n in (3, 4):
        S = reference_simplex(n)
        for w in interior_points(20, dim=n, seed=n):
            edges = project_edge_points(S, to_cartesian(S, w))
            assert generalized_ceva_check(S, edges)["max_deviation"] < 1e-10
        edges[(0, 1)] = edges[(0, 1)] + 0.01 * (S[1] - S[0])
        assert generalized_ceva_check(S, edges)["max_deviation"] > 1e-3


def test_generalized_ceva_degenerate_edge_point():
    S = reference_simplex(3)
    mids = {(i, j): (S[i] + S[j]) / 2 for i in range(4) for j in range(i + 1, 4)}
    mids[(0, 2)] = S[0]
    with pytest.raises(WebError, match="degenerate edge point"):
        generalized_ceva_check(S, mids)


# hexagons and curvature ---------------------------------------------------


@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
def test_sum_web_closes(eps):
    assert hexagon_closure(builtin_web("sum"), (0.5, 0.5), eps).defect <= 1e-12


def test_product_web_closes():
    assert hexagon_closure(builtin_web("product"), (1, 1), 0.05).defect < 1e-10


def test_hexagon_points_follow_leaves():
    web = builtin_web("cubic")
    entry = hexagon_closure(web, (1, 1), 0.05)
    P = entry.points
    F = web.F
    assert P[0][1] == P[3][1] == P[6][1] == 1
    assert P[1][0] == P[4][0] == 1
    assert F(*P[1]) == pytest.approx(F(*P[0]), abs=1e-12)
    assert F(*P[2]) == pytest.approx(F(1, 1), abs=1e-12)
    assert F(*P[4]) == pytest.approx(F(*P[3]), abs=1e-12)
    assert F(*P[5]) == pytest.approx(F(1, 1), abs=1e-12)


def test_cubic_web_scales_like_eps_cubed():
    web = builtin_web("cubic")
    r1 = hexagon_closure(web, (1, 1), 0.02).scaled_defect
    r2 = hexagon_closure(web, (1, 1), 0.01).scaled_defect
    assert abs(r1 - r2) / max(r1, r2) < 0.15
    assert r1 > 1e-4 and r2 > 1e-4


def test_defect_limit_grows_with_curvature():
    # F = x + y + c (x-1)(y-1)^2 has unit partials at (1, 1) and K = 2c there
    limits, curvatures = [], []
    for c in (0.1, 0.2, 0.4, 0.8):
        web = WebFunction.from_expression(f"x + y + {c}*(x - 1)*(y - 1)**2", (0.5, 1.5, 0.5, 1.5))
        limits.append(hexagon_closure(web, (1, 1), 0.005).scaled_defect)
        curvatures.append(abs(web_curvature(web, (1, 1))))
    assert curvatures == pytest.approx([0.2, 0.4, 0.8, 1.6], abs=1e-6)
    assert np.all(np.diff(limits) > 0)
    # with unit partials at the center the limit is the curvature itself
    assert limits == pytest.approx(curvatures, rel=1e-3)


def test_leaf_exits_domain():
    web = WebFunction.from_expression("x + y", (0, 1, 0, 1))
    with pytest.raises(LeafExitsDomain, match="leaf exits domain"):
        hexagon_closure(web, (0.5, 0.95), 0.1)


def test_vanishing_partial_rejected():
    with pytest.raises(WebError, match="vanishing partial"):
        WebFunction.from_expression("x*y", (-1, 1, 0.5, 2))


def test_curvature_values():
    assert web_curvature(builtin_web("sum"), (0.3, 0.7)) == 0
    assert abs(web_curvature(builtin_web("product"), (1, 1))) < 1e-8
    K = web_curvature(builtin_web("cubic"), (1, 1))
    assert abs(K) > 1e-3
    assert K == pytest.approx(symbolic_curvature("x + y + x*y**2", (1, 1)), abs=1e-6)
    assert K == pytest.approx(1 / 27, abs=1e-6)


def test_curvature_by_finite_differences_matches():
    exact = builtin_web("cubic")
    fd = WebFunction(exact.F, exact.box)
    assert not fd.has_exact_partials
    for at in [(1, 1), (0.8, 1.4), (1.5, 0.7)]:
        assert web_curvature(fd, at) == pytest.approx(symbolic_curvature("x + y + x*y**2", at), abs=1e-5)


def test_defect_tracks_curvature():
    # small-eps hexagon defect of this web behaves like 4 K eps^3
    web = builtin_web("cubic")
    K = web_curvature(web, (1, 1))
    assert hexagon_closure(web, (1, 1), 0.002).scaled_defect == pytest.approx(4 * K, rel=0.05)


def test_load_web_file(tmp_path):
    path = tmp_path / "w.json"
    path.write_text('{"name": "exp", "expr": "exp(x) + y", "box": [0, 1, 0, 1]}')
    web = load_web(path)
    assert web.name == "exp" and web.has_exact_partials
    assert hexagon_closure(web, (0.5, 0.5), 0.05).defect < 1e-10


# sphere --------------------------------------------------------------------


def test_sphere_values():
    emb = sphere_embedding([0.25, 0.25, 0.5])
    assert emb.eta == pytest.approx([1, 1, math.sqrt(2)], abs=1e-15)
    assert emb.norm == pytest.approx(4, abs=1e-15)
    emb = sphere_embedding([1 / 3, 1 / 3, 1 / 3])
    assert emb.norm == pytest.approx(4, abs=1e-13) and emb.metric_residual < 1e-8


def test_sphere_pullback_by_finite_differences():
    p = np.array([0.2, 0.3, 0.5])
    eta = lambda a: 2 * np.sqrt(np.array([a[0], a[1], 1 - a[0] - a[1]]))
    h = 1e-6
    J = np.column_stack([(eta(p[:2] + e) - eta(p[:2] - e)) / (2 * h) for e in np.eye(2) * h])
    assert J.T @ J == pytest.approx(multinomial_fisher(p), abs=1e-6)


def test_sphere_on_seeded_points():
    for p in interior_points(100, seed=5):
        emb = sphere_embedding(p / p.sum())
        assert abs(emb.norm - 4) < 1e-13
        assert emb.metric_residual < 1e-8


def test_sphere_boundary_rejected():
    with pytest.raises(WebError):
        sphere_embedding([0.0, 0.5, 0.5])

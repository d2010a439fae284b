import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from statfrob.split_algebra import (
    BUILTIN_MAPS,
    E_MINUS,
    E_PLUS,
    UNIT,
    ZERO,
    AlgebraFunction,
    SplitNumber,
    builtin_algebra_web,
    cauchy_riemann_residual,
    multiply,
    split_hexagon_defect,
    structure_product,
    subweb_decompose,
)
from statfrob.webs import builtin_web, hexagon_closure, web_curvature

# integer coordinates keep every product exact in floating point
reals = st.integers(-1000, 1000).map(float)
numbers = st.builds(SplitNumber, reals, reals)


def test_idempotents():
    assert E_PLUS * E_MINUS == ZERO
    assert E_MINUS * E_PLUS == ZERO
    assert E_PLUS * E_PLUS == E_PLUS
    assert E_MINUS * E_MINUS == E_MINUS
    assert E_PLUS + E_MINUS == UNIT


def test_square_and_unit():
    u = SplitNumber(1.0, 2.0)
    assert u * u == SplitNumber(1.0, 4.0)
    assert multiply(UNIT, u) == u


@settings(max_examples=100, deadline=None)
@given(numbers, numbers, numbers)
def test_algebra_laws(u, v, w):
    assert u * v == v * u
    assert (u * v) * w == u * (v * w)
    assert UNIT * u == u
    assert structure_product(u, v) == u * v


def test_cauchy_riemann_examples():
    assert cauchy_riemann_residual(BUILTIN_MAPS["exp"], (0.0, 0.0)) < 1e-8
    assert cauchy_riemann_residual(BUILTIN_MAPS["identity"], (0.3, -0.4)) < 1e-12
    # swap has Jacobian [[0, 1], [1, 0]]; the (i, j, k) = (+, -, -) entry is 1
    assert cauchy_riemann_residual(BUILTIN_MAPS["swap"], (1.0, 2.0)) > 0.5


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_lifted_functions_are_analytic(x, y):
    lifted = lambda v: np.array([np.sin(v[0]) + v[0] ** 3, np.exp(0.5 * v[1])])
    assert cauchy_riemann_residual(lifted, (x, y), step=1e-4) < 1e-8


def test_mixing_map_is_not_analytic():
    f = lambda v: np.array([v[0] + 0.3 * v[1], v[1]])
    assert cauchy_riemann_residual(f, (0.5, 0.5)) == pytest.approx(0.3, abs=1e-9)


def test_algebra_function_evaluates_componentwise():
    F = builtin_algebra_web("product")
    z1, z2 = SplitNumber(2.0, 3.0), SplitNumber(5.0, 7.0)
    assert F(z1, z2) == SplitNumber(10.0, 21.0)
    assert F(z1, z2) == z1 * z2


def test_subweb_sum():
    plus, minus = subweb_decompose(builtin_algebra_web("sum"))
    assert plus(1.2, 0.7) == minus(1.2, 0.7) == pytest.approx(1.9)
    assert web_curvature(plus, (1, 1)) == 0 and web_curvature(minus, (1, 1)) == 0


def test_subweb_product_matches_webs_oracle():
    plus, minus = subweb_decompose(builtin_algebra_web("product"))
    ref = web_curvature(builtin_web("product"), (1.2, 0.8))
    for w in (plus, minus):
        assert abs(web_curvature(w, (1.2, 0.8)) - ref) < 1e-6
        assert abs(web_curvature(w, (1.2, 0.8))) < 1e-8


def test_subweb_mixed():
    plus, minus = subweb_decompose(builtin_algebra_web("mixed"))
    ref = builtin_web("cubic")
    for at in [(1, 1), (0.9, 1.3)]:
        assert abs(web_curvature(plus, at) - web_curvature(ref, at)) < 1e-6
        assert web_curvature(minus, at) == 0
    assert abs(web_curvature(plus, (1, 1))) > 1e-3


def test_split_hexagon_reduces_to_components():
    F = builtin_algebra_web("mixed")
    z = (SplitNumber(1.0, 1.0), SplitNumber(1.0, 1.0))
    rep = split_hexagon_defect(F, z, 0.01)
    plus, minus = subweb_decompose(F)
    d_plus = hexagon_closure(plus, (1, 1), 0.01).defect
    d_minus = hexagon_closure(minus, (1, 1), 0.01).defect
    assert rep["defect"] <= max(d_plus, d_minus) + 1e-12
    assert rep["minus"] <= 1e-12 and rep["plus"] > 0


def test_custom_algebra_function():
    F = AlgebraFunction.from_expressions("x + y", "x*y", name="half")
    plus, minus = subweb_decompose(F)
    assert plus.has_exact_partials and minus.has_exact_partials
    assert split_hexagon_defect(F, (SplitNumber(1, 1), SplitNumber(1, 1)), 0.05)["defect"] < 1e-10

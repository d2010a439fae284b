"""The rank-2 split algebra spanned by orthogonal idempotents ``e+``, ``e-``.

Elements are stored by their idempotent coordinates, so multiplication is
componentwise and a 3-web over the algebra splits into two real planar
3-webs, one per idempotent.
"""

from dataclasses import dataclass

import numpy as np

from .webs import WebFunction, hexagon_closure

# STRUCTURE[h, j, k] = c^h_{jk} in the basis (e+, e-)
STRUCTURE = np.zeros((2, 2, 2))
STRUCTURE[0, 0, 0] = 1.0
STRUCTURE[1, 1, 1] = 1.0


@dataclass(frozen=True)
class SplitNumber:
    a_plus: float
    a_minus: float

    def __add__(self, other):
        other = _coerce(other)
        return SplitNumber(self.a_plus + other.a_plus, self.a_minus + other.a_minus)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return SplitNumber(self.a_plus - other.a_plus, self.a_minus - other.a_minus)

    def __neg__(self):
        return SplitNumber(-self.a_plus, -self.a_minus)

    def __mul__(self, other):
        return multiply(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k):
        return SplitNumber(self.a_plus**k, self.a_minus**k)

    def to_array(self):
        return np.array([self.a_plus, self.a_minus])


E_PLUS = SplitNumber(1.0, 0.0)
E_MINUS = SplitNumber(0.0, 1.0)
UNIT = SplitNumber(1.0, 1.0)
ZERO = SplitNumber(0.0, 0.0)


def _coerce(x):
    if isinstance(x, SplitNumber):
        return x
    return SplitNumber(float(x), float(x))


def multiply(u, v):
    return SplitNumber(u.a_plus * v.a_plus, u.a_minus * v.a_minus)


def structure_product(u, v, structure=STRUCTURE):
    """Product through the structure constants; agrees with ``multiply``."""
    w = np.einsum("hjk,j,k->h", structure, u.to_array(), v.to_array())
    return SplitNumber(*w)


def jacobian_fd(f, at, step=1e-4):
    at = np.asarray(at, dtype=float)
    J = np.empty((2, 2))
    for h in range(2):
        e = np.zeros(2)
        e[h] = step
        J[:, h] = (np.asarray(f(at + e)) - np.asarray(f(at - e))) / (2 * step)
    return J


def cauchy_riemann_residual(f, at, step=1e-4, structure=STRUCTURE):
    """Largest violation of ``sum_h J_ih c^h_jk = sum_h c^i_hk J_hj``.

    ``J_ih = d y_i / d x_h`` is taken by central differences. The identity
    says the differential commutes with multiplication by algebra elements;
    in the idempotent basis it forces a diagonal Jacobian.
    """
    J = jacobian_fd(f, at, step)
    lhs = np.einsum("ih,hjk->ijk", J, structure)
    rhs = np.einsum("ihk,hj->ijk", structure, J)
    return float(np.max(np.abs(lhs - rhs)))


BUILTIN_MAPS = {
    "exp": lambda v: np.array([np.exp(v[0]), np.exp(v[1])]),
    "identity": lambda v: np.array([v[0], v[1]]),
    "swap": lambda v: np.array([v[1], v[0]]),
}


@dataclass(frozen=True)
class AlgebraFunction:
    """Function of two algebra variables given by its idempotent components.

    ``plus(x1, x2)`` and ``minus(y1, y2)`` are the real functions such that
    ``F(x1 e+ + y1 e-, x2 e+ + y2 e-) = plus(x1, x2) e+ + minus(y1, y2) e-``.
    """

    plus: object
    minus: object
    plus_partials: tuple = None
    minus_partials: tuple = None
    name: str = "custom"

    def __call__(self, z1, z2):
        return SplitNumber(self.plus(z1.a_plus, z2.a_plus), self.minus(z1.a_minus, z2.a_minus))

    @classmethod
    def from_expressions(cls, plus_expr, minus_expr, name="custom"):
        import sympy as sp

        x, y = sp.symbols("x y")
        parts = []
        for expr in (plus_expr, minus_expr):
            e = sp.sympify(expr, locals={"x": x, "y": y})
            parts.append(
                (
                    sp.lambdify((x, y), e, "math"),
                    (sp.lambdify((x, y), sp.diff(e, x), "math"), sp.lambdify((x, y), sp.diff(e, y), "math")),
                )
            )
        return cls(plus=parts[0][0], minus=parts[1][0], plus_partials=parts[0][1],
                   minus_partials=parts[1][1], name=name)


BUILTIN_ALGEBRA_WEBS = {
    "sum": ("x + y", "x + y"),
    "product": ("x*y", "x*y"),
    "mixed": ("x + y + x*y**2", "x + y"),
}

DEFAULT_BOX = (0.5, 2.0, 0.5, 2.0)


def builtin_algebra_web(name):
    try:
        plus, minus = BUILTIN_ALGEBRA_WEBS[name]
    except KeyError:
        raise ValueError(f"unknown builtin algebra web {name!r}") from None
    return AlgebraFunction.from_expressions(plus, minus, name=name)


def subweb_decompose(F, boxes=(DEFAULT_BOX, DEFAULT_BOX)):
    """The two planar component webs of an algebra-valued web function."""
    plus_box, minus_box = boxes
    fxp, fyp = F.plus_partials or (None, None)
    fxm, fym = F.minus_partials or (None, None)
    plus = WebFunction(F.plus, plus_box, fx=fxp, fy=fyp, name=f"{F.name}+")
    minus = WebFunction(F.minus, minus_box, fx=fxm, fy=fym, name=f"{F.name}-")
    return plus, minus


def split_hexagon_defect(F, center, eps, boxes=(DEFAULT_BOX, DEFAULT_BOX)):
    """Hexagon defect of the split web, reduced to its two component webs.

    ``center`` holds two split numbers ``(z1, z2)``; the defect reported is
    the larger of the component defects.
    """
    z1, z2 = center
    plus, minus = subweb_decompose(F, boxes)
    d_plus = hexagon_closure(plus, (z1.a_plus, z2.a_plus), eps).defect
    d_minus = hexagon_closure(minus, (z1.a_minus, z2.a_minus), eps).defect
    return {"plus": d_plus, "minus": d_minus, "defect": max(d_plus, d_minus)}

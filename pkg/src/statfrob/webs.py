"""Webs on the probability simplex and in the plane.

Covers the barycentric vector fields of a simplex point, Cevian
configurations with their Ceva products, Thomsen hexagon closure for planar
3-webs ``{x = a}, {y = b}, {F(x, y) = c}``, the planar web curvature and the
square-root embedding of the simplex into the sphere of radius 2.
"""

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

SUM_TOL = 1e-12
ROOT_TOL = 1e-12
MAX_ROOT_ITER = 200


class WebError(ValueError):
    pass


class LeafExitsDomain(WebError):
    pass


# --------------------------------------------------------------------------
# simplex points and barycentric fields


@dataclass(frozen=True)
class SimplexPoint:
    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise WebError("a simplex point needs at least two coordinates")
        if not np.all(np.isfinite(p)):
            raise WebError("simplex coordinates must be finite")
        if abs(p.sum() - 1.0) > SUM_TOL:
            raise WebError(f"barycentric coordinates sum to {p.sum()!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def interior(self):
        return bool(np.all((self.p > 0) & (self.p < 1)))

    @property
    def dim(self):
        return self.p.size - 1


def _point(point):
    return point if isinstance(point, SimplexPoint) else SimplexPoint(point)


@dataclass(frozen=True)
class BarycentricFields:
    y: np.ndarray
    z: np.ndarray
    q: np.ndarray
    x: np.ndarray
    x_sum: np.ndarray


def barycentric_fields(point):
    """Vertex-pointing fields at an interior point, one row per vertex.

    ``y[k] = e_k - p``; ``q[k]`` is the conditional distribution given
    outcome ``k`` is excluded (the Cevian foot on face ``k``);
    ``z[k] = e_k - q[k] = y[k] / (1 - p_k)``; ``x[k] = p_k y[k]``.
    """
    point = _point(point)
    if not point.interior:
        raise WebError("conditional undefined on boundary")
    p = point.p
    E = np.eye(p.size)
    y = E - p
    q = (p[None, :] * (1 - E)) / (1 - p)[:, None]
    z = E - q
    x = p[:, None] * y
    return BarycentricFields(y=y, z=z, q=q, x=x, x_sum=x.sum(axis=0))


def reference_simplex(n):
    """Vertices (rows) of a regular n-simplex with unit edges in R^n."""
    E = np.eye(n + 1) / np.sqrt(2.0)
    centered = E - E.mean(axis=0)
    # orthonormal basis of the sum-zero hyperplane
    basis, _ = np.linalg.qr(np.eye(n + 1)[:, :n] - 1.0 / (n + 1))
    return centered @ basis


def to_cartesian(vertices, bary):
    return np.asarray(bary, dtype=float) @ np.asarray(vertices, dtype=float)


# --------------------------------------------------------------------------
# Ceva


def _line_intersection(p, d, a, b):
    """Intersection of the line ``p + s d`` with the line through ``a, b``."""
    M = np.column_stack([d, a - b])
    s, _ = np.linalg.lstsq(M, a - p, rcond=None)[0]
    return p + s * d


@dataclass(frozen=True)
class CevianConfig:
    vertices: np.ndarray
    feet: np.ndarray
    mode: str
    center: np.ndarray = field(default=None)


def cevian_config(triangle, point=None, direction=None):
    """Feet of the three Cevians through ``point`` or parallel to ``direction``.

    ``feet[k]`` lies on the side opposite vertex ``k``.
    """
    V = np.asarray(triangle, dtype=float)
    if (point is None) == (direction is None):
        raise WebError("give exactly one of point or direction")
    feet = []
    for k in range(3):
        a, b = V[(k + 1) % 3], V[(k + 2) % 3]
        d = (np.asarray(point, dtype=float) - V[k]) if direction is None else np.asarray(direction, dtype=float)
        feet.append(_line_intersection(V[k], d, a, b))
    mode = "concurrent" if direction is None else "parallel"
    center = None if point is None else np.asarray(point, dtype=float)
    return CevianConfig(vertices=V, feet=np.array(feet), mode=mode, center=center)


def signed_ratio(p, a, b, tol=1e-10):
    """Signed ratio ``pa / pb`` of collinear segments measured from ``p``."""
    p, a, b = (np.asarray(v, dtype=float) for v in (p, a, b))
    d = b - a
    length = np.linalg.norm(d)
    if length == 0:
        raise WebError("degenerate side")
    u = d / length
    pa, pb = a - p, b - p
    off = np.linalg.norm(pa - (pa @ u) * u)
    if off > tol * max(1.0, length):
        raise WebError(f"point is off its side by {off:.3g}")
    sa, sb = pa @ u, pb @ u
    if abs(sa) <= tol * length or abs(sb) <= tol * length:
        raise WebError("degenerate ratio")
    return sa / sb


def ceva_product(triangle, feet):
    """``(A'B / A'C) (B'C / B'A) (C'A / C'B)`` with signed ratios.

    Equals -1 exactly when the Cevians are concurrent or parallel.
    """
    A, B, C = np.asarray(triangle, dtype=float)
    Ap, Bp, Cp = np.asarray(feet, dtype=float)
    return float(signed_ratio(Ap, B, C) * signed_ratio(Bp, C, A) * signed_ratio(Cp, A, B))


def project_edge_points(simplex, point):
    """Edge points ``B_ij`` cut out by the hyperplanes through ``point`` and
    all vertices other than ``A_i, A_j``.
    """
    V = np.asarray(simplex, dtype=float)
    P = np.asarray(point, dtype=float)
    k = len(V)
    out = {}
    for i, j in combinations(range(k), 2):
        others = [V[l] - P for l in range(k) if l not in (i, j)]
        # A_i + t (A_j - A_i) = P + sum_l s_l (A_l - P)
        M = np.column_stack([V[j] - V[i]] + [-o for o in others])
        sol = np.linalg.lstsq(M, P - V[i], rcond=None)[0]
        out[(i, j)] = V[i] + sol[0] * (V[j] - V[i])
    return out


def edge_ratio(a, b, point, tol=1e-10):
    """Unsigned ``|a point| / |point b|`` for a point strictly inside ``[a, b]``."""
    a, b, point = (np.asarray(v, dtype=float) for v in (a, b, point))
    d = b - a
    L2 = d @ d
    t = ((point - a) @ d) / L2
    off = np.linalg.norm(point - (a + t * d))
    if off > tol * max(1.0, np.sqrt(L2)) or not (tol < t < 1 - tol):
        raise WebError("degenerate edge point")
    return t / (1 - t)


def generalized_ceva_check(simplex, edge_points):
    """Triple products ``r_ij r_jk / r_ik`` over ``i < j < k``, with ``r_ij``
    the ratio ``A_i B_ij / B_ij A_j``; all equal 1 iff the hyperplanes
    share a point.
    """
    V = np.asarray(simplex, dtype=float)
    ratios = {}
    for (i, j), B in edge_points.items():
        i, j = min(i, j), max(i, j)
        ratios[(i, j)] = edge_ratio(V[i], V[j], B)
    products = {}
    for i, j, k in combinations(range(len(V)), 3):
        products[(i, j, k)] = ratios[(i, j)] * ratios[(j, k)] / ratios[(i, k)]
    deviation = max((abs(v - 1.0) for v in products.values()), default=0.0)
    return {"products": products, "max_deviation": float(deviation)}


# --------------------------------------------------------------------------
# planar webs


class WebFunction:
    """Scalar function whose level curves form the third foliation.

    ``box`` is ``(x_lo, x_hi, y_lo, y_hi)``. ``fx`` and ``fy`` are optional
    exact partial derivatives.
    """

    def __init__(self, F, box, fx=None, fy=None, name="custom", check_grid=21, step=1e-6):
        self.F = F
        self.box = tuple(float(b) for b in box)
        self.fx = fx
        self.fy = fy
        self.name = name
        self.step = step
        x_lo, x_hi, y_lo, y_hi = self.box
        if not (x_lo < x_hi and y_lo < y_hi):
            raise WebError("empty domain box")
        for x in np.linspace(x_lo, x_hi, check_grid):
            for y in np.linspace(y_lo, y_hi, check_grid):
                gx, gy = self.partials(x, y)
                if gx == 0 or gy == 0 or not np.isfinite(gx) or not np.isfinite(gy):
                    raise WebError(f"vanishing partial derivative at ({x:g}, {y:g})")

    @property
    def has_exact_partials(self):
        return self.fx is not None and self.fy is not None

    def __call__(self, x, y):
        return self.F(x, y)

    def partials(self, x, y, step=None):
        if self.has_exact_partials:
            return float(self.fx(x, y)), float(self.fy(x, y))
        h = self.step if step is None else step
        gx = (self.F(x + h, y) - self.F(x - h, y)) / (2 * h)
        gy = (self.F(x, y + h) - self.F(x, y - h)) / (2 * h)
        return float(gx), float(gy)

    def contains(self, x, y):
        x_lo, x_hi, y_lo, y_hi = self.box
        return x_lo <= x <= x_hi and y_lo <= y <= y_hi

    @classmethod
    def from_expression(cls, expr, box, name=None):
        """Build from a sympy-parsable expression in ``x`` and ``y``."""
        import sympy as sp

        x, y = sp.symbols("x y")
        e = sp.sympify(expr, locals={"x": x, "y": y})
        if not e.free_symbols <= {x, y}:
            raise WebError(f"expression may only use x and y, got {sorted(map(str, e.free_symbols))}")
        F = sp.lambdify((x, y), e, "math")
        fx = sp.lambdify((x, y), sp.diff(e, x), "math")
        fy = sp.lambdify((x, y), sp.diff(e, y), "math")
        return cls(F, box, fx=fx, fy=fy, name=name or str(e))


BUILTIN_WEBS = {
    "sum": ("x + y", (-1.0, 2.0, -1.0, 2.0)),
    "product": ("x*y", (0.5, 2.0, 0.5, 2.0)),
    "cubic": ("x + y + x*y**2", (0.5, 2.0, 0.5, 2.0)),
}


def builtin_web(name):
    try:
        expr, box = BUILTIN_WEBS[name]
    except KeyError:
        raise WebError(f"unknown builtin web {name!r}") from None
    return WebFunction.from_expression(expr, box, name=name)


def load_web(source):
    """Web from a JSON file ``{"expr": ..., "box": [x_lo, x_hi, y_lo, y_hi]}``."""
    obj = json.loads(Path(source).read_text())
    if set(obj) - {"name", "expr", "box"} or not {"expr", "box"} <= set(obj):
        raise WebError("web file needs keys expr and box (name optional)")
    if len(obj["box"]) != 4:
        raise WebError("box must be [x_lo, x_hi, y_lo, y_hi]")
    return WebFunction.from_expression(obj["expr"], obj["box"], name=obj.get("name"))


def resolve_web(ref):
    if ref in BUILTIN_WEBS:
        return builtin_web(ref)
    if Path(ref).is_file():
        return load_web(ref)
    raise WebError(f"no builtin web or file named {ref!r}")


def _solve_leaf(h, t0, lo, hi, scale, dh=None):
    """Root of monotone ``h`` near ``t0`` within ``[lo, hi]``."""
    h0 = h(t0)
    if h0 == 0:
        return t0
    width = max(abs(scale), 1e-8)
    while True:
        a, b = max(lo, t0 - width), min(hi, t0 + width)
        ha, hb = h(a), h(b)
        if ha == 0:
            return a
        if hb == 0:
            return b
        if ha * hb < 0:
            break
        if a == lo and b == hi:
            raise LeafExitsDomain("leaf exits domain")
        width *= 2
    if not (min(ha, hb) <= h0 <= max(ha, hb)):
        raise WebError("non-monotone leaf crossing")
    t = brentq(h, a, b, xtol=ROOT_TOL * 1e-3, rtol=4 * np.finfo(float).eps, maxiter=MAX_ROOT_ITER)
    if dh is not None:
        for _ in range(3):
            d = dh(t)
            if d == 0:
                break
            t_new = t - h(t) / d
            if not (a <= t_new <= b) or abs(t_new - t) < 1e-17:
                break
            t = t_new
    if abs(h(t)) > ROOT_TOL * max(1.0, abs(h0)) and abs(b - a) > ROOT_TOL:
        raise WebError("root finder did not converge")
    return t


@dataclass(frozen=True)
class HexagonEntry:
    center: tuple
    eps: float
    points: tuple
    defect: float

    @property
    def scaled_defect(self):
        return self.defect / self.eps**3


def hexagon_closure(web, center, eps):
    """Thomsen hexagon through ``center`` with first step ``eps``.

    Alternates vertical, F-level and horizontal leaves six times and
    reports the gap between the end point and the start point.
    """
    a, b = (float(c) for c in center)
    if not web.contains(a, b):
        raise WebError("center outside the domain box")
    x_lo, x_hi, y_lo, y_hi = web.box
    F = web.F
    c0 = F(a, b)
    exact = web.has_exact_partials

    def along_vertical(level, y_start):
        dh = (lambda t: web.fy(a, t)) if exact else None
        return _solve_leaf(lambda t: F(a, t) - level, y_start, y_lo, y_hi, eps, dh)

    def along_horizontal(y, x_start):
        dh = (lambda t: web.fx(t, y)) if exact else None
        return _solve_leaf(lambda t: F(t, y) - c0, x_start, x_lo, x_hi, eps, dh)

    P0 = (a + eps, b)
    if not web.contains(*P0):
        raise LeafExitsDomain("leaf exits domain")
    P1 = (a, along_vertical(F(*P0), b))
    P2 = (along_horizontal(P1[1], a), P1[1])
    P3 = (P2[0], b)
    P4 = (a, along_vertical(F(*P3), b))
    P5 = (along_horizontal(P4[1], a), P4[1])
    P6 = (P5[0], b)
    pts = (P0, P1, P2, P3, P4, P5, P6)
    for P in pts:
        if not web.contains(*P):
            raise LeafExitsDomain("leaf exits domain")
    defect = float(np.hypot(P6[0] - P0[0], P6[1] - P0[1]))
    return HexagonEntry(center=(a, b), eps=float(eps), points=pts, defect=defect)


def hexagon_report(web, center, eps_list):
    return [hexagon_closure(web, center, e) for e in eps_list]


def web_curvature(web, at, step=1e-4, outer_step=None):
    """Planar 3-web curvature ``-(F_x F_y)^-1 d^2/dxdy log(F_x / F_y)``.

    The first partials are exact when the web supplies them, otherwise
    central differences at ``step``. The mixed derivative uses central
    differences at ``outer_step`` (``step`` with exact partials, ``1e-3``
    otherwise, to keep nested-difference cancellation in check).
    """
    x, y = (float(c) for c in at)
    exact = web.has_exact_partials
    if outer_step is None:
        outer_step = step if exact else max(step, 1e-3)

    def L(u, v):
        gx, gy = web.partials(u, v, step)
        if gx == 0 or gy == 0:
            raise WebError("vanishing partial derivative")
        return np.log(abs(gx)) - np.log(abs(gy))

    gx, gy = web.partials(x, y, step)
    if gx == 0 or gy == 0:
        raise WebError("vanishing partial derivative")
    H = outer_step
    mixed = (L(x + H, y + H) - L(x + H, y - H) - L(x - H, y + H) + L(x - H, y - H)) / (4 * H * H)
    return float(-mixed / (gx * gy)) + 0.0


# --------------------------------------------------------------------------
# sphere embedding


@dataclass(frozen=True)
class SphereEmbedding:
    eta: np.ndarray
    norm: float
    metric_residual: float


def multinomial_fisher(p):
    """Fisher metric of the multinomial in the first ``n`` probabilities."""
    p = np.asarray(p, dtype=float)
    return np.diag(1.0 / p[:-1]) + 1.0 / p[-1]


def sphere_embedding(point):
    """``eta = 2 sqrt(p)``, its squared norm, and the pullback-metric check."""
    point = _point(point)
    if not point.interior:
        raise WebError("boundary point")
    p = point.p
    eta = 2.0 * np.sqrt(p)
    n = p.size - 1
    # d eta / d p_b on the simplex, with p_{n+1} = 1 - sum_b p_b
    J = np.zeros((n + 1, n))
    J[:n, :n] = np.diag(1.0 / np.sqrt(p[:n]))
    J[n, :] = -1.0 / np.sqrt(p[n])
    residual = float(np.max(np.abs(J.T @ J - multinomial_fisher(p))))
    return SphereEmbedding(eta=eta, norm=float(eta @ eta), metric_residual=residual)

"""Statistical structure (g, C), the alpha-connection pencil and curvature.

All tensors are expressed in canonical coordinates ``theta``. There the
Fisher metric is the Hessian of the log-partition function and the cubic
tensor is its third derivative, so the Levi-Civita symbols of the first
kind are ``C / 2`` and the alpha-connection has

    Gamma^(alpha)_{ij,k} = (1 - alpha) / 2 * C_ijk.

Array layout: ``Gamma_lower[i, j, k]`` is ``Gamma_{ij,k}`` and
``Gamma_mixed[i, j, l]`` is ``Gamma^l_{ij}``. The curvature array
``R[l, i, j, k]`` holds ``R^l_{ijk}``, the ``l`` component of
``R(d_i, d_j) d_k``.
"""

from dataclasses import dataclass

import numpy as np

from .model import _theta, log_partition, probabilities

DEFAULT_CONDITION_CAP = 1e12
DEFAULT_CURVATURE_STEP = 1e-3


class SingularMetricError(ValueError):
    """The Fisher metric is too ill-conditioned to invert."""


@dataclass(frozen=True)
class MetricTensor:
    g: np.ndarray
    condition: float


@dataclass(frozen=True)
class CubicTensor:
    C: np.ndarray


@dataclass(frozen=True)
class ChristoffelArray:
    alpha: float
    Gamma_lower: np.ndarray
    Gamma_mixed: np.ndarray


@dataclass(frozen=True)
class CurvatureTensor:
    alpha: float
    R: np.ndarray
    max_abs: float


def _centered_statistics(model, theta):
    p = probabilities(model, theta)
    mu = model.Q @ p
    return p, model.Q - mu[:, None]


def fisher_metric(model, theta):
    """Covariance of the statistics, ``g_ik = sum_j p_j dQ_ij dQ_kj``."""
    p, D = _centered_statistics(model, theta)
    g = np.einsum("j,ij,kj->ik", p, D, D)
    g = 0.5 * (g + g.T)
    cond = float(np.linalg.cond(g)) if np.all(np.isfinite(g)) else float("inf")
    return MetricTensor(g=g, condition=cond)


def amari_chentsov(model, theta):
    """Third central moment of the statistics (third derivative of psi)."""
    p, D = _centered_statistics(model, theta)
    return CubicTensor(C=np.einsum("j,aj,bj,cj->abc", p, D, D, D))


def inverse_metric(metric, cap=DEFAULT_CONDITION_CAP):
    if not metric.condition < cap:
        raise SingularMetricError(
            f"metric condition number {metric.condition:.3g} exceeds cap {cap:.3g}"
        )
    return np.linalg.inv(metric.g)


def raise_last_index(T, ginv):
    """``T[..., d] -> sum_d ginv[c, d] T[..., d]``."""
    return np.einsum("abd,cd->abc", T, ginv)


def alpha_christoffels(model, theta, alpha, cap=DEFAULT_CONDITION_CAP):
    ginv = inverse_metric(fisher_metric(model, theta), cap)
    lower = 0.5 * (1.0 - alpha) * amari_chentsov(model, theta).C
    return ChristoffelArray(alpha=float(alpha), Gamma_lower=lower, Gamma_mixed=raise_last_index(lower, ginv))


def _christoffel_gradient(model, theta, alpha, step, cap):
    """dG[i, j, k, l] = d_i Gamma^l_{jk} by central differences."""
    n = model.n
    dG = np.empty((n, n, n, n))
    for i in range(n):
        e = np.zeros(n)
        e[i] = step
        plus = alpha_christoffels(model, theta + e, alpha, cap).Gamma_mixed
        minus = alpha_christoffels(model, theta - e, alpha, cap).Gamma_mixed
        dG[i] = (plus - minus) / (2 * step)
    return dG


def riemann_from_christoffels(Gamma, dGamma):
    """R^l_{ijk} from mixed symbols and their coordinate gradient."""
    # Gamma[i, j, l] = Gamma^l_{ij}; dGamma[i, j, k, l] = d_i Gamma^l_{jk}
    deriv = np.einsum("ijkl->lijk", dGamma) - np.einsum("jikl->lijk", dGamma)
    quad = np.einsum("isl,jks->lijk", Gamma, Gamma) - np.einsum("jsl,iks->lijk", Gamma, Gamma)
    return deriv + quad


def curvature_tensor(model, theta, alpha, step=DEFAULT_CURVATURE_STEP, richardson=False,
                     cap=DEFAULT_CONDITION_CAP):
    """Curvature of the alpha-connection, with derivatives of the symbols
    taken by central differences at ``step``.

    With ``richardson=True`` the derivative is extrapolated from steps
    ``step`` and ``2 * step``, which removes the leading ``O(step**2)`` error.
    """
    theta = _theta(model, theta)
    if step <= 0:
        raise ValueError("step must be positive")
    Gamma = alpha_christoffels(model, theta, alpha, cap).Gamma_mixed
    if alpha == 1:
        dG = np.zeros((model.n,) * 4)
    else:
        dG = _christoffel_gradient(model, theta, alpha, step, cap)
        if richardson:
            coarse = _christoffel_gradient(model, theta, alpha, 2 * step, cap)
            dG = (4 * dG - coarse) / 3
    R = riemann_from_christoffels(Gamma, dG)
    return CurvatureTensor(alpha=float(alpha), R=R, max_abs=float(np.max(np.abs(R))))


def lower_curvature(R, g):
    """R_{lijk} = g_{lm} R^m_{ijk}."""
    return np.einsum("lm,mijk->lijk", g, R)


def sectional_curvature(model, theta, alpha=0.0, u=None, v=None, **kwargs):
    """Sectional curvature ``g(R(u, v) v, u) / (|u|^2 |v|^2 - g(u, v)^2)``.

    Defaults to the plane of the first two coordinate directions.
    """
    n = model.n
    if n < 2:
        raise ValueError("sectional curvature needs n >= 2")
    u = np.eye(n)[0] if u is None else np.asarray(u, dtype=float)
    v = np.eye(n)[1] if v is None else np.asarray(v, dtype=float)
    g = fisher_metric(model, theta).g
    R = curvature_tensor(model, theta, alpha, **kwargs).R
    Rl = lower_curvature(R, g)
    num = np.einsum("lijk,l,i,j,k->", Rl, u, u, v, v)
    den = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    return float(num / den)


def pencil_symmetry_report(model, theta, alpha, step=DEFAULT_CURVATURE_STEP, richardson=False):
    """Largest component of ``R^(alpha) - R^(-alpha)``."""
    if alpha == 0:
        return 0.0
    Rp = curvature_tensor(model, theta, alpha, step=step, richardson=richardson).R
    Rm = curvature_tensor(model, theta, -alpha, step=step, richardson=richardson).R
    return float(np.max(np.abs(Rp - Rm)))


def hessian_fd(f, x, step=1e-4):
    """Central-difference Hessian of a scalar function."""
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.empty((n, n))
    E = np.eye(n) * step
    for i in range(n):
        for j in range(i, n):
            H[i, j] = H[j, i] = (
                f(x + E[i] + E[j]) - f(x + E[i] - E[j]) - f(x - E[i] + E[j]) + f(x - E[i] - E[j])
            ) / (4 * step * step)
    return H


def third_derivative_fd(f, x, step=1e-3):
    """Central-difference array of third partial derivatives."""
    x = np.asarray(x, dtype=float)
    n = x.size
    E = np.eye(n) * step
    T = np.empty((n, n, n))
    signs = [(sa, sb, sc) for sa in (1, -1) for sb in (1, -1) for sc in (1, -1)]
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                val = sum(
                    sa * sb * sc * f(x + sa * E[a] + sb * E[b] + sc * E[c]) for sa, sb, sc in signs
                ) / (8 * step**3)
                for i, j, k in {(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)}:
                    T[i, j, k] = val
    return T


def hessian_residual(model, theta, step=1e-4):
    H = hessian_fd(lambda t: log_partition(model, t), _theta(model, theta), step)
    return float(np.max(np.abs(fisher_metric(model, theta).g - H)))


def third_derivative_residual(model, theta, step=1e-3):
    T = third_derivative_fd(lambda t: log_partition(model, t), _theta(model, theta), step)
    return float(np.max(np.abs(amari_chentsov(model, theta).C - T)))

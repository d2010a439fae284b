"""Pre-Frobenius multiplication on tangent spaces and its axiom residuals.

The rank-3 tensor is ``A = kappa * C`` (``kappa = -2`` by default) and the
product of coordinate fields is ``d_a o d_b = sum_c A^c_ab d_c`` with the
last index raised by the Fisher metric.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import (
    DEFAULT_CONDITION_CAP,
    alpha_christoffels,
    amari_chentsov,
    fisher_metric,
    inverse_metric,
    raise_last_index,
    third_derivative_fd,
)
from .model import _theta, log_partition

DEFAULT_KAPPA = -2.0


@dataclass(frozen=True)
class MultiplicationTable:
    A_lower: np.ndarray
    A_mixed: np.ndarray
    kappa: float

    def product(self, x, y):
        """Vector ``x o y`` for tangent vectors given in coordinates."""
        return np.einsum("abc,a,b->c", self.A_mixed, x, y)


@dataclass(frozen=True)
class PencilConnection:
    lam: float
    Gamma: np.ndarray


def multiplication_constants(model, theta, kappa=DEFAULT_KAPPA, cap=DEFAULT_CONDITION_CAP):
    ginv = inverse_metric(fisher_metric(model, theta), cap)
    A = kappa * amari_chentsov(model, theta).C
    return MultiplicationTable(A_lower=A, A_mixed=raise_last_index(A, ginv), kappa=float(kappa))


def metric_invariance_residual(model, theta, trials=50, seed=0, kappa=DEFAULT_KAPPA):
    """Max of ``|g(X o Y, Z) - g(X, Y o Z)|`` over seeded random triples.

    ``A`` is totally symmetric, so this only certifies the implementation.
    """
    table = multiplication_constants(model, theta, kappa)
    g = fisher_metric(model, theta).g
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        X, Y, Z = rng.standard_normal((3, model.n))
        lhs = table.product(X, Y) @ g @ Z
        rhs = X @ g @ table.product(Y, Z)
        worst = max(worst, abs(lhs - rhs))
    return float(worst)


def associativity_residual(model, theta, kappa=DEFAULT_KAPPA):
    """``max |sum_e A^e_ab A^f_ec - A^e_bc A^f_ea|``; zero iff ``o`` is associative."""
    A = multiplication_constants(model, theta, kappa).A_mixed
    left = np.einsum("abe,ecf->abcf", A, A)
    right = np.einsum("bce,eaf->abcf", A, A)
    return float(np.max(np.abs(left - right)))


def potentiality_residual(model, theta, step=1e-3, kappa=DEFAULT_KAPPA):
    """Deviation of ``A`` from the third derivatives of ``kappa * psi``."""
    theta = _theta(model, theta)
    A = multiplication_constants(model, theta, kappa).A_lower
    D3 = third_derivative_fd(lambda t: kappa * log_partition(model, t), theta, step)
    return float(np.max(np.abs(A - D3)))


def pencil_connection(model, theta, lam, kappa=DEFAULT_KAPPA):
    """Mixed symbols of ``nabla_lambda = nabla_0 + lambda * o``."""
    table = multiplication_constants(model, theta, kappa)
    levi_civita = alpha_christoffels(model, theta, 0.0).Gamma_mixed
    return PencilConnection(lam=float(lam), Gamma=levi_civita + lam * table.A_mixed)


def pencil_alpha(lam, kappa=DEFAULT_KAPPA):
    """The alpha whose connection matches ``nabla_lambda``: ``alpha = -2 kappa lambda``."""
    return -2.0 * kappa * lam


def pencil_match(model, theta, lam, kappa=DEFAULT_KAPPA):
    Gl = pencil_connection(model, theta, lam, kappa).Gamma
    Ga = alpha_christoffels(model, theta, pencil_alpha(lam, kappa)).Gamma_mixed
    return float(np.max(np.abs(Gl - Ga)))


def frobenius_check(model, theta, kappa=DEFAULT_KAPPA, trials=50, seed=0, step=1e-3,
                    lambdas=(-0.25, 0.0, 0.25, 0.5)):
    return {
        "kappa": float(kappa),
        "metric_invariance": metric_invariance_residual(model, theta, trials, seed, kappa),
        "associativity": associativity_residual(model, theta, kappa),
        "potentiality": potentiality_residual(model, theta, step, kappa),
        "pencil_match": max(pencil_match(model, theta, lam, kappa) for lam in lambdas),
    }

"""Toric structure of a discrete exponential family.

Appending the constant statistic ``q0 = 1`` to ``Q`` gives the extended
design matrix ``Qt``. For every integer ``u`` with ``Qt u = 0`` the model
probabilities satisfy ``prod p_j^{u+_j} = prod p_j^{u-_j}`` (times a
base-measure constant), since ``log p`` is affine in ``theta`` and the ones
row cancels the normalization.
"""

from dataclasses import dataclass

import numpy as np

from . import intlinalg
from .model import probabilities, sample_thetas

SATURATION_CAVEAT = (
    "binomials of a lattice basis generate the toric ideal only up to saturation"
)


@dataclass(frozen=True)
class ExtendedMatrix:
    Qt: tuple

    @property
    def rows(self):
        return [list(r) for r in self.Qt]

    @property
    def m(self):
        return len(self.Qt[0])


@dataclass(frozen=True)
class LatticeBasis:
    basis: tuple
    m: int

    @property
    def rank(self):
        return len(self.basis)

    @property
    def vectors(self):
        return [list(u) for u in self.basis]


@dataclass(frozen=True)
class BinomialRelation:
    u_plus: tuple
    u_minus: tuple

    @property
    def u(self):
        return tuple(a - b for a, b in zip(self.u_plus, self.u_minus))

    @property
    def display(self):
        return f"{_monomial(self.u_plus)} - {_monomial(self.u_minus)}"


def _monomial(exps):
    parts = []
    for j, e in enumerate(exps, start=1):
        if e == 1:
            parts.append(f"y{j}")
        elif e > 1:
            parts.append(f"y{j}^{e}")
    return "*".join(parts) if parts else "1"


def extended_matrix(model):
    rows = [[1] * model.m] + model.Q_int
    return ExtendedMatrix(Qt=tuple(tuple(r) for r in rows))


def canonical_basis(vectors, m):
    """Canonical generating set of the lattice spanned by ``vectors``.

    Hermite form rows, leading entry positive, sorted lexicographically.
    """
    rows = intlinalg.row_hermite_form(vectors) if vectors else []
    return LatticeBasis(basis=tuple(sorted(tuple(r) for r in rows)), m=m)


def lattice_kernel(Qt):
    """Integer basis of ``{u in Z^m : Qt u = 0}`` in canonical form."""
    rows = Qt.rows if isinstance(Qt, ExtendedMatrix) else intlinalg.as_int_matrix(Qt)
    m = len(rows[0])
    return canonical_basis(intlinalg.kernel_basis(rows), m)


def split_vector(u):
    u = tuple(int(x) for x in u)
    if not any(u):
        raise ValueError("zero vector gives no binomial")
    return BinomialRelation(
        u_plus=tuple(max(x, 0) for x in u),
        u_minus=tuple(max(-x, 0) for x in u),
    )


def binomials_from_kernel(basis):
    vectors = basis.basis if isinstance(basis, LatticeBasis) else basis
    return [split_vector(u) for u in vectors]


def kernel_membership(basis, u):
    """Whether ``u`` is an integer combination of the basis vectors."""
    vectors = basis.basis if isinstance(basis, LatticeBasis) else basis
    u = [int(x) for x in u]
    if not vectors:
        return not any(u)
    hermite = intlinalg.row_hermite_form(vectors)
    return intlinalg.solve_in_lattice(hermite, u) is not None


def verify_vanishing(model, relations=None, samples=100, seed=0):
    """Largest binomial residual ``|p^{u+} - c_u p^{u-}|`` over seeded points.

    ``c_u = prod p0^u`` absorbs a non-uniform base measure; it is 1 when the
    base measure is constant.
    """
    if relations is None:
        relations = binomials_from_kernel(lattice_kernel(extended_matrix(model)))
    log_base = np.log(model.base_measure)
    scales = []
    for rel in relations:
        u = np.array(rel.u, dtype=float)
        scales.append(float(np.exp(u @ log_base)))
    worst = 0.0
    for theta in sample_thetas(model, samples, seed):
        p = probabilities(model, theta)
        for rel, c in zip(relations, scales):
            lhs = float(np.prod(p ** np.array(rel.u_plus, dtype=float)))
            rhs = float(np.prod(p ** np.array(rel.u_minus, dtype=float)))
            worst = max(worst, abs(lhs - c * rhs))
    return {
        "relations": len(relations),
        "samples": samples,
        "seed": seed,
        "max_residual": worst,
        "base_measure_rescaled": not model.uniform_base,
        "vacuous": not relations,
    }

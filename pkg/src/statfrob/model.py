"""Discrete exponential families on a finite sample space.

A model is fixed by an integer statistics matrix ``Q`` (``n`` statistics by
``m`` outcomes) and a positive base measure. Outcome ``j`` has probability

    p_j(theta) = p0_j * exp(sum_i theta_i Q[i, j] - psi(theta))

where ``psi`` is the log-partition function.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import intlinalg

_MODEL_KEYS = {"name", "m", "n", "Q", "base_measure"}
_REQUIRED_KEYS = {"name", "m", "n", "Q"}


class ModelError(ValueError):
    """Raised for malformed or invalid model descriptions."""


@dataclass(frozen=True)
class ExponentialFamilyModel:
    name: str
    Q: np.ndarray
    base_measure: np.ndarray
    rank: int = field(init=False)

    def __post_init__(self):
        Q = np.array(self.Q, dtype=float)
        if Q.ndim != 2:
            raise ModelError("Q must be a 2-d array")
        if not np.all(np.isfinite(Q)) or np.any(Q != np.round(Q)):
            raise ModelError("non-integer Q entry")
        n, m = Q.shape
        if n < 1:
            raise ModelError("n must be at least 1")
        if m < 2:
            raise ModelError("m must be at least 2")
        base = np.array(self.base_measure, dtype=float)
        if base.shape != (m,):
            raise ModelError(f"base_measure must have length {m}")
        if not np.all(np.isfinite(base)) or np.any(base <= 0):
            raise ModelError("non-positive base measure")
        Q.setflags(write=False)
        base.setflags(write=False)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "base_measure", base)
        object.__setattr__(self, "rank", intlinalg.rank(self.Q_int))

    @classmethod
    def from_matrix(cls, Q, base_measure=None, name="model"):
        Q = np.atleast_2d(np.asarray(Q))
        if base_measure is None:
            base_measure = np.ones(Q.shape[1])
        return cls(name=name, Q=Q, base_measure=base_measure)

    @property
    def n(self):
        return self.Q.shape[0]

    @property
    def m(self):
        return self.Q.shape[1]

    @property
    def Q_int(self):
        """``Q`` as nested lists of Python ints (exact arithmetic)."""
        return [[int(x) for x in row] for row in self.Q]

    @property
    def rank_deficient(self):
        return self.rank < self.n

    @property
    def uniform_base(self):
        return bool(np.all(self.base_measure == self.base_measure[0]))

    def to_dict(self):
        return {
            "name": self.name,
            "m": self.m,
            "n": self.n,
            "Q": self.Q_int,
            "base_measure": [float(x) for x in self.base_measure],
        }

    def rank_report(self):
        return {"rank": self.rank, "n": self.n, "rank_deficient": self.rank_deficient}


def _parse(obj):
    if not isinstance(obj, dict):
        raise ModelError("malformed schema: top level must be an object")
    unknown = set(obj) - _MODEL_KEYS
    if unknown:
        raise ModelError(f"malformed schema: unknown keys {sorted(unknown)}")
    missing = _REQUIRED_KEYS - set(obj)
    if missing:
        raise ModelError(f"malformed schema: missing keys {sorted(missing)}")
    name, m, n, Q = obj["name"], obj["m"], obj["n"], obj["Q"]
    if not isinstance(name, str):
        raise ModelError("malformed schema: name must be a string")
    for key, val in (("m", m), ("n", n)):
        if isinstance(val, bool) or not isinstance(val, int):
            raise ModelError(f"malformed schema: {key} must be an integer")
    if m < 2:
        raise ModelError("m must be at least 2")
    if n < 1:
        raise ModelError("n must be at least 1")
    if not isinstance(Q, list) or len(Q) != n:
        raise ModelError(f"malformed schema: Q must have {n} rows")
    for row in Q:
        if not isinstance(row, list) or len(row) != m:
            raise ModelError(f"malformed schema: every Q row must have {m} entries")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ModelError("malformed schema: Q entries must be numbers")
            if not isinstance(x, int):
                raise ModelError("non-integer Q entry")
    base = obj.get("base_measure")
    if base is None:
        base = [1.0] * m
    else:
        if not isinstance(base, list) or len(base) != m:
            raise ModelError(f"malformed schema: base_measure must have {m} entries")
        for x in base:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ModelError("malformed schema: base_measure entries must be numbers")
        if any(x <= 0 for x in base):
            raise ModelError("non-positive base measure")
    return ExponentialFamilyModel(name=name, Q=np.array(Q, dtype=float), base_measure=base)


def load_model(source):
    """Load a model from JSON bytes, a JSON string, or a path to a file."""
    if isinstance(source, Path):
        source = source.read_bytes()
    if isinstance(source, (bytes, bytearray)):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelError(f"malformed schema: {exc}") from exc
    try:
        obj = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed schema: {exc}") from exc
    return _parse(obj)


def dump_model(model):
    return json.dumps(model.to_dict(), indent=2) + "\n"


def _theta(model, theta):
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (model.n,):
        raise ValueError(f"theta must have length {model.n}, got {theta.shape}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta must be finite")
    return theta


def _log_weights(model, theta):
    return np.log(model.base_measure) + _theta(model, theta) @ model.Q


def log_partition(model, theta):
    """psi(theta) = log sum_j p0_j exp(theta . Q[:, j]), max-shifted."""
    a = _log_weights(model, theta)
    amax = a.max()
    return float(amax + np.log(np.exp(a - amax).sum()))


def probabilities(model, theta):
    a = _log_weights(model, theta)
    w = np.exp(a - a.max())
    return w / w.sum()


def mean_parameters(model, theta, step=1e-4):
    """Expectations of the statistics, ``mu = Q p = grad psi``.

    Returns ``(mu, residual)`` where ``residual`` is the largest deviation of
    ``mu`` from central differences of ``log_partition`` at ``step``.
    """
    theta = _theta(model, theta)
    mu = model.Q @ probabilities(model, theta)
    fd = np.empty(model.n)
    for i in range(model.n):
        e = np.zeros(model.n)
        e[i] = step
        fd[i] = (log_partition(model, theta + e) - log_partition(model, theta - e)) / (2 * step)
    return mu, float(np.max(np.abs(mu - fd)))


def monomial_parametrization(model, theta):
    """tau_j = prod_i t_i ** Q[i, j] with t = exp(theta)."""
    theta = _theta(model, theta)
    return np.exp(theta @ model.Q)


def sample_thetas(model, count, seed=0, low=-2.0, high=2.0):
    """Deterministic uniform draws of canonical points in ``[low, high]^n``."""
    rng = np.random.default_rng(seed)
    return rng.uniform(low, high, size=(count, model.n))


def random_model(n, m, seed=0, max_entry=2):
    """Random integer model whose extended design matrix has full row rank.

    Entries of ``Q`` are drawn uniformly from ``0..max_entry``; draws are
    repeated until ``[1; Q]`` has rank ``n + 1``, which keeps the Fisher
    metric nondegenerate.
    """
    if m < n + 1:
        raise ValueError("need m >= n + 1 for a nondegenerate model")
    rng = np.random.default_rng(seed)
    while True:
        Q = rng.integers(0, max_entry + 1, size=(n, m))
        Qt = [[1] * m] + Q.tolist()
        if intlinalg.rank(Qt) == n + 1:
            return ExponentialFamilyModel.from_matrix(Q, name=f"random-n{n}m{m}-seed{seed}")


BUILTIN_MODELS = ("bernoulli", "trinomial", "independence-2x2", "random-n3m6-seed0")


def builtin_model(name):
    from importlib import resources

    if name not in BUILTIN_MODELS:
        raise ModelError(f"unknown builtin model {name!r}")
    data = resources.files("statfrob").joinpath("models", f"{name}.json").read_bytes()
    return load_model(data)


def resolve_model(ref):
    """A builtin model name (with or without ``.json``) or a file path."""
    ref = str(ref)
    stem = ref[:-5] if ref.endswith(".json") else ref
    path = Path(ref)
    if path.is_file():
        return load_model(path)
    if stem in BUILTIN_MODELS:
        return builtin_model(stem)
    raise ModelError(f"no model file or builtin named {ref!r}")

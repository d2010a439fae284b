"""Discrete exponential families as pre-Frobenius, toric and web-geometric objects."""

from .model import (
    ExponentialFamilyModel,
    ModelError,
    load_model,
    log_partition,
    mean_parameters,
    monomial_parametrization,
    probabilities,
)

__all__ = [
    "ExponentialFamilyModel",
    "ModelError",
    "load_model",
    "log_partition",
    "mean_parameters",
    "monomial_parametrization",
    "probabilities",
]

__version__ = "0.1.0"

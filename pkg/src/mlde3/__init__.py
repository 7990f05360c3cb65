"""Exact and high-precision tools for classifying rank-3 character vectors
of monic third-order modular linear differential equations."""

from .characters import CharacterSpec, CharacterVector, central_charge, \
    character_vector, character_vector_frobenius, frobenius_solve, \
    mlde_coefficients
from .qseries import QExpansion, eisenstein, hauptmodul_K, j_invariant, \
    j_power, modular_derivative
from .surface import FiberPoint, am_count, eval_eq1, fiber_enumerate, m_of

__version__ = "0.1.0"

__all__ = [
    "CharacterSpec", "CharacterVector", "QExpansion", "FiberPoint",
    "central_charge", "character_vector", "character_vector_frobenius",
    "frobenius_solve", "mlde_coefficients", "eisenstein", "hauptmodul_K",
    "j_invariant", "j_power", "modular_derivative", "am_count", "eval_eq1",
    "fiber_enumerate", "m_of", "__version__",
]

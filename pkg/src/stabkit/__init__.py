"""stabkit: GF(2) canonical forms for stabilizer codes, uniform symplectic
sampling, and finite-blocklength bounds for Pauli noise."""

from .gf2 import Gf2Matrix, Gf2Vector, Gf2Error, identity, mul, rank, revdiag, transpose, zeros

__all__ = [
    "Gf2Matrix",
    "Gf2Vector",
    "Gf2Error",
    "identity",
    "mul",
    "rank",
    "revdiag",
    "transpose",
    "zeros",
]

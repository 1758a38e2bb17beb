"""Zeta functions of cyclic covers y^r = f(x) of the projective line over finite fields."""

from .cohomology import BasisKind, Curve
from .errors import (
    CharacteristicDividesDegreeError,
    CycweilError,
    MalformedInputError,
    NotSquarefreeError,
    OracleMismatchError,
    PrecisionError,
    VerificationError,
)
from .weil import WeilPolynomial, weil_polynomial

__all__ = [
    "BasisKind",
    "Curve",
    "WeilPolynomial",
    "weil_polynomial",
    "CycweilError",
    "MalformedInputError",
    "NotSquarefreeError",
    "CharacteristicDividesDegreeError",
    "PrecisionError",
    "VerificationError",
    "OracleMismatchError",
]

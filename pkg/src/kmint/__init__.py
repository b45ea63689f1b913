"""Exact-arithmetic Kac-Moody highest-weight modules, integral forms, and
group-operator integrality experiments."""

from .gcm import CartanMatrix, MatrixType, classify, validate_gcm
from .hwmodule import LambdaData, ModuleTruncation

__all__ = ["CartanMatrix", "MatrixType", "classify", "validate_gcm",
           "LambdaData", "ModuleTruncation"]

"""Exception hierarchy for algmat"""
from typing import Any, List, Optional, Tuple


class AlgMatError(Exception):
    """Base class. exit_code: 2 for mathematical failures, 1 for usage/parse errors"""
    exit_code = 1


class MathematicalFailure(AlgMatError):
    exit_code = 2


# ============================================================================
# Fields
# ============================================================================

class DivisionByZero(MathematicalFailure, ZeroDivisionError):
    pass


class FieldMismatch(AlgMatError):
    pass


class CharZeroField(MathematicalFailure):
    """Operation needs positive characteristic"""


class PositiveCharacteristic(MathematicalFailure):
    """Operation needs characteristic zero"""


class DegreeTooLarge(AlgMatError):
    pass


class ModulusTooLarge(AlgMatError):
    pass


class InvalidField(AlgMatError):
    """Non-prime modulus, reducible minimal polynomial, nested extension"""


# ============================================================================
# Rings and polynomials
# ============================================================================

class RingMismatch(AlgMatError):
    pass


class NameCollision(AlgMatError):
    pass


class DuplicateVariable(AlgMatError):
    pass


class PolynomialSyntaxError(AlgMatError, ValueError):
    def __init__(self, message: str, position: int = 0, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UnknownVariable(PolynomialSyntaxError):
    def __init__(self, name: str, position: int = 0, text: str = ""):
        self.name = name
        super().__init__(f"unknown variable '{name}'", position, text)


# ============================================================================
# Groebner engine
# ============================================================================

class ResourceLimitExceeded(MathematicalFailure):
    pass


class ExponentOverflow(ResourceLimitExceeded):
    pass


# ============================================================================
# Fraction field
# ============================================================================

class ContextMismatch(AlgMatError):
    pass


class IndexOutOfRange(AlgMatError, IndexError):
    pass


class DenominatorVanishes(MathematicalFailure):
    def __init__(self, entry: Tuple[int, int]):
        self.entry = entry
        super().__init__(f"denominator of entry {entry} vanishes at the point")


# ============================================================================
# Matroids
# ============================================================================

class GroundSetTooLarge(AlgMatError):
    pass


class GroundSetMismatch(AlgMatError):
    pass


class NotAMatroid(MathematicalFailure):
    pass


# ============================================================================
# Constructions
# ============================================================================

class NotOnVariety(MathematicalFailure):
    def __init__(self, point: Any, failing: Optional[List[int]] = None):
        self.point = point
        self.failing = failing or []
        super().__init__(f"point does not lie on the variety (generators {self.failing} nonzero)")


class NoValidPoint(MathematicalFailure):
    def __init__(self, reports: List[Any]):
        self.reports = reports
        super().__init__(f"none of {len(reports)} candidate points yields a matching representation")


class ShiftPairNonzero(AlgMatError, ValueError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"shift pair {index} has both entries nonzero")


class ConsistencyError(MathematicalFailure):
    pass


# ============================================================================
# Ideal files
# ============================================================================

class IdealFileError(AlgMatError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownField(IdealFileError):
    pass


class UsageError(AlgMatError):
    """Bad command-line arguments that argparse cannot catch on its own"""
    pass

"""
Error types shared by the VoCIC services.

Three families are distinguished because the command line maps them to
different exit codes: usage/parse problems, infeasible mathematical input,
and internal consistency traps that must never fire on a correct build.
"""

from typing import Optional


class VocicError(Exception):
    """Base class for all VoCIC errors."""


# Usage and parsing (exit code 1)

class ParseError(VocicError, ValueError):
    """Malformed command-line or file text."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        self.text = text
        self.position = position
        if position is not None:
            pointer = " " * position + "^"
            message = f"{message} at position {position}\n  {text}\n  {pointer}"
        super().__init__(message)


class ConfigError(VocicError, ValueError):
    """Invalid configuration value."""


# Infeasible input (exit code 2)

class InfeasibleInput(VocicError, ValueError):
    """Input that is well formed but mathematically out of range."""


class NotAComponent(InfeasibleInput):
    """(dim, r) does not describe an irreducible component."""


class NotSparse(InfeasibleInput):
    """The support of h contains two consecutive vertices."""


class DeformationOutOfRange(InfeasibleInput):
    """A deformation index k is not componentwise below r."""


class RankMismatch(InfeasibleInput):
    """Objects of different quiver rank were combined."""


class DimensionMismatch(InfeasibleInput):
    """Dimension vectors do not add up."""


class IndexOutOfRange(InfeasibleInput):
    """A vertex or root index lies outside 1..n."""


class CeilingExceeded(InfeasibleInput):
    """An oracle computation was requested above the configured ceiling."""


# Internal consistency traps (exit code 4)

class ConsistencyError(VocicError, RuntimeError):
    """An internal invariant was violated."""


class NonDivisible(ConsistencyError):
    """Exact division left a nonzero remainder."""


class ShiftNotEven(ConsistencyError):
    """A normalized binomial contained an odd power of v."""


class ZeroBase(ConsistencyError):
    """Evaluation at zero of a polynomial with negative exponents."""


class NegativeMultiplicity(ConsistencyError):
    """Rank invariants produced a negative interval multiplicity."""


class NonIntegerInterpolation(ConsistencyError):
    """Interpolated point counts did not give an integer polynomial."""


class ExtraPrimeMismatch(ConsistencyError):
    """An interpolated polynomial disagreed with a held-out count."""


class OrderConventionViolation(ConsistencyError):
    """A PBW word did not evaluate to the expected basis element."""


class NotUnitriangular(ConsistencyError):
    """The PBW bar matrix is not unitriangular in the hom-order."""


class NoSolutionInLattice(ConsistencyError):
    """The canonical-basis recursion produced a non-antisymmetric remainder."""


class OddPowerPresent(ConsistencyError):
    """A stalk polynomial in v contained an odd exponent."""


class NegativePowerPresent(ConsistencyError):
    """A stalk polynomial in v contained a negative exponent."""


class CacheConflict(ConsistencyError):
    """Two cache records with the same key carry different payloads."""

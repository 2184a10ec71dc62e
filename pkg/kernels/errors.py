#!/usr/bin/env python3
"""
Kernel error hierarchy.

Every failure raised by the kernel scripts derives from KernelError so the CLI
can map it to exit code 1 with a one-line message.
"""

from typing import Optional


class KernelError(Exception):
    """Base class for all kernel failures."""


class InsufficientPrecisionError(KernelError):
    """Modulus or working precision too small for the requested bounds."""


class LiftObstructedError(KernelError):
    """A Hensel-type lift has no solution at some step."""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class BadPrimeError(KernelError):
    """The prime divides a denominator or discriminant that must be a unit."""


class ModulusMismatchError(KernelError):
    """Arithmetic between residues with different (p, k)."""


class ArityMismatchError(KernelError, ValueError):
    """Variable counts, rings or orders do not agree."""


class SingularMatrixError(KernelError):
    """A matrix required to be invertible is singular."""


class NotAFieldError(KernelError):
    """The coefficient ring is not a field."""


class DegreeCapExceededError(KernelError):
    """A Groebner computation reached the configured degree cap."""


class DependentRowsError(KernelError):
    """Lattice basis rows are linearly dependent."""


class CancelledError(KernelError):
    """A long computation was cancelled through its token."""


class BranchLocusError(KernelError):
    """A square-root section was evaluated on its branch locus."""


class InconsistentDataError(KernelError):
    """Input data violates a consistency check (cube roots, closure, ...)."""


class NotASubgroupError(KernelError):
    """A subset that should be a subgroup is not closed."""


class AmbiguousClassError(KernelError):
    """A class fingerprint matches more than one conjugacy class."""

    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class ParseError(KernelError, ValueError):
    """Malformed text input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ManifestError(ParseError):
    """Malformed or unexecutable pipeline manifest."""


class ConfigError(KernelError):
    """Bad environment configuration."""

"""Exception types shared across the toolkit."""

from __future__ import annotations


class MasseykitError(Exception):
    """Base class for all toolkit errors."""


class NonPrimeModulus(MasseykitError):
    """An operation requiring a prime modulus got a composite one."""


class DimensionMismatch(MasseykitError):
    """Matrix/vector dimensions are incompatible."""


class ShapeMismatch(MasseykitError):
    """Unitriangular operands live in different shapes."""


class BudgetExceeded(MasseykitError):
    """An enumeration or search would exceed its configured budget.

    ``stats`` carries whatever partial counts were gathered before bailing.
    """

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class UnknownName(MasseykitError):
    """Catalog lookup with an unrecognized group name."""


class NotSurjective(MasseykitError):
    """A map required to be surjective is not."""


class NotHomomorphism(MasseykitError):
    """Candidate images do not define a homomorphism."""


class NotNormal(MasseykitError):
    """A subgroup required to be normal is not."""


class NotACocycle(MasseykitError):
    """A cochain required to be a cocycle has nonzero coboundary."""


class DegreeTooHigh(MasseykitError):
    """A cochain operation was requested outside the supported degrees."""


class InvalidSystem(MasseykitError):
    """A defining system fails its validation conditions."""


class InternalInconsistency(MasseykitError):
    """A self-check that should always pass failed: implementation bug."""


class UnknownScenario(MasseykitError):
    """The verification scenario name is not recognized."""


class InputError(MasseykitError):
    """A job document or CLI argument is malformed."""

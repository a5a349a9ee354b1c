"""Exception types shared across the package."""


class HacalcError(Exception):
    """Base class for all package-specific errors."""


class NegativeValuation(HacalcError):
    """A rational with negative p-adic valuation was reduced modulo p^N."""


class DegreeOverflow(HacalcError):
    """A computation exceeded the configured hard degree cap."""


class ZeroElement(HacalcError):
    """An operation that needs a nonzero element received zero."""


class WrongDegree(HacalcError):
    """A form of unexpected degree was passed."""


class NotCommutative(HacalcError):
    """A commutative presentation was required."""


class Unstable(HacalcError):
    """Truncated homology dimensions did not agree across windows."""


class BadReduction(HacalcError):
    """The plane curve is not smooth modulo the chosen prime."""


class InvalidConnection(HacalcError):
    """The given connection data is inconsistent with the relations."""


class NotApproxIdempotent(HacalcError):
    """The input matrix is not idempotent modulo p."""


class Mismatch(HacalcError):
    """Two independent computations of the same invariant disagree."""

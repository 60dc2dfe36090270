"""Exception taxonomy shared across the library.

The CLI maps these onto its exit-code contract: parse failures exit 2,
precondition/scale violations exit 3, internal failures exit 4.
"""


class TverbergError(Exception):
    """Base class for all library errors."""


class GeneralPositionViolation(TverbergError):
    """Input points violate the general-position assumption an algorithm needs."""


class PreconditionError(TverbergError):
    """A documented operation precondition does not hold for the given input."""


class ScaleCapExceeded(PreconditionError):
    """Input exceeds a hard size cap (brute-force oracles, exact solver)."""


class InputTooSmall(PreconditionError):
    """Too few points for the requested construction."""


class SearchFailure(TverbergError):
    """An iterative search or retry loop exhausted its budget."""


class ContractViolation(TverbergError):
    """A pluggable component returned an object that fails exact verification."""


class ParseError(TverbergError):
    """Malformed point file or certificate."""

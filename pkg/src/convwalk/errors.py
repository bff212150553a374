"""Exception hierarchy shared by the library and the CLI."""


class ConvwalkError(Exception):
    """Base class for all errors raised by convwalk."""


class InputError(ConvwalkError, ValueError):
    """Malformed group, measure, or representation input."""


class GroupMismatchError(InputError):
    """Two objects that must live on the same group do not."""


class TheoremViolation(ConvwalkError):
    """A cross-check between independent routes disagreed.

    The equivalences being checked are theorems, so a failure points at
    the implementation (or at a tolerance), never at the mathematics.
    """

    def __init__(self, message, failures=None):
        super().__init__(message)
        self.failures = list(failures or [])


class NumericalDegeneracy(ConvwalkError):
    """A spectral decision falls between the eigen tolerance and the gap tolerance."""

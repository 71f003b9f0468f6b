"""Exception types raised across sidonlab."""

from __future__ import annotations


class SidonLabError(Exception):
    """Base class for all library errors."""


class NotPrime(SidonLabError, ValueError):
    pass


class DegreeTooLarge(SidonLabError, ValueError):
    pass


class NotIrreducible(SidonLabError, ValueError):
    pass


class FieldMismatch(SidonLabError, ValueError):
    pass


class ZeroTarget(SidonLabError, ValueError):
    pass


class NotPrimitive(SidonLabError, ValueError):
    pass


class BadSeed(SidonLabError, ValueError):
    pass


class BadCertificate(SidonLabError, ValueError):
    pass


class NotCoprime(SidonLabError, ValueError):
    pass


class BadEpsilon(SidonLabError, ValueError):
    pass


class ElementOutOfRange(SidonLabError, ValueError):
    pass


class CapExceeded(SidonLabError, ValueError):
    pass


class ZeroElement(SidonLabError, ValueError):
    pass


class TimeBudgetExceeded(SidonLabError):
    """Raised when a search runs out of time.

    ``partial`` carries whatever the search had established when it stopped
    (a :class:`~sidonlab.search.SearchResult` flagged ``LOWER_BOUND``, or a
    plain integer bound).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial

"""Exception hierarchy shared across the package."""


class PpcatError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PpcatError):
    """Malformed project file, formula text, or cache payload syntax."""


class DomainError(PpcatError):
    """Mathematically invalid request: sort mismatch, wrong field,
    non-admissible relations, and similar."""


class BudgetError(DomainError):
    """A configured search bound (dimension, entry count, enumeration
    budget, non-termination guard) was exceeded."""


class CertificationError(DomainError):
    """A required certificate could not be produced (e.g. locality of an
    endomorphism algebra, almost-split witness construction)."""


class CacheError(PpcatError):
    """Cache file missing a valid header, corrupted, or version mismatch."""

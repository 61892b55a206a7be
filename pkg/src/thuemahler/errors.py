"""Exception hierarchy.

Everything raised for bad *mathematical* input derives from :class:`DomainError`
so the CLI can map it to a dedicated exit status.
"""


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class InvalidDegreeError(DomainError):
    pass


class InvalidMapError(DomainError):
    pass


class UnsupportedInstanceError(DomainError):
    """The instance violates a hypothesis the computation relies on."""


class PrecisionError(DomainError):
    """Not enough p-adic or real precision to certify an answer.

    Carries enough information for the caller to re-lift and retry.
    """

    def __init__(self, message, place=None, needed=None):
        super().__init__(message)
        self.place = place
        self.needed = needed

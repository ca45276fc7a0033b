"""Exception hierarchy for diffusion descriptors."""


class DescriptorError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DescriptorError, ValueError):
    """An argument lies outside the domain of an operation."""


class BorderError(DomainError):
    """A gradient was requested inside the one-pixel border of a field."""


class PGMParseError(DescriptorError, ValueError):
    """Malformed or truncated PGM data."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class DegenerateInputError(DescriptorError, ValueError):
    """Input with no usable content, e.g. a zero-norm descriptor."""


class ContractError(DescriptorError, ValueError):
    """Two objects that must share axes or grids do not."""


class MatchingError(DescriptorError):
    """Template matching produced no finite score."""


class PreconditionError(DescriptorError):
    """A stated precondition of an algorithm does not hold."""

    def __init__(self, message: str, count: int | None = None):
        super().__init__(message)
        self.count = count


class ConfigError(DescriptorError, ValueError):
    """Invalid or unknown configuration entry."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field

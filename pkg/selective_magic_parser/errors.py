"""Exception hierarchy shared by every stage of the pipeline."""


class TfgError(Exception):
    """Base error carrying an optional source location."""

    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
        source: str | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column
        self.source = source

    def located(self) -> str:
        """Render as ``source:line: message`` using whatever location is known."""
        prefix = ""
        if self.source:
            prefix = f"{self.source}:"
        if self.line is not None:
            prefix += f"{self.line}:"
        return f"{prefix} {self.message}" if prefix else self.message


class SignatureError(TfgError):
    """Signature text is malformed or violates a hierarchy invariant."""


class UnknownTypeError(SignatureError):
    """A type name is not declared in the signature."""


class GrammarError(TfgError):
    """Clause text is malformed or ill-typed."""


class GrammarSyntaxError(GrammarError):
    """Clause text does not parse."""


class ControlError(TfgError):
    """Parse type, delay or index configuration is invalid."""


class MagicError(TfgError):
    """Magic compilation was asked to do something it cannot."""


class ResourceLimitExceeded(TfgError):
    """A configured cap was hit; evaluation may not terminate."""

    def __init__(self, kind: str, limit: int):
        super().__init__(f"{kind} limit of {limit} exceeded")
        self.kind = kind
        self.limit = limit


class DepthLimitExceeded(ResourceLimitExceeded):
    """Top-down resolution went deeper than the configured cap."""

    def __init__(self, limit: int):
        super().__init__("top-down depth", limit)

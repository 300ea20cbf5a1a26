"""Exception hierarchy shared across the toolkit.

The CLI maps these onto its documented exit codes: configuration problems
(exit 2), validation/synthesis failures (exit 3), I/O failures (exit 4).
"""


class AdcScaleError(Exception):
    """Base class for all toolkit errors."""


class ExprError(AdcScaleError):
    """Base class for expression-DSL errors."""


class ParseError(ExprError):
    """Malformed DSL source.

    Carries the byte offset of the failure and a hint naming what was
    expected there.
    """

    def __init__(self, message: str, offset: int, expected: str | None = None):
        self.offset = offset
        self.expected = expected
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{message} at offset {offset}{hint}")


class MultipleVariablesError(ExprError):
    """More than one non-constant symbol in a characteristic expression."""

    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(
            "expression must use a single variable, found: " + ", ".join(self.names)
        )


class UnboundSymbolError(ExprError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound symbol: {name}")


class DomainError(ExprError):
    """Evaluation left the real domain (negative radicand, zero divisor)."""


class SpecError(AdcScaleError):
    """A system description is structurally unusable (bad range, bad wiring)."""


class OutOfRangeError(AdcScaleError):
    """A value fell outside the range it is defined on."""


class NonMonotoneError(AdcScaleError):
    """A characteristic that must be strictly increasing is not.

    ``witness`` holds a pair of abscissae exhibiting the violation when one
    was located.
    """

    def __init__(self, message: str, witness: tuple[float, float] | None = None):
        self.witness = witness
        if witness is not None:
            message = f"{message} (witness: {witness[0]:g}, {witness[1]:g})"
        super().__init__(message)


class ConvergenceError(AdcScaleError):
    """Numeric inversion failed to reach the requested tolerance."""


class SynthesisError(AdcScaleError):
    """Scaling-function synthesis rejected the spec (failed validation,
    composition domain mismatch)."""


class WindowError(AdcScaleError):
    """The integer code window is empty or a code fell outside it."""


class CodegenError(AdcScaleError):
    """Code emission was asked for something the inputs cannot provide."""


class ConfigError(AdcScaleError):
    """A config document is missing keys or holds unparsable values."""

"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid input data, operands, or configuration."""


class SizeError(ValidationError):
    """Operand sizes are incompatible (padding target too small, length mismatch)."""


class CapacityError(ValidationError):
    """Problem size exceeds the exact solver cap; use the graduated matcher."""


class DegenerateModelError(ValidationError):
    """Operation is undefined for a model with a zero weight graph."""


class DatasetFormatError(ValidationError):
    """Malformed dataset file; carries file path and line number when known."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc = f"{path}: "
        if line is not None:
            loc = f"{loc}line {line}: "
        super().__init__(f"{loc}{message}")
        self.path = path
        self.line = line


class InfeasibleSpecError(RuntimeError):
    """A synthetic data spec that cannot be satisfied within the sampling budget."""

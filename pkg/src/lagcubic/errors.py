"""Exception hierarchy shared by all modules."""


class LagcubicError(Exception):
    pass


class StructuralError(LagcubicError, ValueError):
    """Operands have incompatible shapes (variable counts, matrix sizes)."""


class NonUnitError(LagcubicError, ZeroDivisionError):
    pass


class NonInvertibleError(LagcubicError, ValueError):
    pass


class DomainError(LagcubicError, ValueError):
    pass


class PreconditionError(LagcubicError, ValueError):
    pass


class ConditionError(LagcubicError):
    """A checked condition failed; ``witness`` says where."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotMaximallyUnipotentError(LagcubicError, ValueError):
    def __init__(self, message, roots):
        super().__init__(message)
        self.roots = roots


class PipelineError(LagcubicError):
    pass


class SchemaError(LagcubicError, ValueError):
    """Input file does not match its documented JSON schema."""

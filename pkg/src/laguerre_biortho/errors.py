"""Exception types. Every error carries a short machine-readable ``code``."""


class BiorthoError(ValueError):
    code = "error"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details


class OrderUnsupported(BiorthoError):
    code = "order-unsupported"


class DomainError(BiorthoError):
    code = "domain-error"


class EvaluationDomainError(BiorthoError):
    code = "evaluation-domain-error"


class DeflationFailure(BiorthoError):
    code = "deflation-failure"


class IndexOverflow(BiorthoError):
    code = "index-overflow"


class InvalidParams(BiorthoError):
    code = "invalid-params"


class NotBiisometric(BiorthoError):
    code = "not-biisometric"


class NotBiorthogonal(BiorthoError):
    code = "not-biorthogonal"


class GSDegenerate(BiorthoError):
    code = "gs-degenerate"


class DepthExceeded(BiorthoError):
    code = "depth-exceeded"


class NotMinimal(BiorthoError):
    code = "not-minimal"


class ConditioningWarning(UserWarning):
    """Two exponential rates are close enough that split formulas lose digits."""

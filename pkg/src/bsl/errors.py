"""Exception types shared across the laboratory."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of the operation."""


class UndefinedBoundaryValue(ValueError):
    """Radial limit does not exist at the requested circle point."""


class DimensionMismatch(ValueError):
    """Operands carry incompatible truncation orders."""


class TruncationOverflow(ValueError):
    """Requested computation would push coefficients past the truncation."""


class PrecisionLoss(RuntimeError):
    """Numerical tolerance could not be met at the maximum grid size."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class NonvanishingRoot(ValueError):
    """Dividend does not vanish at the prescribed boundary root."""


class ContractViolation(ValueError):
    """Caller violated a documented precondition."""

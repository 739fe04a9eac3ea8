"""Exception types shared across the package."""


class GraphError(ValueError):
    """Malformed graph text or violated graph invariant (loop, multi-edge, bad degrees)."""


class DimensionError(ValueError):
    """Dimension or arity mismatch between polynomials, structures, or operators."""


class PresetError(ValueError):
    """Unknown Poisson preset name or invalid preset parameter."""


class BudgetExceededError(RuntimeError):
    """A configurable resource cap (vertex count, matrix size, order) was exceeded."""

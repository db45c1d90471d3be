"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class ContractError(ValueError):
    """An input violates a structural precondition (e.g. not skew-Hermitian)."""


class IntegrityError(RuntimeError):
    """A run left its manifold: unitarity or spectrum drifted past tolerance."""

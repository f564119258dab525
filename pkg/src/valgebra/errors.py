"""Exception types shared across the package."""


class ValgebraError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ValgebraError):
    """Operands live in incompatible ambient spaces or have wrong lengths."""


class NotFullDimensional(ValgebraError):
    """Operation requires a polytope whose affine hull is the ambient space."""


class NotAFace(ValgebraError):
    """The given face does not belong to the given polytope."""


class EmptyInput(ValgebraError):
    """An operation received an empty collection where at least one element is required."""


class DegenerateInput(ValgebraError):
    """Input violates a non-degeneracy precondition (zero volume, non-pointed cone, ...)."""

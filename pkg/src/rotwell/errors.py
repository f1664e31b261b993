"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the domain of a function (e.g. a point outside the well)."""


class FrameMismatchError(ValueError):
    """Two coefficient vectors expanded in different rotated frames were combined."""


class QuadratureError(ArithmeticError):
    """Composite quadrature failed its panel-doubling acceptance test."""


class TailBoundError(QuadratureError):
    """A semi-infinite cutoff could not push the truncated mass below tolerance."""

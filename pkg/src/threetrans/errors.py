"""Exception types shared across modules."""
from __future__ import annotations


class NonSymmetric(ValueError):
    pass


class MultiplicityMismatch(ValueError):
    pass


class NotInvolution(ValueError):
    pass


class UnsupportedRank(ValueError):
    pass


class UnsupportedShape(ValueError):
    pass


class UnsupportedFamily(ValueError):
    pass


class DegenerateForm(ValueError):
    pass


class TauMissing(ValueError):
    """Raised when an operation needs the third-point map but the space has none."""


class NotRegular(ValueError):
    pass


class RadicalNotIdeal(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class WrongSignMode(ValueError):
    pass


class RankTooSmall(ValueError):
    pass


class RangeError(ValueError):
    pass

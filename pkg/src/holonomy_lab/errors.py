"""Exception types raised by the validators and generators."""


class NotUmnError(ValueError):
    """X*X is not a positive multiple of the identity."""


class TrivialMatrixError(ValueError):
    """The matrix is (numerically) zero."""


class NotScalarError(ValueError):
    """X*Y is not a scalar multiple of the identity."""


class DimensionObstructionError(ValueError):
    """No real-independent flat partner exists for these block sizes."""


class DependentBasisError(ValueError):
    """Spanning set is linearly dependent over the reals."""

"""Exception types shared across the library."""


class ValidationError(ValueError):
    """Bad user-supplied parameters, detected before any computation."""


class NearEigenvalueError(RuntimeError):
    """Requested frequency is too close to the discrete spectrum."""

    def __init__(self, lam, nearest):
        self.lam = lam
        self.nearest = nearest
        super().__init__(
            f"frequency {lam} is within 1e-6 of eigenvalue {nearest}"
        )


class EigensolverError(RuntimeError):
    """The eigensolver failed to converge."""


class TruncationError(RuntimeError):
    """Series truncation tail exceeds the requested tolerance."""

    def __init__(self, tail, tol, required_k=None):
        self.tail = tail
        self.tol = tol
        self.required_k = required_k
        msg = f"truncation tail {tail:.3e} exceeds tolerance {tol:.3e}"
        if required_k is not None:
            msg += f" (roughly K={required_k} terms needed)"
        super().__init__(msg)


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

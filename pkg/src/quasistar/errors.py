"""Exception hierarchy shared by every module."""


class QuasiStarError(ValueError):
    """Base class for rejected inputs."""


class DimensionMismatch(QuasiStarError):
    pass


class InvariantViolation(QuasiStarError):
    """A structural invariant failed; carries the invariant name and residual."""

    def __init__(self, invariant, residual, detail=""):
        self.invariant = invariant
        self.residual = float(residual)
        msg = f"invariant '{invariant}' violated (residual {self.residual:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotRepresentable(QuasiStarError):
    """Raised when an operation needs a representable functional and did not get one."""

    def __init__(self, reason, eigenvalue=None):
        self.reason = reason
        self.eigenvalue = None if eigenvalue is None else float(eigenvalue)
        msg = reason
        if eigenvalue is not None:
            msg += f" (smallest eigenvalue {self.eigenvalue:.6g})"
        super().__init__(msg)


class SpecError(QuasiStarError):
    """Schema violation in a spec file; `field` names the offending entry."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")

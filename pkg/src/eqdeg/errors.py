"""Exception types shared across the toolkit."""


class DegreeError(Exception):
    """Base class for all toolkit-specific failures."""


class GroupMismatch(DegreeError):
    """Two ring elements over different groups were combined."""


class MultiplierMismatch(DegreeError):
    """Direct-limit classes built over different multiplier sequences."""


class NearSingular(DegreeError):
    """An operator block has an eigenvalue too close to zero."""


class DegenerateZero(DegreeError):
    """A located zero has a near-singular Hessian."""


class BoundaryZero(DegreeError):
    """Sampled |f| fell below threshold on the domain boundary."""


class ZeroOutsideFixedSpace(DegreeError):
    """A zero with a nontrivial normal component was detected; such
    orbits are outside the supported computation scope."""


class MarginFailure(DegreeError):
    """Tail bound did not certify below the boundary margin; raise the
    truncation level."""


class StabilizationFailure(DegreeError):
    """Corrected degrees at consecutive truncation levels disagree."""


class SliceMarginFailure(DegreeError):
    """A slice of an otopy path failed certification or broke constancy."""

    def __init__(self, t: float, message: str):
        self.t = t
        super().__init__(f"slice t={t:g}: {message}")


class AliasingRisk(DegreeError):
    """Quadrature size too small for the polynomial degree; Fourier
    projection would alias."""


class NoncompactZeroSet(DegreeError):
    """Boundary sampling found near-zeros, so the zero set cannot be
    assumed compact and the degree is not defined."""


class UnresolvedZeroCluster(DegreeError):
    """Grid refinement exhausted without separating candidate zeros."""


class InputError(DegreeError):
    """Malformed problem description."""

"""Exception hierarchy shared by every module."""


class AnnulusError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AnnulusError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class OutOfDomain(DomainError):
    """A profile was evaluated outside of its interval of definition."""


class InvalidProfile(AnnulusError, ValueError):
    """A radial profile violates one of its invariants."""


class InvalidMap(AnnulusError, ValueError):
    """A polar grid map violates one of its invariants."""


class NonPositiveJacobian(InvalidMap):
    """The discrete Jacobian is not positive at some grid node."""

    def __init__(self, node, t=None, theta=None, value=None):
        self.node = tuple(int(i) for i in node)
        self.t = t
        self.theta = theta
        self.value = value
        msg = f"non-positive Jacobian at node {self.node}"
        if t is not None:
            msg += f" (t={t:.6g}, theta={theta:.6g}, J={value:.3e})"
        super().__init__(msg)


class ClassViolation(InvalidMap):
    """Winding or boundary-order invariants of the homotopy class fail."""


class BelowNitsche(AnnulusError):
    """The annuli violate the Nitsche-type feasibility threshold."""

    def __init__(self, value, threshold, what="R"):
        self.value = value
        self.threshold = threshold
        self.what = what
        super().__init__(
            f"infeasible: {what}={value:.12g} is below the Nitsche threshold {threshold:.12g}"
        )


class InconsistentCertificate(AnnulusError):
    """A pointwise certificate contradicts a closed-form classification."""


class DegenerateJacobian(AnnulusError, ValueError):
    """A radial integrand divides by a vanishing Jacobian."""


class InversionFailure(AnnulusError):
    """A radial profile could not be inverted numerically."""


class StepFailure(AnnulusError):
    """The adaptive integrator could not meet its tolerance."""


class NegativeSlope(AnnulusError):
    """An Euler-Lagrange trajectory lost monotonicity."""


class BracketFailure(AnnulusError):
    """The shooting bracket could not be expanded around the target."""


class SingularStart(DomainError):
    """The reduced first-order equation is singular at the requested start."""


class PreconditionUnmet(AnnulusError):
    """A verifier was called on an instance outside its hypotheses."""


class RegimeMismatch(AnnulusError):
    """The requested proof branch does not match the minimizer's regime."""


class CertificateUnavailable(AnnulusError):
    """No lower-bound certificate applies to this instance."""


class CannotSatisfyJacobian(AnnulusError):
    """A perturbed competitor stayed non-invertible after all retries."""

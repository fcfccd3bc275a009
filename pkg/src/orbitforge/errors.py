"""Exception types shared across the package."""


class OrbitForgeError(Exception):
    """Base class for domain errors."""


class DimensionMismatch(OrbitForgeError):
    pass


class InvariantViolation(OrbitForgeError):
    """Input breaks a structural invariant (group membership, skewness, ...)."""


class MembershipError(OrbitForgeError):
    """A vector or map is outside the required subspace or domain."""


class UnsupportedLeaf(OrbitForgeError):
    """Classification reached a little-group case outside the implemented set."""


class UnknownSuite(OrbitForgeError):
    pass


class VerificationFailure(OrbitForgeError):
    """An identity that the theory guarantees failed to hold exactly.

    Raised instead of silently accepting a result; seeing this means a bug,
    not a bad input.
    """

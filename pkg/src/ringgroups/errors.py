"""Exception hierarchy shared by every module."""


class RingGroupsError(Exception):
    """Base class for all library errors."""


class RingMismatch(RingGroupsError):
    pass


class InvalidRing(RingGroupsError):
    """A ring descriptor failed validation (bad modulus, forbidden nesting, ...)."""


class InvalidElement(RingGroupsError):
    pass


class UndecidableError(RingGroupsError):
    """The requested decision (ideal membership, unit test, ...) is not supported
    for this member of the ring tower."""


class NotAUnit(RingGroupsError):
    pass


class DimensionMismatch(RingGroupsError):
    pass


class MembershipError(RingGroupsError):
    """A matrix is not in the group (or congruence subgroup) an operation needs."""


class PreconditionError(RingGroupsError):
    """Generic contract violation of an algorithm's precondition."""


class IsometryError(RingGroupsError):
    """A transvection formula does not preserve the form it is defined against."""


class SizeGuardExceeded(RingGroupsError):
    pass


class ParseError(RingGroupsError):
    pass

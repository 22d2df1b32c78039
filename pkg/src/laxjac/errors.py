"""Exception hierarchy.

Every numerical failure raised by the library derives from :class:`LaxJacError`
so callers (and the command line front end) can catch the whole family at once.
The class name is the error's public identifier and is what the CLI reports.
"""


class LaxJacError(Exception):
    """Base class for all numerical failures."""


# matpoly
class NonzeroRemainder(LaxJacError):
    pass


class IllConditioned(LaxJacError):
    pass


class NotDiagonalizable(LaxJacError):
    pass


# pendulum
class ConstraintViolation(LaxJacError):
    pass


class RelationViolation(LaxJacError):
    pass


# flows
class StepFailure(LaxJacError):
    """Adaptive stepping broke down; ``t_fail`` records where."""

    def __init__(self, message, t_fail=None):
        super().__init__(message)
        self.t_fail = t_fail


# curves
class ContourTooClose(LaxJacError):
    pass


class AGMNonconvergence(LaxJacError):
    pass


class NormalizationFailure(LaxJacError):
    pass


class PathThroughBranchPoint(LaxJacError):
    pass


class DegenerateDivisor(LaxJacError):
    pass


class SingularCurveError(LaxJacError):
    """An operation that needs a smooth curve was handed a singular one."""


# jacobian
class RankDeficientLattice(LaxJacError):
    pass


class DivisorDegeneracy(LaxJacError):
    pass


class DegenerateTau(LaxJacError):
    pass


# monodromy
class BranchCollision(LaxJacError):
    pass


class NonIntegerMonodromy(LaxJacError):
    pass


class NoRealTorus(LaxJacError):
    pass


class IntegerRelationFailure(LaxJacError):
    pass

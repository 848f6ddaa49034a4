"""Exception hierarchy shared by every module of the lab."""


class LabError(Exception):
    """Base class for all lab errors."""


class StrictNotATopology(LabError):
    pass


class CapExceeded(LabError):
    pass


class ShapeMismatch(LabError):
    pass


class NotInvertible(LabError):
    pass


class NotPairwiseContinuous(LabError):
    pass


class InternalEquivalenceViolation(LabError):
    """Two formulations that must agree did not; always a coding bug."""


class OracleDisagreement(LabError):
    """Characterization and bounded oracle returned different verdicts."""


class SearchTimeout(LabError):
    pass


class ParseError(LabError):
    pass


class PredicateError(LabError):
    pass

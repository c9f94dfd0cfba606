from enum import Enum


class LpStatus(str, Enum):
    """Outcome of a linear program"""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class ElementKind(str, Enum):
    """Type of a measurement element B_y in a projection family"""
    ZERO = "zero"
    IDENTITY = "identity"
    RANK_ONE = "rank1"
    GENERAL = "general"


class ReportFormat(str, Enum):
    """Report rendering selector"""
    HUMAN = "human"
    STRUCTURED = "structured"

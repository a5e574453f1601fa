# Robust binary hypothesis testing on finite alphabets
# Copyright (c) 2024
# robustht developers
# All rights reserved.

class RobustHTError(Exception):
    """Base exception for robustht errors"""
    pass

class DistributionError(RobustHTError):
    """Invalid probability vector (negative mass, bad normalization, empty)"""
    pass

class AlphabetMismatch(DistributionError):
    """Two distributions live on alphabets of different size"""
    pass

class SetsOverlap(RobustHTError):
    """The two uncertainty sets intersect, so no robust test exists

    Attributes
    ----------
        condition: :obj:`str`
            The separation condition that failed, in human-readable form.
    """

    def __init__(self, condition: str) -> None:
        super().__init__(f"sets overlap: {condition}")
        self.condition = condition

class NoFiniteClip(RobustHTError):
    """A Huber or TV calibration equation has no root off the unit ratio"""
    pass

class MembershipError(RobustHTError):
    """A distribution is not in the uncertainty set it was declared to be in"""
    pass

class InvalidSymbol(RobustHTError):
    """A sample contains a symbol no test statistic is defined on"""
    pass

class StateSpaceExceeded(RobustHTError):
    """Exact enumeration would visit more count vectors than allowed"""
    pass

class BudgetExhausted(RobustHTError):
    """Sample-size search reached its upper limit without meeting the target"""
    pass

class ConditionNotMet(RobustHTError):
    """The activation condition of an asymptotic result does not hold at the requested parameters"""
    pass

class InvariantViolation(RobustHTError):
    """An internal numerical invariant failed"""
    pass

class ConfigError(RobustHTError):
    """Malformed experiment configuration"""
    pass

__ERROR_CLASSES__ = {
    "DistributionError": DistributionError,
    "AlphabetMismatch": AlphabetMismatch,
    "SetsOverlap": SetsOverlap,
    "NoFiniteClip": NoFiniteClip,
    "MembershipError": MembershipError,
    "InvalidSymbol": InvalidSymbol,
    "StateSpaceExceeded": StateSpaceExceeded,
    "BudgetExhausted": BudgetExhausted,
    "ConditionNotMet": ConditionNotMet,
    "InvariantViolation": InvariantViolation,
    "ConfigError": ConfigError
}

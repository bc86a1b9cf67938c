"""Exception types shared across the package."""


class SeqcoverError(Exception):
    """Base class for errors raised by this package."""


class DomainError(SeqcoverError):
    """A feature lies outside the domain a hypothesis class is defined on."""


class UnknownHypothesisError(SeqcoverError):
    """A hypothesis id does not index a member of the class."""


class UnrealizableLabelsError(SeqcoverError):
    """A labelling was supplied that no hypothesis in the class produces."""


class EnumerationInfeasibleError(SeqcoverError):
    """Behavior enumeration is not available for this class/sample."""


class ComplexityBudgetError(SeqcoverError):
    """A brute-force complexity computation exceeded its size gate."""


class SubstitutionError(SeqcoverError):
    """No valid substitution prediction exists (mixability violated)."""

"""Exception types shared across gtlab."""


class ParameterError(ValueError):
    """Invalid dimensions, weights, item indices or flags."""


class DomainError(ValueError):
    """A numeric argument lies outside the domain of a rate formula."""


class CapacityError(RuntimeError):
    """An enumeration would exceed its configured size limit."""


class EdgeCapExceeded(CapacityError):
    """Candidate hypergraph enumeration produced more edges than allowed."""

"""Exception types shared across the solver."""


class DomainError(ValueError):
    """A parameter or query lies outside the domain of an operation."""


class UnsupportedRegimeError(DomainError):
    """The requested parameters fall in a regime the solver does not cover.

    Raised by the planner when ``a + b <= 1``: the optimal policy derived here
    assumes minus boxes are strictly more attractive than plus boxes.
    """


class GuardError(ValueError):
    """A combinatorial size guard was exceeded; the request is refused."""

"""Exception and warning types shared across the package."""


class BeanledgerError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BeanledgerError, ValueError):
    """An input value violates a documented invariant.

    The message always names the offending field and the bound it broke.
    """


class InfeasiblePlanError(ValidationError):
    """An allocation plan asks a stage to hand out more mass than it has."""


class CaseNotFoundError(ValidationError):
    """Requested case id is not in the built-in catalog."""


class InfeasibleError(BeanledgerError):
    """A requested computation has no feasible answer (distinct from bad input)."""


class InfeasibleBreakevenError(InfeasibleError):
    """No breakeven exists for the requested axis under the given plan."""


class ConfigError(BeanledgerError):
    """Configuration file or request payload cannot be parsed or contains unknown fields."""


class WastedAllocationWarning(UserWarning):
    """Mass was routed to a market that does not buy that product (price 0)."""

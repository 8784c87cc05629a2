"""Exception types and size budgets shared across the engine."""

import os


class ToposError(Exception):
    """Base class for all engine errors."""


class MissingComposite(ToposError):
    pass


class AssociativityViolation(ToposError):
    pass


class IdentityViolation(ToposError):
    pass


class BaseMismatch(ToposError):
    pass


class NaturalityViolation(ToposError):
    pass


class FunctorLawViolation(ToposError):
    pass


class SizeBudgetExceeded(ToposError):
    def __init__(self, what, size, limit):
        self.what = what
        self.size = size
        self.limit = limit
        super().__init__(f"{what}: {size} elements exceeds budget {limit}")


class EquivarianceViolation(ToposError):
    pass


class UnknownObject(ToposError):
    pass


class ModelFormatError(ToposError):
    """Malformed input file (JSON shape, unknown keys, bad references)."""


DEFAULT_STAGE_BUDGET = 10**6


def stage_budget():
    """Per-stage element budget; TOPOSBENCH_BUDGET overrides the default.

    The budget guards every materialized stage carrier (exponentials, omega,
    products, closure results), never truncating silently.
    """
    raw = os.environ.get("TOPOSBENCH_BUDGET")
    if raw is None:
        return DEFAULT_STAGE_BUDGET
    return int(raw)


def check_budget(what, size, limit=None):
    limit = stage_budget() if limit is None else limit
    if size > limit:
        raise SizeBudgetExceeded(what, size, limit)

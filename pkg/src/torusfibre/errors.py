"""Exception hierarchy shared by all modules."""


class TorusFibreError(Exception):
    """Base class for all library errors."""


class FieldMismatchError(TorusFibreError, TypeError):
    """Operands live in different coefficient fields."""


class FieldExtensionRequired(TorusFibreError):
    """A root (of unity, or of a coefficient) is missing from the working field."""

    def __init__(self, order, what=None):
        self.order = order
        if what is None:
            msg = (f"primitive root of unity of order {order} is not in the working field; "
                   f"use a cyclotomic field whose order is divisible by {order}")
        else:
            msg = f"{what} is not in the working field"
        super().__init__(msg)


class NonMonomialLeading(TorusFibreError, ValueError):
    """Leading form has more than one monomial where a single one is required."""


class NoLeadingForm(TorusFibreError, ValueError):
    """The series is zero down to its floor."""


class DivisibilityError(TorusFibreError, ValueError):
    """Exponents of the leading monomial are not divisible by the root index."""


class PrecisionError(TorusFibreError, ValueError):
    """An exact element needs an explicit truncation floor for this operation."""


class TorusError(TorusFibreError, ValueError):
    """Base point is not on a torus of radius > 1."""


class NonProportionalLeading(TorusFibreError):
    """Leading exponents of the residual are not proportional to those of g."""


class GcdObstruction(TorusFibreError):
    """The reduction ratio has a denominator not dividing both exponents of g."""


class HenselPreconditionError(TorusFibreError):
    """Jacobian at the seed is not a unit of the valuation ring."""


class SeedError(TorusFibreError):
    """Seed residual is not in the maximal ideal."""


class ConvergenceError(TorusFibreError):
    """Newton iteration did not reach the requested budget within the guard."""

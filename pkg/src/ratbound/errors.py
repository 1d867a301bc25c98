"""Exception types shared across the package.

The CLI maps these onto exit codes: plain ``ValueError`` (and argparse
failures) exit 2, :class:`MathDomainError` exits 3, and
:class:`NumericalFailure` exits 4.
"""


class MathDomainError(ValueError):
    """The requested quantity is mathematically undefined for this input."""


class IndeterminateMapError(MathDomainError):
    """Operation applied to a map on the indeterminacy locus."""


class ExceptionalPointError(MathDomainError):
    """Backward-orbit sampling started at an exceptional point."""


class NumericalFailure(RuntimeError):
    """A tolerance-dependent step could not be resolved unambiguously."""

"""Exception hierarchy shared by all modules.

Every error carries a stable ``kind`` string (its class name) so the CLI can
render machine-readable ``ERROR:<kind>:`` diagnostics.
"""


class AxisSpaceError(Exception):
    """Base class for all library errors."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class DimensionMismatch(AxisSpaceError):
    """Vectors or subspaces with incompatible ambient dimensions."""


class FieldMismatch(AxisSpaceError):
    """Operands constructed over different field contexts."""


class NotPrime(AxisSpaceError):
    """Prime-field modulus that is not a prime number."""


class NotInF(AxisSpaceError):
    """Element outside the span of the distinguished subspaces (has a free part)."""


class NotOnAxis(AxisSpaceError):
    """Element is zero or not a member of the distinguished union X."""


class BadDescriptor(AxisSpaceError):
    """Model descriptor whose data is inconsistent or unusable."""


class FragmentExhausted(AxisSpaceError):
    """A fragment model cannot supply the requested fresh axis or coordinate."""


class NoGenericWitness(AxisSpaceError):
    """No single element of the subspace meets every axis (finite-field failure)."""


class NotQfEquivalent(AxisSpaceError):
    """Tuples whose quantifier-free invariants differ."""


class TargetNotRich(AxisSpaceError):
    """The target model cannot supply the fresh material a back-and-forth step needs."""


class NotSameType(AxisSpaceError):
    """Elements that do not realize the same type over the fragment."""


class FieldNotInfinite(AxisSpaceError):
    """Operation requires an infinite scalar field."""


class FieldNotFinite(AxisSpaceError):
    """Operation requires a finite scalar field."""


class ArityMismatch(AxisSpaceError):
    """Tuple or coefficient-vector lengths disagree."""


class NotQuantifierFree(AxisSpaceError):
    """Formula contains a quantifier where a quantifier-free one is required."""


class UnboundSymbol(AxisSpaceError):
    """Evaluation environment does not cover a free variable or constant."""


class FormulaSyntaxError(AxisSpaceError):
    """Formula text that does not parse; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ContextFormatError(AxisSpaceError):
    """Model-context file that does not conform to the documented schema."""


class FreeSymbolsPresent(AxisSpaceError):
    """Sentence decision invoked on a formula with free symbols."""

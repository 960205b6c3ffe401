"""Exception types raised by the library.

Everything derives from EqvError so callers can catch library failures
wholesale; the CLI maps subclasses onto its exit-code contract.
"""


class EqvError(Exception):
    pass


class DegreeMismatch(EqvError):
    """Permutations of different degrees were combined."""


class OrderCapExceeded(EqvError):
    """Group closure grew past the configured order cap."""


class PointOutOfRange(EqvError):
    """A point index is not inside the acted-on set."""


class NotASubgroup(EqvError):
    """A member set is not a subgroup of the stated parent group."""


class GroupMismatch(EqvError):
    """Two actions of different groups were combined."""


class LatticeCapExceeded(EqvError):
    """Group order exceeds the cap for subgroup-lattice enumeration."""


class DimensionMismatch(EqvError):
    """Vector length does not match the number of subgroup classes."""


class NonIntegralDecomposition(EqvError):
    """A mark vector does not decompose into integer multiplicities."""


class NegativeMultiplicity(EqvError):
    """A mark vector decomposes with a negative multiplicity."""


class UnfaithfulAction(EqvError):
    """The coset action of this subgroup class has a non-trivial kernel."""


class SizeCapExceeded(EqvError):
    """An explicit product G-set would exceed the point-count cap."""


class StabilizerNotInLattice(EqvError):
    """Internal failure: an orbit stabilizer matched no lattice class."""


class RangeError(EqvError):
    """Argument outside the supported range of a combinatorial table."""


class NotTransitive(EqvError):
    """Kernel form requires transitive input and output actions."""


class LengthMismatch(EqvError):
    """Parameter vector length does not match the sharing pattern."""


class ShapeMismatch(EqvError):
    """Array shape does not match the actions or network layers."""


class UnfaithfulInput(EqvError):
    """Network construction requires a faithful input action."""


class TargetNotEquivariant(EqvError):
    """The training target fails the equivariance commutation check."""

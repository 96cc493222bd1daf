"""Exception types shared across the toolkit."""


class FovError(Exception):
    """Base class for all toolkit errors."""


class InvalidPermutation(FovError):
    """Image list is not a bijection on the stated point set."""


class OrderCapExceeded(FovError):
    """Group enumeration grew past the configured element cap."""


class NotASubgroup(FovError):
    """Residue set is not a subgroup of the unit group."""


class ModulusMismatch(FovError):
    """Cyclotomic values of different moduli combined without embedding."""


class NonCoprimeResidue(FovError):
    """Galois residue not coprime to the cyclotomic modulus."""


class NonCoprimeModuli(FovError):
    """CRT components have non-coprime moduli."""


class EigenspaceSplitFailure(FovError):
    """Class-sum matrices failed to split to one-dimensional eigenspaces."""


class LiftOutOfRange(FovError):
    """Root-of-unity multiplicity lifted outside [0, degree]; table bug."""


class RowMatchFailure(FovError):
    """A Galois-twisted character row has no match in the table; table bug."""


class HypothesesNotMet(FovError):
    """Construction preconditions (witness prime, non-rational field) fail."""


class UnknownSuite(FovError):
    """Requested check suite id is not registered."""


class ParseError(FovError):
    """Group file rejected, with field/position diagnostics in the message."""


class HashMismatch(FovError):
    """Verdict cache holds conflicting records for the same key."""

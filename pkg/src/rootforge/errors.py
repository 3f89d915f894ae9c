"""Exception types.

Every error carries a stable class name so callers (and the CLI) can react
to a specific failure.  ``category`` selects the CLI exit code.
"""


class RootforgeError(Exception):
    category = "math"


class InputError(RootforgeError):
    """Malformed input: bad graph data, bad expression, bad format."""

    category = "usage"


class NotATree(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class SelfLoop(InputError):
    pass


class InvalidFraction(InputError):
    pass


class NotCoprime(InputError):
    pass


class UnsupportedFormat(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class ExpressionSyntaxError(InputError):
    """Parse failure with a 1-based position and what the parser wanted."""

    def __init__(self, line, column, expected, text=""):
        self.line = line
        self.column = column
        self.expected = expected
        msg = f"line {line}, column {column}: expected {expected}"
        if text:
            msg += f" in {text!r}"
        super().__init__(msg)


class NoSolution(RootforgeError):
    pass


class NotNegativeDefinite(RootforgeError):
    pass


class OrbitMismatch(RootforgeError):
    pass


class NotSelfConjugate(RootforgeError):
    pass


class NonMonotoneParams(RootforgeError):
    pass


class ParityMismatch(RootforgeError):
    pass


class NotSymmetric(RootforgeError):
    pass


class InvalidRoot(RootforgeError):
    pass


class NotAComplex(RootforgeError):
    pass


class GradingViolation(RootforgeError):
    pass


class NotEquivariant(RootforgeError):
    pass


class NotAnInvolution(RootforgeError):
    pass


class LocalizedRankViolation(RootforgeError):
    pass


class MixedOrientationNotAllowedHere(RootforgeError):
    pass


class HypothesesNotMet(RootforgeError):
    pass


class ARUndetermined(RootforgeError):
    pass


class CertificationFailed(RootforgeError):
    """The fibered lattice engine could not certify its own shortcut."""


class CrossCheckMismatch(RootforgeError):
    category = "crosscheck"

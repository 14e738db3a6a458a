"""Exception hierarchy shared by the library and the CLI.

Each error carries the CLI exit code it maps to, so the command-line
driver can translate any library failure without a lookup table.
"""


class WZAccelError(Exception):
    exit_code = 1


# -- exact arithmetic -------------------------------------------------------

class ZeroDenominator(WZAccelError, ZeroDivisionError):
    exit_code = 2


class VariableMismatch(WZAccelError, ValueError):
    exit_code = 3


class NoSolution(WZAccelError):
    """Inconsistent linear system."""


# -- hypergeometric terms ---------------------------------------------------

class NotSimilar(WZAccelError):
    """Two terms whose quotient is not a rational function."""


class NonIntegerSubstitution(WZAccelError, ValueError):
    exit_code = 3


class ZeroTerm(WZAccelError):
    exit_code = 2


# -- WZ pairs ---------------------------------------------------------------

class NotSimilarPair(NotSimilar):
    pass


class NoHypergeometricAntidifference(WZAccelError):
    pass


# -- evaluation -------------------------------------------------------------

class UndefinedTerm(WZAccelError):
    exit_code = 2


class NoConvergenceDetected(WZAccelError):
    exit_code = 2


class Inapplicable(WZAccelError):
    exit_code = 2


# -- files ------------------------------------------------------------------

class PairFormatError(WZAccelError, ValueError):
    exit_code = 3

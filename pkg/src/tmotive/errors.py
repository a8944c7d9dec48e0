"""Exception types shared across the package."""


class TMotiveError(Exception):
    """Base class for all domain errors raised by tmotive."""


class NotInvertible(TMotiveError):
    """Attempted to invert zero in a field or a residue class with a common factor."""


class NotIrreducible(TMotiveError):
    """A modulus that must be irreducible failed the irreducibility test."""


class ZeroLeadingTerm(TMotiveError):
    """Laurent series indistinguishable from zero at its precision cannot be inverted."""


class BadLeadingCoeff(TMotiveError):
    """Drinfeld coefficient a_r must be a nonzero constant for everywhere good reduction."""


class RankOverflow(TMotiveError):
    """Tensor construction exceeded the configured rank cap."""


class DescentFailure(TMotiveError):
    """An Euler factor coefficient failed to descend to F_q[t]; signals a bug or bad input."""


class BadReduction(TMotiveError):
    """A sigma-matrix denominator vanishes at the requested place."""


class NotEffective(TMotiveError):
    """det(Sigma) is not of the form alpha*(t-theta)^n with alpha a nonzero constant."""


class NotFinitelyGenerated(TMotiveError):
    """A Newton slope is >= 0, so the module is not finitely generated over K[tau]."""


class Divergent(TMotiveError):
    """The requested Euler product (or series evaluation) does not converge."""


class PolicyExhausted(TMotiveError):
    """Empirical truncation did not stabilize within the allowed degree budget."""


class SylvesterSingular(TMotiveError):
    """The exp-coefficient linear system is singular; the t-module invariants are violated."""


class DegreeExceeded(TMotiveError):
    """Polynomial part of a point exceeds the allowed degree bound."""


class DegreeCapExceeded(TMotiveError):
    """Skew reduction did not terminate within the configured degree cap."""


class LogDivergent(TMotiveError):
    """log_E diverges at the supplied point."""


class DimensionMismatch(TMotiveError):
    """Number of supplied points does not match dim W_E."""


class ConfigError(TMotiveError):
    """Invalid run configuration."""


class CheckpointMismatch(TMotiveError):
    """Checkpoint file does not match the current run configuration."""

"""Exception types shared across the library."""


class CatAflError(Exception):
    """Base class for all errors raised by this package."""


# --- matrix primitives ---

class NonHermitian(CatAflError):
    """Matrix deviates from its adjoint beyond tolerance."""


class NegativeSpectrum(CatAflError):
    """Eigenvalue below the clipping band of an assumed-positive matrix."""


class BadTrace(CatAflError):
    """Trace of a density matrix is not 1 within tolerance."""


class BadDistribution(CatAflError):
    """Probability vector has negative entries or does not sum to 1."""


# --- classical map ---

class NotHyperbolic(CatAflError):
    """Cat matrix trace <= 2; Lyapunov/KS quantities undefined."""


# --- quantization ---

class NonPositiveModulus(CatAflError):
    """Gauss average requires a positive modulus."""


class NotCoprime(CatAflError):
    """Gauss average requires coprime leading coefficient and modulus."""


class NonIntegerGaussArgument(CatAflError):
    """Gauss average arguments must be integers."""


class NonUnitaryQuantization(CatAflError):
    """Quantization formula produced a non-unitary matrix for this (A, N)."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


# --- symmetry ---

class IncompatibleDimension(CatAflError):
    """Symmetry order does not divide the Hilbert space dimension."""


class OddDimension(CatAflError):
    """Inversion operator requires even dimension."""


class NotNormal(CatAflError):
    """Operator does not commute with its adjoint within tolerance."""


class NotAnticommuting(CatAflError):
    """Pseudospin frame requires an exactly anticommuting unitary."""


class UnpairedPhase(CatAflError):
    """An eigenphase lacks a partner at phase + pi within tolerance."""


class BadDimensions(CatAflError):
    """Algebra decomposition preconditions on (N, s) not met."""


# --- partitions ---

class BadRank(CatAflError):
    """Requested partition size exceeds the available dimension."""


class EmptySector(CatAflError):
    """Charge decomposition contains an empty sector."""


# --- entropy engine ---

class BadDensityMatrix(CatAflError):
    """Input is not a valid density matrix."""


class TraceDrift(CatAflError):
    """Trace drifted beyond tolerance before renormalization."""


class DimensionMismatch(CatAflError):
    """Operator dimensions do not match the evolving state."""


class OracleTooLarge(CatAflError):
    """Environment-state oracle would exceed the configured size cap."""


class WindowTooLarge(CatAflError):
    """Rate-estimate window exceeds the available trace length."""

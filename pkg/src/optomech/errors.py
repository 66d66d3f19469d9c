"""Structured error types shared by all simulation modules."""


class SimulationError(Exception):
    """Base class for all structured simulation failures."""


class StepFailure(SimulationError):
    """Adaptive step size underflowed; the problem is stiff or diverging."""


class Diverged(SimulationError):
    """A state magnitude exceeded the overflow guard during integration."""


class SingularDenominator(SimulationError):
    """A resonant denominator vanished; the closed form is invalid there."""


class DegenerateExponents(SimulationError):
    """Two Laplace exponents coincide; partial fractions are not applicable."""


class NotStable(SimulationError):
    """The drift matrix is not Hurwitz; no steady state exists."""


class Unphysical(SimulationError):
    """A symplectic eigenvalue dropped below the vacuum bound 1/2."""


class NonPhysical(SimulationError):
    """A covariance matrix failed a physicality requirement of a measure."""


class NonPositive(SimulationError):
    """A matrix that must be positive definite is not."""


class SingularCM(SimulationError):
    """Covariance matrix is numerically singular; Wigner density undefined."""


class Singular(SimulationError):
    """Linear system has no reliable solution (pivot underflow)."""


class NoConvergence(SimulationError):
    """An iterative kernel hit its iteration cap."""

"""
Exception hierarchy for the co-jump simulator
"""


class CoJumpError(Exception):
    """Base class for every error raised by this package."""


# Configuration

class ConfigurationError(CoJumpError):
    """Invalid settings, run configuration or model parameters."""


class PopulationCapExceeded(ConfigurationError):
    """A source compartment or binomial order exceeds the configured cap."""


class UnsupportedGamma(ConfigurationError):
    """Cross-immunity gamma != 0 requested together with environmental noise."""


class InsufficientReplicates(ConfigurationError):
    """A Monte Carlo routine was asked to run below its minimum replicate count."""


# System state

class SystemStateError(CoJumpError):
    """Invalid state or transition reference."""


class NegativeOccupancy(SystemStateError):
    """Applying a jump would drive a compartment below zero."""


class UnknownTransition(SystemStateError):
    """Transition is not part of the system."""


# Rates

class RateError(CoJumpError):
    """Rate evaluation failed."""


class RateOverflow(RateError):
    """A family total rate is not finite."""


class InvalidJumpSize(RateError):
    """Requested jump size is outside the admissible range."""


class PrecisionLoss(RateError):
    """Cancellation error could not be brought under the tolerance."""


# Simulation

class AbsorbedState(CoJumpError):
    """Total rate is zero: no further events can occur. Signals the end of a path."""


class SimulationError(CoJumpError):
    """Simulation could not be completed."""


class EventBudgetExceeded(SimulationError):
    """A trajectory produced more events than the configured budget."""


# Estimation

class EstimationError(CoJumpError):
    """Moment estimation, quadrature or bound check failed."""


class StepTooLarge(EstimationError):
    """Time step is outside the small-step regime lambda(x) * h <= 0.1."""


class QuadratureFailure(EstimationError):
    """Adaptive quadrature did not reach the requested tolerance."""


class BoundViolated(EstimationError):
    """The rate function exceeded its static bound."""

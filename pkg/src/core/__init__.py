"""
Core system types and base classes for rate families, parsers, exporters and suites
"""

from .base_family import BaseRateFamily
from .base_parser import BaseParser
from .base_exporter import BaseExporter
from .base_suite import BaseSuite, CheckResult
from .system import (
    CompartmentId,
    CountVector,
    JumpEvent,
    StateVector,
    SystemSpec,
    TransitionType,
    apply_jump,
    marginal_rate,
    rate_function,
)

__all__ = [
    'BaseRateFamily', 'BaseParser', 'BaseExporter', 'BaseSuite', 'CheckResult',
    'CompartmentId', 'CountVector', 'JumpEvent', 'StateVector', 'SystemSpec',
    'TransitionType', 'apply_jump', 'marginal_rate', 'rate_function',
]

"""
Utilities module for ESSI
"""

from .logger import get_logger, setup_logging
from .config import ESSIConfig, config
from .errors import (
    EssiError,
    ParameterError,
    CombinatoricsError,
    CouplingError,
    SectorTooLargeError,
    EigenSolverError,
    ReportError,
)

__all__ = [
    'get_logger',
    'setup_logging',
    'ESSIConfig',
    'config',
    'EssiError',
    'ParameterError',
    'CombinatoricsError',
    'CouplingError',
    'SectorTooLargeError',
    'EigenSolverError',
    'ReportError',
]

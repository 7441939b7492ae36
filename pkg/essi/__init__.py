"""
ESSI - Equal Spin-Spin Interaction spectra
Closed-form and numerical spectra of n spin-1/2 particles with uniform
pairwise couplings in a static field.
"""

__version__ = "1.0.0"
__author__ = "ESSI Team"

from .core.basis import EssiParams, Sector, BasisState, PairConvention
from .core.closed_form import sector_closed_spectrum, full_closed_spectrum
from .core.verifier import verify_up_to
from .core.transitions import stick_spectrum, merge_lines
from .core.report_generator import ReportGenerator
from .utils.logger import get_logger

__all__ = [
    'EssiParams',
    'Sector',
    'BasisState',
    'PairConvention',
    'sector_closed_spectrum',
    'full_closed_spectrum',
    'verify_up_to',
    'stick_spectrum',
    'merge_lines',
    'ReportGenerator',
    'get_logger'
]

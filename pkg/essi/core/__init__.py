"""
Core module for ESSI
"""

from .basis import (
    EssiParams, Sector, BasisState, PairConvention,
    binomial, rank_subset, unrank_subset, magnetization, sector_basis,
)
from .couplings import PairCouplings, average_couplings, essi_parameters_from_pairs
from .closed_form import (
    ClosedFormSpectrum, sector_closed_spectrum, full_closed_spectrum,
    flipflop_level, flipflop_degeneracy, distinct_eigenvalue_count,
)
from .engine import build_sector_adjacency, flipflop_block, symmetric_eigen, sector_spectrum
from .verifier import VerificationReport, verify_sector, verify_up_to, check_five_spin_fixtures
from .transitions import Population, SpectralLine, stick_spectrum, merge_lines
from .report_generator import ReportGenerator

__all__ = [
    'EssiParams',
    'Sector',
    'BasisState',
    'PairConvention',
    'binomial',
    'rank_subset',
    'unrank_subset',
    'magnetization',
    'sector_basis',
    'PairCouplings',
    'average_couplings',
    'essi_parameters_from_pairs',
    'ClosedFormSpectrum',
    'sector_closed_spectrum',
    'full_closed_spectrum',
    'flipflop_level',
    'flipflop_degeneracy',
    'distinct_eigenvalue_count',
    'build_sector_adjacency',
    'flipflop_block',
    'symmetric_eigen',
    'sector_spectrum',
    'VerificationReport',
    'verify_sector',
    'verify_up_to',
    'check_five_spin_fixtures',
    'Population',
    'SpectralLine',
    'stick_spectrum',
    'merge_lines',
    'ReportGenerator'
]

"""Numerical laboratory for weighted composition operators on the Dirichlet space."""

from .series import TruncatedSeries
from .spaces import BERGMAN, DIRICHLET, HARDY
from .operators import OperatorMatrix, wco_matrix
from .numrange import RegionSpec, numerical_range_boundary
from .theorems import Scenario, ScenarioReport, run_scenario

__version__ = '0.1.0'

__all__ = [
    'TruncatedSeries',
    'DIRICHLET',
    'HARDY',
    'BERGMAN',
    'OperatorMatrix',
    'wco_matrix',
    'RegionSpec',
    'numerical_range_boundary',
    'Scenario',
    'ScenarioReport',
    'run_scenario',
]

"""
Core functionality for ADCodes
"""

__version__ = "1.0.0"

from .codeset import CodeSet, CodeWord, ConflictMode, validate_code_set
from .config_manager import AppConfig, ConfigManager
from .search import SearchConfig, SearchResult, SearchStrategy, search
from .recovery import RecoveryChannel, build_recovery
from .analysis import FidelityCurve, ResidualReport, fidelity_curve, first_order_residuals

__all__ = [
    'CodeSet', 'CodeWord', 'ConflictMode', 'validate_code_set',
    'AppConfig', 'ConfigManager',
    'SearchConfig', 'SearchResult', 'SearchStrategy', 'search',
    'RecoveryChannel', 'build_recovery',
    'FidelityCurve', 'ResidualReport', 'fidelity_curve', 'first_order_residuals',
]

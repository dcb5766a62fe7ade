"""
Terminal output components for ADCodes
"""

from .display_utils import DisplayUtils
from .svg_plot import fidelity_svg

__all__ = ['DisplayUtils', 'fidelity_svg']

"""
Error taxonomy for ADCodes
"""

from typing import Any, Optional


class ADCodesError(Exception):
    """Base class for all ADCodes errors"""


class WordError(ADCodesError, ValueError):
    """Bad word, bitstring or word length"""


class CodeSetError(ADCodesError, ValueError):
    """A code set failed validation where a valid one is required"""

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message)
        self.report = report


class ResourceLimitError(ADCodesError, ValueError):
    """A configured size cap was exceeded"""


class DimensionMismatchError(ADCodesError, ValueError):
    """Operands have incompatible dimensions"""


class NotHermitianError(ADCodesError, ValueError):
    """Matrix is not Hermitian within tolerance"""


class NotPositiveSemidefiniteError(ADCodesError, ValueError):
    """Matrix has a genuinely negative eigenvalue"""


class ChannelError(ADCodesError, ValueError):
    """Bad channel parameters or a malformed channel"""


class RecoveryConstructionError(ADCodesError, AssertionError):
    """Internal consistency failure while building a recovery"""


class InvalidStateError(ADCodesError, ValueError):
    """Density matrix with bad trace or shape"""

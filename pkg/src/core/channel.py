"""
Amplitude-damping channel as explicit Kraus elements
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from .codeset import popcount, to_bitstring
from .exceptions import ChannelError, DimensionMismatchError, ResourceLimitError
from .linalg import (
    EIGEN_CLAMP,
    DensityMatrix,
    SparseOperator,
    TRACE_TOL,
    is_hermitian,
    operator_sum_deviation,
)


logger = logging.getLogger("adcodes.channel")

DEFAULT_SIMULATION_MAX_QUBITS = 12


def check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 <= gamma <= 1.0 or math.isnan(gamma):
        raise ChannelError(f"Damping probability must lie in [0, 1], got {gamma}")
    return gamma


@dataclass(frozen=True)
class ChannelParams:
    """Damping probability and qubit count"""
    gamma: float
    n: int

    def __post_init__(self):
        object.__setattr__(self, "gamma", check_gamma(self.gamma))
        if self.n < 1:
            raise ChannelError(f"Qubit count must be positive, got {self.n}")


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map given by sparse Kraus elements"""
    dim: int
    elements: Tuple[SparseOperator, ...]

    def __post_init__(self):
        for element in self.elements:
            if element.dim != self.dim:
                raise DimensionMismatchError(f"Kraus element of dim {element.dim} in channel of dim {self.dim}")

    @property
    def n(self) -> int:
        return self.dim.bit_length() - 1

    def __len__(self) -> int:
        return len(self.elements)

    def dense_elements(self):
        return [element.to_dense() for element in self.elements]

    def apply(self, rho: DensityMatrix, workers: int = 1, validate: bool = True) -> DensityMatrix:
        return apply_channel(self, rho, workers=workers, validate=validate)


def single_qubit_ad_kraus(gamma: float) -> KrausChannel:
    """E0 = diag(1, sqrt(1-gamma)), E1 = sqrt(gamma) |0><1|"""
    gamma = check_gamma(gamma)
    e0 = SparseOperator.from_entries(2, [(0, 0, 1.0), (1, 1, math.sqrt(1.0 - gamma))], label="E0")
    e1 = SparseOperator.from_entries(2, [(0, 1, math.sqrt(gamma))], label="E1")
    return KrausChannel(2, (e0, e1))


def multi_qubit_ad_kraus(params: ChannelParams,
                         max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS) -> KrausChannel:
    """n-fold tensor power of the single-qubit channel, one element per decay pattern.

    K_e maps |x> to sqrt(gamma)^|e| sqrt(1-gamma)^(|x|-|e|) |x - e> when e <= x
    bitwise and annihilates |x> otherwise.
    """
    n = params.n
    if n > max_qubits:
        raise ResourceLimitError(f"Simulation is limited to {max_qubits} qubits, got n={n}")

    dim = 1 << n
    xs = np.arange(dim, dtype=np.int64)
    weights = np.array([popcount(int(x)) for x in xs], dtype=np.int64)
    decay = math.sqrt(params.gamma)
    keep = math.sqrt(1.0 - params.gamma)

    elements = []
    for e in range(dim):
        sources = xs[(xs & e) == e]
        e_weight = popcount(e)
        amplitudes = (decay ** e_weight) * keep ** (weights[sources] - e_weight)
        nonzero = amplitudes != 0
        sources = sources[nonzero]
        elements.append(SparseOperator(
            dim=dim,
            rows=sources ^ e,
            cols=sources,
            values=amplitudes[nonzero].astype(complex),
            label=f"E[{to_bitstring(e, n)}]",
        ))

    logger.debug(f"Built {len(elements)} damping elements for n={n}, gamma={params.gamma:g}")
    return KrausChannel(dim, tuple(elements))


def identity_channel(n: int) -> KrausChannel:
    dim = 1 << n
    return KrausChannel(dim, (SparseOperator.from_entries(dim, [(i, i, 1.0) for i in range(dim)], label="I"),))


def verify_trace_preserving(channel: KrausChannel, tol: float = 1e-12) -> bool:
    """max |sum K^H K - I| <= tol"""
    deviation = operator_sum_deviation(channel.elements)
    if deviation > tol:
        logger.debug(f"Channel deviates from trace preservation by {deviation:.3e}")
    return deviation <= tol


def apply_kraus_map(elements: Sequence[SparseOperator], matrix, workers: int = 1) -> np.ndarray:
    """sum K X K^H for any square X, Hermitian or not"""
    x = np.asarray(matrix, dtype=complex)
    if not elements:
        raise ChannelError("Channel has no Kraus elements")
    if workers <= 1 or len(elements) < 2:
        out = np.zeros_like(x)
        for element in elements:
            element.conjugate(x, out=out)
        return out

    chunks = [elements[i::workers] for i in range(min(workers, len(elements)))]

    def _partial(chunk):
        acc = np.zeros_like(x)
        for element in chunk:
            element.conjugate(x, out=acc)
        return acc

    with ThreadPoolExecutor(max_workers=len(chunks)) as executor:
        return sum(executor.map(_partial, chunks))


def apply_channel(channel: KrausChannel, rho: DensityMatrix, workers: int = 1,
                  validate: bool = True) -> DensityMatrix:
    """sum K rho K^H, checked for Hermiticity and trace.

    With validate set the output must also have no eigenvalue below
    EIGEN_CLAMP, so an indefinite input is reported instead of propagated.
    """
    if rho.dim != channel.dim:
        raise DimensionMismatchError(f"State of dim {rho.dim} for channel of dim {channel.dim}")
    out = apply_kraus_map(channel.elements, rho.matrix, workers=workers)
    if not is_hermitian(out, TRACE_TOL):
        raise ChannelError("Channel output is not Hermitian; the channel is malformed")
    trace = complex(np.trace(out))
    if abs(trace - rho.trace) > TRACE_TOL:
        raise ChannelError(f"Channel changed the trace from {rho.trace.real:.12g} to {trace.real:.12g}")
    result = DensityMatrix(out)
    if validate:
        lowest = float(result.eigenvalues()[0])
        if lowest < EIGEN_CLAMP:
            raise ChannelError(f"Channel output has eigenvalue {lowest:.3e}; the channel is malformed")
    return result


def damp_basis_state(x: int, n: int, gamma: float) -> Dict[int, float]:
    """Output populations of the damped basis state |x>, keyed by word"""
    gamma = check_gamma(gamma)
    populations = {}
    sub = x
    while True:
        populations[sub] = gamma ** popcount(x ^ sub) * (1.0 - gamma) ** popcount(sub)
        if sub == 0:
            break
        sub = (sub - 1) & x
    return populations

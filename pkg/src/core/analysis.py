"""
End-to-end evaluation of codes under amplitude damping.

The composite channel is recovery after damping, acting on code-space
states prepared directly (the encoding is the identity injection). Fidelity
is the state fidelity tr sqrt(rho^1/2 C(rho) rho^1/2) on rho = P/k.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .channel import (
    ChannelParams,
    KrausChannel,
    apply_kraus_map,
    check_gamma,
    multi_qubit_ad_kraus,
    DEFAULT_SIMULATION_MAX_QUBITS,
)
from .codeset import CodeSet, require_valid, to_bitstring
from .exceptions import DimensionMismatchError
from .linalg import DensityMatrix, pure_state_fidelity, uhlmann_fidelity
from .recovery import RecoveryChannel, build_recovery


logger = logging.getLogger("adcodes.analysis")

DEFAULT_RESIDUAL_GAMMAS = (1e-4, 2e-4, 4e-4, 8e-4)
DEFAULT_FIT_DEGREE = 3
DEFAULT_DEFICIT_FIT_DEGREE = 2
DEFAULT_RESIDUAL_THRESHOLD = 1e-6
CODE_SPACE_TOL = 1e-10


def codeword_states(code: CodeSet) -> np.ndarray:
    """Columns (|u> + |u_bar>)/sqrt(2), one per pair, ordered by representative"""
    dim = 1 << code.n
    reps = code.pair_representatives
    states = np.zeros((dim, len(reps)), dtype=complex)
    for column, rep in enumerate(reps):
        states[rep, column] = states[rep ^ code.mask, column] = 1.0 / math.sqrt(2.0)
    return states


@dataclass(frozen=True)
class CompositeChannel:
    """Damping followed by the recovery built for the same code and gamma"""
    code: CodeSet
    gamma: float
    damping: KrausChannel
    recovery: RecoveryChannel

    def __post_init__(self):
        if self.recovery.code != self.code or self.recovery.gamma != self.gamma:
            raise ValueError("Recovery was built for a different code or damping probability")
        if self.damping.dim != self.recovery.dim:
            raise DimensionMismatchError("Damping and recovery act on different dimensions")

    @property
    def dim(self) -> int:
        return self.damping.dim

    def apply_matrix(self, matrix, workers: int = 1) -> np.ndarray:
        damped = apply_kraus_map(self.damping.elements, matrix, workers=workers)
        return self.recovery.apply(damped, workers=workers)


def build_composite(code: CodeSet, gamma: float, max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS,
                    max_error_weight: Optional[int] = None) -> CompositeChannel:
    gamma = check_gamma(gamma)
    damping = multi_qubit_ad_kraus(ChannelParams(gamma, code.n), max_qubits=max_qubits)
    recovery = build_recovery(code, gamma, max_error_weight=max_error_weight, max_qubits=max_qubits)
    return CompositeChannel(code=code, gamma=gamma, damping=damping, recovery=recovery)


def composite_apply(composite: CompositeChannel, rho: DensityMatrix, workers: int = 1) -> DensityMatrix:
    """recovery(damping(rho))"""
    if rho.dim != composite.dim:
        raise DimensionMismatchError(f"State of dim {rho.dim} for composite channel of dim {composite.dim}")
    states = codeword_states(composite.code)
    projector = states @ states.conj().T
    leak = np.max(np.abs(rho.matrix - projector @ rho.matrix @ projector), initial=0.0)
    if leak > CODE_SPACE_TOL:
        logger.warning(f"Input state is not supported on the code space (deviation {leak:.3e})")
    return DensityMatrix(composite.apply_matrix(rho.matrix, workers=workers))


def code_fidelity(code: CodeSet, gamma: float, max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS,
                  composite: Optional[CompositeChannel] = None, workers: int = 1) -> float:
    """Fidelity of P/k with its image, via the k x k compression"""
    require_valid(code)
    composite = composite or build_composite(code, gamma, max_qubits=max_qubits)
    rho = DensityMatrix.from_projector(codeword_states(code))
    return uhlmann_fidelity(rho, composite_apply(composite, rho, workers=workers))


def code_fidelity_full_space(code: CodeSet, gamma: float,
                             max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS) -> float:
    """Same quantity through the dense square-root path"""
    require_valid(code)
    composite = build_composite(code, gamma, max_qubits=max_qubits)
    rho = DensityMatrix.from_projector(codeword_states(code))
    output = composite_apply(composite, rho)
    return uhlmann_fidelity(DensityMatrix(rho.matrix), DensityMatrix(output.matrix))


def pure_state_fidelities(code: CodeSet, gamma: float, index: int = 0,
                          max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS) -> Tuple[float, float]:
    """Fidelity of one codeword state with and without recovery"""
    composite = build_composite(code, gamma, max_qubits=max_qubits)
    psi = codeword_states(code)[:, index]
    rho = np.outer(psi, psi.conj())
    damped = apply_kraus_map(composite.damping.elements, rho)
    recovered = composite.recovery.apply(damped)
    return pure_state_fidelity(psi, recovered), pure_state_fidelity(psi, damped)


def bare_fidelity(m: int, gamma: float, method: str = "closed") -> float:
    """Fidelity of I/2^m with its damped image on m unencoded qubits"""
    gamma = check_gamma(gamma)
    if m < 0:
        raise ValueError(f"Qubit count must be non-negative, got {m}")
    if m == 0:
        return 1.0
    if method == "closed":
        return ((math.sqrt(1.0 + gamma) + math.sqrt(1.0 - gamma)) / 2.0) ** m
    if method == "simulate":
        channel = multi_qubit_ad_kraus(ChannelParams(gamma, m))
        rho = DensityMatrix.maximally_mixed(1 << m)
        damped = apply_kraus_map(channel.elements, rho.matrix)
        return uhlmann_fidelity(rho, DensityMatrix(damped))
    raise ValueError(f"Unknown bare fidelity method {method!r}")


@dataclass
class PolynomialFit:
    """y = sum_p coefficients[p-1] x^p, no constant term"""
    coefficients: np.ndarray
    residual: float
    xs: Tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients)

    def coefficient(self, power: int):
        return self.coefficients[power - 1] if power <= self.degree else 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return sum(c * x ** (p + 1) for p, c in enumerate(self.coefficients))


def fit_polynomial_through_origin(xs: Sequence[float], ys: Sequence, degree: int = DEFAULT_FIT_DEGREE) -> PolynomialFit:
    """Least-squares fit of a polynomial with zero constant term.

    Abscissae are rescaled by their maximum before solving. Complex ordinates
    give complex coefficients.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys)
    if degree < 1:
        raise ValueError("Fit degree must be at least 1")
    if x.size < degree:
        raise ValueError(f"Need at least {degree} samples for a degree-{degree} fit, got {x.size}")
    if np.any(x <= 0):
        raise ValueError("Fit abscissae must be positive")
    scale = float(np.max(x))
    t = x / scale
    design = np.column_stack([t ** p for p in range(1, degree + 1)])
    solution, _res, _rank, _sv = np.linalg.lstsq(design, y, rcond=None)
    coefficients = solution / np.array([scale ** p for p in range(1, degree + 1)])
    residual = float(np.linalg.norm(design @ solution - y))
    return PolynomialFit(coefficients=coefficients, residual=residual, xs=tuple(float(v) for v in x))


def _map_points(func: Callable, points: Sequence, workers: int) -> List:
    if workers <= 1 or len(points) < 2:
        return [func(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, points))


def fit_fidelity_deficit(code: CodeSet, gammas: Optional[Sequence[float]] = None,
                         window: float = 0.05, samples: int = 8,
                         degree: int = DEFAULT_DEFICIT_FIT_DEGREE, workers: int = 1,
                         max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS) -> PolynomialFit:
    """Fit 1 - F(gamma) through the origin on small gamma.

    The default model is a1 gamma + a2 gamma^2. A code that corrects
    single decays has a1 near zero and a2 > 0.
    """
    if gammas is None:
        gammas = np.geomspace(window / 50.0, window, samples)
    gammas = [float(g) for g in gammas]
    deficits = _map_points(lambda g: 1.0 - code_fidelity(code, g, max_qubits=max_qubits), gammas, workers)
    fit = fit_polynomial_through_origin(gammas, deficits, degree)
    logger.info(
        f"1 - F fit for ({code.n},{code.k}): a1={fit.coefficient(1):.3e} a2={fit.coefficient(2):.6g}"
    )
    return fit


@dataclass
class FidelityCurve:
    """Sampled fidelity of a code against the unencoded baseline"""
    gammas: List[float]
    f_code: List[float]
    f_bare: List[float]
    bare_qubit_count: int

    CSV_HEADER = ("gamma", "f_code", "f_bare")

    def csv_rows(self) -> List[List[str]]:
        return [[f"{g:.12g}", f"{fc:.12g}", f"{fb:.12g}"]
                for g, fc, fb in zip(self.gammas, self.f_code, self.f_bare)]

    def csv_text(self) -> str:
        lines = [",".join(self.CSV_HEADER)] + [",".join(row) for row in self.csv_rows()]
        return "\n".join(lines) + "\n"


def check_gamma_grid(gammas: Sequence[float]) -> List[float]:
    grid = [float(g) for g in gammas]
    if not grid:
        raise ValueError("Gamma grid is empty")
    if any(not 0.0 <= g < 1.0 for g in grid):
        raise ValueError("Gamma grid values must lie in [0, 1)")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("Gamma grid must be strictly ascending")
    return grid


def fidelity_curve(code: CodeSet, gammas: Sequence[float], workers: int = 1,
                   max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS) -> FidelityCurve:
    """Code fidelity with the recovery rebuilt at every gamma, and the bare baseline"""
    require_valid(code)
    grid = check_gamma_grid(gammas)
    bare_qubits = int(math.floor(math.log2(code.k))) if code.k > 0 else 0

    f_code = _map_points(lambda g: code_fidelity(code, g, max_qubits=max_qubits), grid, workers)
    f_bare = [bare_fidelity(bare_qubits, g) for g in grid]
    logger.info(f"Fidelity curve for ({code.n},{code.k}) over {len(grid)} points")
    return FidelityCurve(gammas=grid, f_code=list(f_code), f_bare=f_bare, bare_qubit_count=bare_qubits)


@dataclass
class ResidualEntry:
    """First-order coefficient of one deviation.

    kind is "diagonal" for 1 - <w_i|C(|w_i><w_i|)|w_i>, "leakage" for the
    population <w_j|C(|w_i><w_i|)|w_j> with j != i, "coherence" for
    1 - <w_i|C(|w_i><w_j|)|w_j> with i < j.
    """
    i: int
    j: int
    kind: str
    coefficient: complex
    fit_residual: float

    @property
    def magnitude(self) -> float:
        return float(abs(self.coefficient))


@dataclass
class ResidualReport:
    code: CodeSet
    gammas: Tuple[float, ...]
    degree: int
    entries: List[ResidualEntry] = field(default_factory=list)

    @property
    def max_first_order(self) -> float:
        return max((entry.magnitude for entry in self.entries), default=0.0)

    def worst(self) -> Optional[ResidualEntry]:
        return max(self.entries, key=lambda entry: entry.magnitude, default=None)

    def passed(self, threshold: float = DEFAULT_RESIDUAL_THRESHOLD) -> bool:
        return self.max_first_order < threshold

    def describe(self, entry: ResidualEntry) -> str:
        reps = self.code.pair_representatives
        return (f"{entry.kind} ({to_bitstring(reps[entry.i], self.code.n)}, "
                f"{to_bitstring(reps[entry.j], self.code.n)}): a1 = {entry.magnitude:.3e}")


def _projected_outputs(composite: CompositeChannel, states: np.ndarray, workers: int) -> np.ndarray:
    """blocks[i, j] = W^H C(|w_i><w_j|) W, each entry a k x k matrix.

    Off-diagonal inputs are rebuilt from Hermitian ones:
    |i><j| = P(+) + i P(+i) - (1 + i)/2 (P_i + P_j)
    with P(+) for (|w_i> + |w_j>)/sqrt(2) and P(+i) for (|w_i> + i|w_j>)/sqrt(2).
    """
    k = states.shape[1]

    def _project(vector: np.ndarray) -> np.ndarray:
        out = composite.apply_matrix(np.outer(vector, vector.conj()))
        return states.conj().T @ out @ states

    diagonal = _map_points(lambda i: _project(states[:, i]), list(range(k)), workers)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]

    def _pair(ij):
        i, j = ij
        plus = _project((states[:, i] + states[:, j]) / math.sqrt(2.0))
        plus_i = _project((states[:, i] + 1j * states[:, j]) / math.sqrt(2.0))
        return plus + 1j * plus_i - 0.5 * (1 + 1j) * (diagonal[i] + diagonal[j])

    blocks = np.zeros((k, k, k, k), dtype=complex)
    for i in range(k):
        blocks[i, i] = diagonal[i]
    for (i, j), block in zip(pairs, _map_points(_pair, pairs, workers)):
        blocks[i, j] = block
        blocks[j, i] = block.conj().T
    return blocks


def first_order_residuals(code: CodeSet, gammas: Sequence[float] = DEFAULT_RESIDUAL_GAMMAS,
                          degree: int = DEFAULT_FIT_DEGREE, workers: int = 1,
                          max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS) -> ResidualReport:
    """Fit every codeword deviation on small gamma and report the linear coefficients"""
    require_valid(code)
    gammas = tuple(float(g) for g in gammas)
    if any(not 0.0 < g < 1.0 for g in gammas):
        raise ValueError("Residual gammas must lie in (0, 1)")
    states = codeword_states(code)
    k = states.shape[1]

    per_gamma = []
    for gamma in gammas:
        composite = build_composite(code, gamma, max_qubits=max_qubits)
        per_gamma.append(_projected_outputs(composite, states, workers))

    report = ResidualReport(code=code, gammas=gammas, degree=degree)
    for i in range(k):
        for j in range(i, k):
            if i == j:
                deviation = [1.0 - blocks[i, i][i, i].real for blocks in per_gamma]
                fit = fit_polynomial_through_origin(gammas, deviation, degree)
                report.entries.append(ResidualEntry(i, i, "diagonal", float(np.real(fit.coefficient(1))), fit.residual))
                for other in range(k):
                    if other == i:
                        continue
                    population = [blocks[i, i][other, other].real for blocks in per_gamma]
                    fit = fit_polynomial_through_origin(gammas, population, degree)
                    report.entries.append(ResidualEntry(i, other, "leakage", float(np.real(fit.coefficient(1))), fit.residual))
            else:
                deviation = [1.0 - blocks[i, j][i, j] for blocks in per_gamma]
                fit = fit_polynomial_through_origin(gammas, np.array(deviation, dtype=complex), degree)
                report.entries.append(ResidualEntry(i, j, "coherence", complex(fit.coefficient(1)), fit.residual))

    worst = report.worst()
    if worst is not None:
        logger.info(f"Largest first-order residual for ({code.n},{code.k}): {report.describe(worst)}")
    return report

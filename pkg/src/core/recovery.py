"""
Channel-adapted recovery for self-complementary codes.

The recovery is a list of partial isometries. Every element maps a set of
orthonormal source vectors onto distinct codeword states
(|u> + |u_bar>)/sqrt(2). The first element corrects the damped image f(u)
of each codeword; later elements, one per error vector in weight-then-
lexicographic order, correct damped words |u - e> or the orthogonal
partners g(u - e). A completion element maps whatever remains to itself.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .channel import KrausChannel, apply_kraus_map, check_gamma, DEFAULT_SIMULATION_MAX_QUBITS
from .codeset import CodeSet, CodeWord, full_mask, popcount, require_valid, to_bitstring
from .exceptions import RecoveryConstructionError, ResourceLimitError
from .linalg import SparseOperator, operator_sum_deviation


logger = logging.getLogger("adcodes.recovery")

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class SourceKind(Enum):
    BASIS = "basis"
    F = "f"
    G = "g"


@dataclass(frozen=True)
class DampedPairBasis:
    """Orthonormal basis {f, g} of span{|u>, |u_bar>} adapted to damping.

    f = (a|u> + b|u_bar>)/norm and g = (b|u> - a|u_bar>)/norm where u is the
    pair representative, a = (1-gamma)^(|u|/2) and b = (1-gamma)^(|u_bar|/2).
    """
    representative: int
    partner: int
    n: int
    a: float
    b: float

    @property
    def f(self) -> Tuple[float, float]:
        return (self.a, self.b)

    @property
    def g(self) -> Tuple[float, float]:
        return (self.b, -self.a)

    def coefficients(self, kind: SourceKind) -> Tuple[float, float]:
        return self.f if kind is SourceKind.F else self.g

    def vector(self, kind: SourceKind) -> np.ndarray:
        out = np.zeros(1 << self.n, dtype=complex)
        c_rep, c_partner = self.coefficients(kind)
        out[self.representative] = c_rep
        out[self.partner] = c_partner
        return out


def damped_pair_vectors(u: Union[CodeWord, int], gamma: float, n: Optional[int] = None) -> DampedPairBasis:
    """f and g for the pair of u, expressed on the pair representative"""
    if isinstance(u, CodeWord):
        bits, n = u.bits, u.n
    else:
        if n is None:
            raise ValueError("Word length n is required for an integer word")
        bits = u
    gamma = check_gamma(gamma)
    mask = full_mask(n)
    rep = min(bits, bits ^ mask)
    partner = rep ^ mask
    w_rep, w_partner = popcount(rep), popcount(partner)

    # Exponents measured from the smaller weight keep one coefficient at 1
    base = min(w_rep, w_partner)
    keep = 1.0 - gamma
    a = keep ** ((w_rep - base) / 2.0)
    b = keep ** ((w_partner - base) / 2.0)
    norm = math.hypot(a, b)
    return DampedPairBasis(representative=rep, partner=partner, n=n, a=a / norm, b=b / norm)


@dataclass(frozen=True)
class Assignment:
    """One source direction mapped onto the codeword state of target"""
    kind: SourceKind
    word: int
    target: int

    def to_dict(self, n: int) -> Dict:
        return {
            "source": {"kind": self.kind.value, "word": to_bitstring(self.word, n)},
            "target_pair": to_bitstring(self.target, n),
        }


@dataclass(frozen=True)
class RecoveryElement:
    assignments: Tuple[Assignment, ...]
    error: Optional[int] = None

    @property
    def rank(self) -> int:
        return len(self.assignments)


def error_vector_order(n: int, max_weight: Optional[int] = None) -> List[int]:
    """Nonzero error vectors by weight, then lexicographically"""
    limit = n if max_weight is None else min(max_weight, n)
    return sorted((e for e in range(1, 1 << n) if popcount(e) <= limit),
                  key=lambda e: (popcount(e), e))


@dataclass(frozen=True)
class RecoveryChannel:
    """Recovery operation for one code at one damping probability"""
    gamma: float
    code: CodeSet
    elements: Tuple[RecoveryElement, ...]
    completion: Tuple[Assignment, ...]
    bases: Dict[int, DampedPairBasis] = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def dim(self) -> int:
        return 1 << self.code.n

    @property
    def completion_rank(self) -> int:
        return len(self.completion)

    @property
    def assigned_rank(self) -> int:
        return sum(element.rank for element in self.elements)

    @property
    def total_rank(self) -> int:
        return self.assigned_rank + self.completion_rank

    def source_vector(self, assignment: Assignment) -> np.ndarray:
        if assignment.kind is SourceKind.BASIS:
            out = np.zeros(self.dim, dtype=complex)
            out[assignment.word] = 1.0
            return out
        return self.bases[assignment.word].vector(assignment.kind)

    def target_vector(self, target: int) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        out[target] = INV_SQRT2
        out[target ^ self.code.mask] = INV_SQRT2
        return out

    def _source_entries(self, assignment: Assignment) -> List[Tuple[int, complex]]:
        if assignment.kind is SourceKind.BASIS:
            return [(assignment.word, 1.0)]
        basis = self.bases[assignment.word]
        c_rep, c_partner = basis.coefficients(assignment.kind)
        return [(basis.representative, c_rep), (basis.partner, c_partner)]

    def element_operator(self, element: RecoveryElement, label: str = "") -> SparseOperator:
        entries = []
        mask = self.code.mask
        for assignment in element.assignments:
            for target_word in (assignment.target, assignment.target ^ mask):
                for source_word, coeff in self._source_entries(assignment):
                    entries.append((target_word, source_word, INV_SQRT2 * np.conj(coeff)))
        return SparseOperator.from_entries(self.dim, entries, label=label)

    def completion_operator(self) -> SparseOperator:
        entries = []
        for assignment in self.completion:
            support = self._source_entries(assignment)
            for row, c_row in support:
                for col, c_col in support:
                    entries.append((row, col, c_row * np.conj(c_col)))
        return SparseOperator.from_entries(self.dim, entries, label="R[completion]")

    @cached_property
    def kraus(self) -> KrausChannel:
        operators = []
        for index, element in enumerate(self.elements):
            label = "R[f]" if element.error is None else f"R[{to_bitstring(element.error, self.n)}]"
            operators.append(self.element_operator(element, label=label))
        if self.completion:
            operators.append(self.completion_operator())
        return KrausChannel(self.dim, tuple(operators))

    def to_kraus_channel(self) -> KrausChannel:
        return self.kraus

    def apply(self, matrix, workers: int = 1) -> np.ndarray:
        return apply_kraus_map(self.kraus.elements, matrix, workers=workers)

    def all_sources(self) -> List[Assignment]:
        return [a for element in self.elements for a in element.assignments] + list(self.completion)

    def to_dict(self) -> Dict:
        return {
            "gamma": self.gamma,
            "elements": [
                {"assignments": [a.to_dict(self.n) for a in element.assignments]}
                for element in self.elements
            ],
            "completion_rank": self.completion_rank,
        }


def build_recovery(code: CodeSet, gamma: float, max_error_weight: Optional[int] = None,
                   max_qubits: int = DEFAULT_SIMULATION_MAX_QUBITS) -> RecoveryChannel:
    """Construct the recovery element by element.

    With max_error_weight set, only error vectors up to that weight get
    elements and everything else falls into the completion.
    """
    gamma = check_gamma(gamma)
    require_valid(code)
    n = code.n
    if n > max_qubits:
        raise ResourceLimitError(f"Recovery construction is limited to {max_qubits} qubits, got n={n}")

    dim = 1 << n
    mask = code.mask
    reps = code.pair_representatives
    bases = {rep: damped_pair_vectors(rep, gamma, n) for rep in reps}

    used = bytearray(dim)
    elements = [RecoveryElement(tuple(Assignment(SourceKind.F, rep, rep) for rep in reps))]
    rank = len(reps)

    for e in error_vector_order(n, max_error_weight):
        if rank == dim:
            break
        assignments = []
        targets = set()
        for u in code.words:
            if u & e != e:
                continue
            y = u ^ e
            target = code.pair_of(u)
            if y in code:
                if used[y] or used[y ^ mask]:
                    continue
                assignment = Assignment(SourceKind.G, code.pair_of(y), target)
                used[y] = used[y ^ mask] = 1
            elif not used[y]:
                assignment = Assignment(SourceKind.BASIS, y, target)
                used[y] = 1
            else:
                continue
            if target in targets:
                raise RecoveryConstructionError(
                    f"Error {to_bitstring(e, n)} sends two sources to pair {to_bitstring(target, n)}"
                )
            targets.add(target)
            assignments.append(assignment)
        if assignments:
            rank += len(assignments)
            elements.append(RecoveryElement(tuple(assignments), error=e))
            logger.debug(f"Element for error {to_bitstring(e, n)} has rank {len(assignments)}")

    completion = []
    for word in range(dim):
        if word in code:
            if word in bases and not used[word]:
                completion.append(Assignment(SourceKind.G, word, word))
        elif not used[word]:
            completion.append(Assignment(SourceKind.BASIS, word, word))

    if rank + len(completion) != dim:
        raise RecoveryConstructionError(
            f"Rank accounting failed: {rank} assigned + {len(completion)} completion != {dim}"
        )

    logger.info(
        f"Recovery for ({n},{code.k}) code at gamma={gamma:g}: {len(elements)} elements, "
        f"assigned rank {rank}, completion rank {len(completion)}"
    )
    return RecoveryChannel(gamma=gamma, code=code, elements=tuple(elements),
                           completion=tuple(completion), bases=bases)


@dataclass
class RecoveryReport:
    """Outcome of the structural checks on a recovery"""
    gram_deviation: float
    completeness_deviation: float
    rank: int
    dim: int
    bad_targets: List[int] = field(default_factory=list)
    tol: float = 1e-10

    @property
    def gram_ok(self) -> bool:
        return self.gram_deviation <= self.tol and self.rank == self.dim

    @property
    def completeness_ok(self) -> bool:
        return self.completeness_deviation <= self.tol

    @property
    def targets_ok(self) -> bool:
        return not self.bad_targets

    @property
    def passed(self) -> bool:
        return self.gram_ok and self.completeness_ok and self.targets_ok

    def lines(self) -> List[str]:
        return [
            f"source Gram: max deviation {self.gram_deviation:.3e}, rank {self.rank}/{self.dim} "
            f"-> {'ok' if self.gram_ok else 'FAIL'}",
            f"sum R^H R = I: max deviation {self.completeness_deviation:.3e} "
            f"-> {'ok' if self.completeness_ok else 'FAIL'}",
            f"targets are codewords -> {'ok' if self.targets_ok else 'FAIL'}",
        ]


def verify_recovery(recovery: RecoveryChannel, tol: float = 1e-10) -> RecoveryReport:
    """Gram matrix of all sources, trace preservation and target validity"""
    sources = recovery.all_sources()
    matrix = np.column_stack([recovery.source_vector(a) for a in sources])
    gram = matrix.conj().T @ matrix
    gram_deviation = float(np.max(np.abs(gram - np.eye(len(sources)))))

    completeness = operator_sum_deviation(recovery.to_kraus_channel().elements)

    reps = set(recovery.code.pair_representatives)
    bad_targets = sorted({
        a.target for element in recovery.elements for a in element.assignments if a.target not in reps
    })

    report = RecoveryReport(
        gram_deviation=gram_deviation,
        completeness_deviation=completeness,
        rank=int(np.linalg.matrix_rank(matrix)),
        dim=recovery.dim,
        bad_targets=bad_targets,
        tol=tol,
    )
    if not report.passed:
        logger.warning(f"Recovery at gamma={recovery.gamma:g} failed checks: {'; '.join(report.lines())}")
    return report

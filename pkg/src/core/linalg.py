"""
Complex linear algebra for density-matrix simulation.

Basis convention: the basis index of a state is the integer value of its
bitstring, qubit 1 being the most significant bit.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from .exceptions import (
    DimensionMismatchError,
    InvalidStateError,
    NotHermitianError,
    NotPositiveSemidefiniteError,
    ResourceLimitError,
)


logger = logging.getLogger("adcodes.linalg")

HERMITIAN_TOL = 1e-10
EIGEN_CLAMP = -1e-10
EIGEN_REJECT = -1e-6
TRACE_TOL = 1e-10
MAX_DENSE_DIM = 1 << 13


def as_square(matrix, name: str = "matrix") -> np.ndarray:
    """Coerce to a complex square ndarray"""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def is_hermitian(matrix, tol: float = HERMITIAN_TOL) -> bool:
    m = as_square(matrix)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol * scale)


def _hermitian_part(matrix, tol: float) -> np.ndarray:
    m = as_square(matrix)
    if not is_hermitian(m, tol):
        deviation = float(np.max(np.abs(m - m.conj().T)))
        raise NotHermitianError(f"Matrix is not Hermitian (max |M - M^H| = {deviation:.3e})")
    return 0.5 * (m + m.conj().T)


def hermitian_eigendecomposition(matrix, tol: float = HERMITIAN_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues ascending and unitary eigenvectors (columns) of a Hermitian matrix"""
    eigenvalues, eigenvectors = np.linalg.eigh(_hermitian_part(matrix, tol))
    return eigenvalues, eigenvectors


def _nonnegative_spectrum(eigenvalues: np.ndarray) -> np.ndarray:
    """Clamp negatives and zero out roundoff below dim * eps * max|lambda|"""
    if eigenvalues.size == 0:
        return eigenvalues
    lowest = float(eigenvalues[0])
    if lowest < EIGEN_REJECT:
        raise NotPositiveSemidefiniteError(f"Matrix has eigenvalue {lowest:.3e} below {EIGEN_REJECT:g}")
    if lowest < EIGEN_CLAMP:
        logger.warning(f"Clamping eigenvalue {lowest:.3e} to zero")
    floor = eigenvalues.size * np.finfo(float).eps * float(np.max(np.abs(eigenvalues)))
    return np.where(eigenvalues > floor, eigenvalues, 0.0)


def psd_sqrt_trace(matrix, tol: float = HERMITIAN_TOL) -> float:
    """tr sqrt(M) for Hermitian PSD M"""
    eigenvalues = np.linalg.eigvalsh(_hermitian_part(matrix, tol))
    return float(np.sum(np.sqrt(_nonnegative_spectrum(eigenvalues))))


def psd_sqrt(matrix, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix"""
    eigenvalues, eigenvectors = hermitian_eigendecomposition(matrix, tol)
    roots = np.sqrt(_nonnegative_spectrum(eigenvalues))
    return (eigenvectors * roots) @ eigenvectors.conj().T


def tensor(a, b, max_dim: int = MAX_DENSE_DIM) -> np.ndarray:
    """Kronecker product, qubits of a to the left of qubits of b"""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise ResourceLimitError(f"Tensor product of size {rows}x{cols} exceeds {max_dim}")
    return np.kron(a, b)


def tensor_all(factors: Iterable, max_dim: int = MAX_DENSE_DIM) -> np.ndarray:
    return reduce(lambda a, b: tensor(a, b, max_dim), factors)


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix, optionally flagged as a normalized projector.

    When support is set it holds orthonormal columns V and the matrix
    equals V V^H / k.
    """
    matrix: np.ndarray
    support: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    @property
    def rank(self) -> Optional[int]:
        return None if self.support is None else self.support.shape[1]

    @classmethod
    def from_matrix(cls, matrix, validate: bool = True) -> "DensityMatrix":
        state = cls(as_square(matrix, "density matrix"))
        if validate:
            state.validate()
        return state

    @classmethod
    def from_pure(cls, vector) -> "DensityMatrix":
        psi = np.asarray(vector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise InvalidStateError("Zero vector is not a state")
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()), support=psi.reshape(-1, 1))

    @classmethod
    def from_projector(cls, vectors) -> "DensityMatrix":
        """P/k for the span of k orthonormal columns"""
        v = np.asarray(vectors, dtype=complex)
        if v.ndim != 2 or v.shape[1] == 0:
            raise DimensionMismatchError(f"Projector support must be a non-empty dim x k array, got {v.shape}")
        gram = v.conj().T @ v
        if np.max(np.abs(gram - np.eye(v.shape[1]))) > 1e-10:
            raise InvalidStateError("Projector support columns are not orthonormal")
        return cls((v @ v.conj().T) / v.shape[1], support=v)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim, support=np.eye(dim, dtype=complex))

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigendecomposition(self.matrix)[0]

    def validate(self, tol: float = TRACE_TOL) -> "DensityMatrix":
        """Hermitian, unit trace and eigenvalues above the clamp threshold"""
        if not is_hermitian(self.matrix, tol):
            raise NotHermitianError("Density matrix is not Hermitian")
        trace = self.trace
        if abs(trace - 1.0) > tol:
            raise InvalidStateError(f"Density matrix trace is {trace.real:.12g}, expected 1")
        lowest = float(self.eigenvalues()[0])
        if lowest < -tol:
            raise NotPositiveSemidefiniteError(f"Density matrix has eigenvalue {lowest:.3e}")
        return self


def _as_density(state) -> DensityMatrix:
    return state if isinstance(state, DensityMatrix) else DensityMatrix(as_square(state, "state"))


def uhlmann_fidelity(rho, sigma) -> float:
    """tr sqrt(rho^1/2 sigma rho^1/2).

    For a normalized projector P/k the k x k compression V^H sigma V is
    used: F = tr sqrt(V^H sigma V) / sqrt(k).
    """
    rho = _as_density(rho)
    sigma = _as_density(sigma)
    if rho.dim != sigma.dim:
        raise DimensionMismatchError(f"Fidelity of dim {rho.dim} against dim {sigma.dim}")

    if rho.support is None and sigma.support is not None:
        rho, sigma = sigma, rho
    if rho.support is not None:
        v = rho.support
        compressed = v.conj().T @ sigma.matrix @ v
        return psd_sqrt_trace(compressed) / np.sqrt(v.shape[1])

    root = psd_sqrt(rho.matrix)
    return psd_sqrt_trace(root @ sigma.matrix @ root)


def pure_state_fidelity(vector, sigma) -> float:
    """sqrt(<psi|sigma|psi>) for a normalized pure state"""
    psi = np.asarray(vector, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    overlap = np.real(psi.conj() @ _as_density(sigma).matrix @ psi)
    return float(np.sqrt(max(overlap, 0.0)))


@dataclass(frozen=True)
class SparseOperator:
    """Square operator stored as coordinate entries, at most one per (row, col)"""
    dim: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    label: str = ""

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[Tuple[int, int, complex]],
                     label: str = "", drop_zeros: bool = True) -> "SparseOperator":
        seen = set()
        rows, cols, values = [], [], []
        for row, col, value in entries:
            if not (0 <= row < dim and 0 <= col < dim):
                raise DimensionMismatchError(f"Entry ({row}, {col}) outside dimension {dim}")
            if (row, col) in seen:
                raise ValueError(f"Duplicate entry at ({row}, {col})")
            seen.add((row, col))
            if drop_zeros and value == 0:
                continue
            rows.append(row)
            cols.append(col)
            values.append(value)
        return cls(dim, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                   np.array(values, dtype=complex), label)

    @classmethod
    def from_dense(cls, matrix, label: str = "", atol: float = 0.0) -> "SparseOperator":
        m = as_square(matrix)
        rows, cols = np.nonzero(np.abs(m) > atol)
        return cls(m.shape[0], rows.astype(np.int64), cols.astype(np.int64), m[rows, cols], label)

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    @property
    def is_monomial(self) -> bool:
        """At most one nonzero in each row and in each column"""
        return (len(np.unique(self.rows)) == self.nnz and len(np.unique(self.cols)) == self.nnz)

    def to_csr(self) -> sparse.csr_matrix:
        return sparse.csr_matrix((self.values, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        out[self.rows, self.cols] = self.values
        return out

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.dim, self.cols.copy(), self.rows.copy(), self.values.conj(),
                              f"{self.label}^H" if self.label else "")

    def tensor(self, other: "SparseOperator", max_dim: int = MAX_DENSE_DIM) -> "SparseOperator":
        """Kronecker product, qubits of self to the left of qubits of other"""
        dim = self.dim * other.dim
        if dim > max_dim:
            raise ResourceLimitError(f"Tensor product of size {dim}x{dim} exceeds {max_dim}")
        product = sparse.kron(self.to_csr(), other.to_csr(), format="coo")
        label = f"{self.label} x {other.label}" if self.label and other.label else ""
        return SparseOperator(dim, product.row.astype(np.int64), product.col.astype(np.int64),
                              product.data.astype(complex), label)

    def apply(self, vector) -> np.ndarray:
        v = np.asarray(vector, dtype=complex)
        if v.shape[0] != self.dim:
            raise DimensionMismatchError(f"Vector of length {v.shape[0]} against operator dim {self.dim}")
        return self.to_csr() @ v

    def conjugate(self, matrix, out: Optional[np.ndarray] = None) -> np.ndarray:
        """K X K^H, accumulated into out when given"""
        x = np.asarray(matrix, dtype=complex)
        if x.shape != (self.dim, self.dim):
            raise DimensionMismatchError(f"Matrix of shape {x.shape} against operator dim {self.dim}")
        if out is None:
            out = np.zeros((self.dim, self.dim), dtype=complex)
        if self.nnz == 0:
            return out
        if self.is_monomial:
            block = np.outer(self.values, self.values.conj()) * x[np.ix_(self.cols, self.cols)]
            out[np.ix_(self.rows, self.rows)] += block
            return out
        k = self.to_csr()
        kx = k @ x
        out += (k @ kx.conj().T).conj().T
        return out


def operator_sum(elements: Sequence[SparseOperator]) -> np.ndarray:
    """Dense sum of K^H K over the elements"""
    if not elements:
        raise ValueError("Operator sum of an empty element list")
    dim = elements[0].dim
    total = sparse.csr_matrix((dim, dim), dtype=complex)
    for element in elements:
        if element.dim != dim:
            raise DimensionMismatchError(f"Element dim {element.dim} differs from {dim}")
        k = element.to_csr()
        total = total + k.conj().T @ k
    return total.toarray()


def operator_sum_deviation(elements: Sequence[SparseOperator]) -> float:
    """max |sum K^H K - I| entrywise"""
    total = operator_sum(elements)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))

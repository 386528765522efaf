"""Vectorized transfer operators and moment-sequence evaluation.

The transfer operator of a model pair (A, B) is the symbol sum of the
Kronecker products of the two vectorized symbol maps.  Sandwiched between
the vectorized identity (boundary) and the vectorized initial states, its
L-th power evaluates the overlap moment ``sum_w P_A(w) * P_B(w)`` over all
length-L words.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .exceptions import AlphabetMismatchError, DimensionMismatchError, TransferSizeError
from .linalg import vec
from .models import ClassicalHmm, Qhmm

__all__ = [
    "TransferOperator",
    "MAX_DENSE_DIM",
    "vectorize_map",
    "build_quantum_transfer",
    "build_classical_transfer",
    "build_mixed_transfer",
    "build_transfer",
    "self_transfer",
    "embed_classical_in_quantum",
    "moment_via_transfer",
]

#: Largest dense operator dimension we are willing to build (d <= 8 self-pairs).
MAX_DENSE_DIM = 4096

_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class TransferOperator:
    """Dense transfer operator with its boundary and initial vectors.

    ``kind`` is ``"classical"`` (both factors act on diagonal states, one
    index per factor), ``"quantum"`` (both factors vectorized to squared
    dimension), or ``"mixed"``.  ``dims`` holds the memory dimensions of the
    two factors; ``boundary @ matrix**L @ initial`` is the length-L overlap
    moment of the underlying pair.
    """

    kind: str
    matrix: np.ndarray
    boundary: np.ndarray
    initial: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self) -> None:
        matrix = np.asarray(self.matrix, dtype=complex)
        n = matrix.shape[0]
        if matrix.shape != (n, n):
            raise DimensionMismatchError(f"transfer matrix must be square, got {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("transfer matrix contains non-finite entries")
        boundary = np.asarray(self.boundary, dtype=complex).reshape(-1)
        initial = np.asarray(self.initial, dtype=complex).reshape(-1)
        if boundary.size != n or initial.size != n:
            raise DimensionMismatchError("boundary/initial vectors must match the matrix dimension")
        for arr in (matrix, boundary, initial):
            arr.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "initial", initial)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _check_size(size: int) -> None:
    if size > MAX_DENSE_DIM:
        raise TransferSizeError(
            f"dense transfer operator of dimension {size} exceeds the limit {MAX_DENSE_DIM}"
        )


def _check_alphabets(a: ClassicalHmm | Qhmm, b: ClassicalHmm | Qhmm) -> None:
    if a.alphabet.symbols != b.alphabet.symbols:
        raise AlphabetMismatchError("models must share an alphabet (same symbols, same order)")


def vectorize_map(kraus_family: Sequence[np.ndarray]) -> np.ndarray:
    """Vectorized matrix of the CP map with the given Kraus operators.

    Under column stacking, ``vec(A X B) = kron(B.T, A) vec(X)``, so the map
    ``rho -> sum_k K rho K^dag`` becomes ``sum_k kron(conj(K), K)``.
    """
    ops = [np.asarray(op, dtype=complex) for op in kraus_family]
    if not ops:
        raise ValueError("kraus family must be nonempty")
    d = ops[0].shape[0]
    for op in ops:
        if op.shape != (d, d):
            raise DimensionMismatchError("all Kraus operators must share one square shape")
    out = np.zeros((d * d, d * d), dtype=complex)
    for op in ops:
        out += np.kron(op.conj(), op)
    return out


def build_quantum_transfer(a: Qhmm, b: Qhmm) -> TransferOperator:
    """Transfer operator of a QHMM pair on the doubled vectorized space."""
    _check_alphabets(a, b)
    size = a.dim**2 * b.dim**2
    _check_size(size)
    matrix = np.zeros((size, size), dtype=complex)
    for symbol in a.alphabet:
        matrix += np.kron(vectorize_map(a.kraus[symbol]), vectorize_map(b.kraus[symbol]))
    boundary = np.kron(vec(np.eye(a.dim)), vec(np.eye(b.dim)))
    initial = np.kron(vec(a.initial), vec(b.initial))
    return TransferOperator("quantum", matrix, boundary, initial, (a.dim, b.dim))


def build_classical_transfer(a: ClassicalHmm, b: ClassicalHmm) -> TransferOperator:
    """Transfer operator of a classical pair: symbol sum of transition Kroneckers."""
    _check_alphabets(a, b)
    size = a.dim * b.dim
    _check_size(size)
    matrix = np.zeros((size, size), dtype=complex)
    for symbol in a.alphabet:
        matrix += np.kron(a.transition[symbol], b.transition[symbol])
    boundary = np.ones(size, dtype=complex)
    initial = np.kron(a.initial, b.initial).astype(complex)
    return TransferOperator("classical", matrix, boundary, initial, (a.dim, b.dim))


def build_mixed_transfer(a: ClassicalHmm, b: Qhmm) -> TransferOperator:
    """Transfer operator pairing a classical model with a quantum one."""
    _check_alphabets(a, b)
    size = a.dim * b.dim**2
    _check_size(size)
    matrix = np.zeros((size, size), dtype=complex)
    for symbol in a.alphabet:
        matrix += np.kron(a.transition[symbol], vectorize_map(b.kraus[symbol]))
    boundary = np.kron(np.ones(a.dim), vec(np.eye(b.dim)))
    initial = np.kron(a.initial.astype(complex), vec(b.initial))
    return TransferOperator("mixed", matrix, boundary, initial, (a.dim, b.dim))


def build_transfer(a: ClassicalHmm | Qhmm, b: ClassicalHmm | Qhmm) -> TransferOperator:
    """Dispatch to the classical, quantum, or mixed builder."""
    if isinstance(a, ClassicalHmm) and isinstance(b, ClassicalHmm):
        return build_classical_transfer(a, b)
    if isinstance(a, Qhmm) and isinstance(b, Qhmm):
        return build_quantum_transfer(a, b)
    if isinstance(a, ClassicalHmm):
        return build_mixed_transfer(a, b)  # type: ignore[arg-type]
    # Swap so the classical factor comes first; moments are symmetric.
    return build_mixed_transfer(b, a)  # type: ignore[arg-type]


def self_transfer(model: ClassicalHmm | Qhmm) -> TransferOperator:
    """Transfer operator of a model paired with itself."""
    return build_transfer(model, model)


def embed_classical_in_quantum(operator: TransferOperator) -> TransferOperator:
    """Lift a classical transfer operator to the doubled-index quantum space.

    The classical matrix entries are copied to the positions whose four
    indices are pairwise doubled; every other entry is zero.  This is
    exactly the transfer operator of the strictly-incoherent embedding of
    the underlying models, so the nonzero spectrum is preserved and the
    rank stays bounded by the classical dimension.
    """
    if operator.kind != "classical":
        raise ValueError("only classical transfer operators can be embedded")
    m_a, m_b = operator.dims
    size = m_a**2 * m_b**2
    _check_size(size)
    # Isometry from the classical pair index (j, l) to the doubled quantum
    # index ((j, j), (l, l)) under column-stacking vectorization.
    rows = np.empty(m_a * m_b, dtype=int)
    for j in range(m_a):
        for l in range(m_b):
            rows[j * m_b + l] = (j * m_a + j) * m_b**2 + (l * m_b + l)
    selector = np.zeros((size, m_a * m_b))
    selector[rows, np.arange(m_a * m_b)] = 1.0
    matrix = selector @ operator.matrix @ selector.T
    boundary = selector @ operator.boundary
    initial = selector @ operator.initial
    return TransferOperator("quantum", matrix, boundary, initial, (m_a, m_b))


def moment_via_transfer(operator: TransferOperator, length: int) -> float:
    """Overlap moment at one length: boundary functional of the iterated operator."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    state = operator.initial
    for _ in range(length):
        state = operator.matrix @ state
    value = complex(operator.boundary.conj() @ state)
    if abs(value.imag) > _IMAG_TOL:
        raise ValueError(f"moment has imaginary residual {value.imag:.3g}")
    return float(value.real)

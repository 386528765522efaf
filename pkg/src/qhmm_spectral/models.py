"""Model types: classical hidden Markov models and their quantum extensions.

A classical model is a family of symbol-labeled substochastic transition
matrices plus an initial distribution.  Transition matrices follow the
column-source convention: ``transition[x][j, i]`` is the probability of
emitting symbol ``x`` and moving the memory from state ``i`` to state ``j``,
so that the columns of the symbol-summed matrix are stochastic.

A quantum model is a quantum instrument (one Kraus family per symbol whose
summed map is trace preserving) plus an initial density matrix.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    InvalidModelError,
    NonUnitaryError,
    UnknownSymbolError,
)
from .tolerances import DEFAULT_TOL, ToleranceConfig

__all__ = [
    "Alphabet",
    "ClassicalHmm",
    "Qhmm",
    "Violation",
    "ValidationReport",
    "validate_classical",
    "validate_quantum",
    "ensure_valid",
    "PhaseAssignment",
    "TabulatedPhases",
    "random_phases",
    "sio_embed",
    "three_state_model",
    "example_model_family",
    "QUANTUM_REDUCTION",
    "CLASSICAL_REDUCTION",
    "random_qhmm",
    "random_classical_hmm",
    "conjugate_by_unitary",
]

#: Callable mapping (source index, destination index, symbol) to a phase in
#: radians.  ``None`` stands for the all-zero assignment.
PhaseAssignment = Callable[[int, int, str], float]

QUANTUM_REDUCTION = "quantum_reduction"
CLASSICAL_REDUCTION = "classical_reduction"


@dataclass(frozen=True)
class Alphabet:
    """Ordered collection of unique symbol labels.

    The order fixes symbol indexing everywhere downstream (word enumeration,
    memory-state layout, serialization).
    """

    symbols: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        symbols = tuple(self.symbols)
        if len(symbols) == 0:
            raise ValueError("alphabet must contain at least one symbol")
        if not all(isinstance(s, str) for s in symbols):
            raise TypeError("alphabet symbols must be strings")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet symbols must be unique")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(symbols)})

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise UnknownSymbolError(f"symbol {symbol!r} not in alphabet {self.symbols}") from None

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._index


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _as_real_matrix(value: object, name: str) -> np.ndarray:
    matrix = np.array(value, dtype=float)
    if matrix.ndim != 2:
        raise DimensionMismatchError(f"{name} must be a 2-d matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"{name} contains non-finite entries")
    return _freeze(matrix)


def _as_complex_matrix(value: object, name: str) -> np.ndarray:
    matrix = np.array(value, dtype=complex)
    if matrix.ndim != 2:
        raise DimensionMismatchError(f"{name} must be a 2-d matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"{name} contains non-finite entries")
    return _freeze(matrix)


@dataclass(frozen=True)
class ClassicalHmm:
    """Classical hidden Markov model over a finite alphabet.

    Parameters
    ----------
    alphabet
        Output alphabet; its order fixes symbol indexing.
    transition
        Map symbol -> (m, m) nonnegative matrix.  Entry ``[j, i]`` is the
        probability of emitting the symbol while moving state ``i -> j``.
    initial
        Length-m initial distribution over hidden states.
    """

    alphabet: Alphabet
    transition: Mapping[str, np.ndarray]
    initial: np.ndarray

    def __post_init__(self) -> None:
        initial = np.array(self.initial, dtype=float).reshape(-1)
        if not np.all(np.isfinite(initial)):
            raise ValueError("initial distribution contains non-finite entries")
        m = initial.size
        if set(self.transition) != set(self.alphabet.symbols):
            raise DimensionMismatchError(
                "transition matrices must be keyed by exactly the alphabet symbols"
            )
        matrices: dict[str, np.ndarray] = {}
        for symbol in self.alphabet:
            matrix = _as_real_matrix(self.transition[symbol], f"transition[{symbol!r}]")
            if matrix.shape != (m, m):
                raise DimensionMismatchError(
                    f"transition[{symbol!r}] has shape {matrix.shape}, expected {(m, m)}"
                )
            matrices[symbol] = matrix
        object.__setattr__(self, "transition", matrices)
        object.__setattr__(self, "initial", _freeze(initial))

    @property
    def dim(self) -> int:
        """Number of hidden states."""
        return self.initial.size


@dataclass(frozen=True)
class Qhmm:
    """Quantum hidden Markov model: a quantum instrument plus initial state.

    Parameters
    ----------
    alphabet
        Output alphabet.
    kraus
        Map symbol -> nonempty sequence of (d, d) Kraus operators.  The
        operators of all symbols together must satisfy the completeness
        relation (the summed map is trace preserving).
    initial
        Initial (d, d) density matrix.
    """

    alphabet: Alphabet
    kraus: Mapping[str, tuple[np.ndarray, ...]]
    initial: np.ndarray

    def __post_init__(self) -> None:
        rho = _as_complex_matrix(self.initial, "initial")
        d = rho.shape[0]
        if rho.shape != (d, d):
            raise DimensionMismatchError(f"initial state must be square, got {rho.shape}")
        if set(self.kraus) != set(self.alphabet.symbols):
            raise DimensionMismatchError("kraus families must be keyed by exactly the alphabet symbols")
        families: dict[str, tuple[np.ndarray, ...]] = {}
        for symbol in self.alphabet:
            ops = tuple(
                _as_complex_matrix(op, f"kraus[{symbol!r}][{k}]")
                for k, op in enumerate(self.kraus[symbol])
            )
            if not ops:
                raise DimensionMismatchError(f"kraus[{symbol!r}] must contain at least one operator")
            for op in ops:
                if op.shape != (d, d):
                    raise DimensionMismatchError(
                        f"kraus[{symbol!r}] operator has shape {op.shape}, expected {(d, d)}"
                    )
            families[symbol] = ops
        object.__setattr__(self, "kraus", families)
        object.__setattr__(self, "initial", rho)

    @property
    def dim(self) -> int:
        """Memory Hilbert-space dimension."""
        return self.initial.shape[0]


@dataclass(frozen=True)
class Violation:
    """A single violated invariant with its measured residual."""

    name: str
    residual: float
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Collection of invariant violations; empty means the model is valid."""

    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations

    def residual(self, name: str) -> float:
        """Largest residual recorded under ``name`` (0.0 if absent)."""
        return max((v.residual for v in self.violations if v.name == name), default=0.0)


def validate_classical(model: ClassicalHmm, tol: ToleranceConfig = DEFAULT_TOL) -> ValidationReport:
    """Check stochasticity invariants of a classical model.

    Verifies that the initial distribution is a probability vector, that all
    transition entries lie in [0, 1], and that each source-state column sums
    to one across symbols and destinations.
    """
    violations: list[Violation] = []
    pi = model.initial
    neg = float(-(pi.min())) if pi.size else 0.0
    if neg > tol.eps_stoch:
        violations.append(Violation("initial_nonnegative", neg, "initial distribution has negative entries"))
    norm_res = abs(float(pi.sum()) - 1.0)
    if norm_res > tol.eps_stoch:
        violations.append(Violation("initial_normalized", norm_res, "initial distribution does not sum to 1"))
    entry_res = 0.0
    for matrix in model.transition.values():
        entry_res = max(entry_res, float(-(matrix.min())), float(matrix.max() - 1.0))
    if entry_res > tol.eps_stoch:
        violations.append(
            Violation("entries_in_unit_interval", entry_res, "transition entries outside [0, 1]")
        )
    column_sums = sum(matrix.sum(axis=0) for matrix in model.transition.values())
    col_res = float(np.max(np.abs(column_sums - 1.0)))
    if col_res > tol.eps_stoch:
        violations.append(
            Violation("column_stochastic", col_res, "per-source column sums across symbols differ from 1")
        )
    return ValidationReport(tuple(violations))


def validate_quantum(model: Qhmm, tol: ToleranceConfig = DEFAULT_TOL) -> ValidationReport:
    """Check instrument completeness and initial-state invariants of a QHMM."""
    violations: list[Violation] = []
    d = model.dim
    rho = model.initial
    herm_res = float(np.linalg.norm(rho - rho.conj().T))
    if herm_res > tol.eps_herm:
        violations.append(Violation("initial_hermitian", herm_res, "initial state is not Hermitian"))
    eigs = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    psd_res = float(max(0.0, -eigs.min()))
    if psd_res > tol.eps_psd:
        violations.append(Violation("initial_psd", psd_res, "initial state has a negative eigenvalue"))
    trace_res = abs(complex(np.trace(rho)) - 1.0)
    if trace_res > tol.eps_stoch:
        violations.append(Violation("initial_trace_one", float(trace_res), "initial state trace is not 1"))
    completeness = sum(
        op.conj().T @ op for ops in model.kraus.values() for op in ops
    )
    cptp_res = float(np.linalg.norm(completeness - np.eye(d)))
    if cptp_res > tol.eps_cptp:
        violations.append(
            Violation("trace_preserving", cptp_res, "summed Kraus families are not trace preserving")
        )
    return ValidationReport(tuple(violations))


def ensure_valid(model: ClassicalHmm | Qhmm, tol: ToleranceConfig = DEFAULT_TOL) -> None:
    """Raise :class:`InvalidModelError` unless ``model`` passes validation."""
    if isinstance(model, ClassicalHmm):
        report = validate_classical(model, tol)
    else:
        report = validate_quantum(model, tol)
    if not report.valid:
        summary = "; ".join(f"{v.name} (residual {v.residual:.3g})" for v in report.violations)
        raise InvalidModelError(f"model failed validation: {summary}")


class TabulatedPhases:
    """Phase assignment backed by a dense (m, m, |alphabet|) table."""

    def __init__(self, table: np.ndarray, alphabet: Alphabet, label: str = "tabulated") -> None:
        self.table = np.asarray(table, dtype=float)
        self.alphabet = alphabet
        self.label = label

    def __call__(self, source: int, dest: int, symbol: str) -> float:
        return float(self.table[source, dest, self.alphabet.index(symbol)])


def random_phases(dim: int, alphabet: Alphabet, seed: int) -> TabulatedPhases:
    """Uniform random phases in [0, 2*pi), deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    table = rng.uniform(0.0, 2.0 * np.pi, size=(dim, dim, len(alphabet)))
    return TabulatedPhases(table, alphabet, label=f"random(seed={seed})")


def phase_label(phases: PhaseAssignment | None) -> str:
    if phases is None:
        return "zero"
    return getattr(phases, "label", "custom")


def sio_embed(
    model: ClassicalHmm,
    phases: PhaseAssignment | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> Qhmm:
    """Embed a classical model as a QHMM built from strictly incoherent operations.

    Every nonzero transition entry ``i -> j`` under symbol ``x`` becomes one
    rank-one Kraus operator ``sqrt(p) * exp(i*phi) |j><i|``; the initial
    state is the diagonal embedding of the initial distribution.  Word
    probabilities of the embedded model equal the classical ones exactly,
    for any phase assignment.
    """
    ensure_valid(model, tol)
    m = model.dim
    kraus: dict[str, tuple[np.ndarray, ...]] = {}
    for symbol in model.alphabet:
        matrix = model.transition[symbol]
        ops = []
        for i in range(m):
            for j in range(m):
                weight = matrix[j, i]
                if weight <= 0.0:
                    continue
                op = np.zeros((m, m), dtype=complex)
                phi = 0.0 if phases is None else phases(i, j, symbol)
                op[j, i] = np.sqrt(weight) * np.exp(1j * phi)
                ops.append(op)
        if not ops:
            # A symbol may be unreachable; keep the family nonempty.
            ops.append(np.zeros((m, m), dtype=complex))
        kraus[symbol] = tuple(ops)
    return Qhmm(model.alphabet, kraus, np.diag(model.initial).astype(complex))


def _stationary_distribution(combined: np.ndarray) -> np.ndarray:
    """Stationary distribution of a column-stochastic matrix."""
    eigvals, eigvecs = np.linalg.eig(combined)
    idx = int(np.argmin(np.abs(eigvals - 1.0)))
    pi = np.real(eigvecs[:, idx])
    pi = np.abs(pi)
    return pi / pi.sum()


def three_state_model(
    alpha: float,
    beta: float,
    gamma1: float,
    gamma2: float,
    initial: np.ndarray | None = None,
) -> ClassicalHmm:
    """Three-state binary-alphabet model with one free column.

    The first two columns are fixed by ``alpha`` and ``beta``; the third
    column emits 0 with weights (gamma1, gamma2) and 1 with the remaining
    weight.  When ``initial`` is omitted, the stationary distribution of the
    symbol-summed transition matrix is used.
    """
    gamma_bar = 1.0 - gamma1 - gamma2
    if min(gamma1, gamma2, gamma_bar) < 0.0:
        raise ValueError("gamma weights must be nonnegative and sum to at most 1")
    t0 = np.array(
        [
            [alpha, beta, gamma1],
            [1.0 - alpha, 0.0, gamma2],
            [0.0, 0.0, 0.0],
        ]
    )
    t1 = np.array(
        [
            [0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
            [0.0, 1.0 - beta, gamma_bar],
        ]
    )
    if initial is None:
        initial = _stationary_distribution(t0 + t1)
    return ClassicalHmm(Alphabet(("0", "1")), {"0": t0, "1": t1}, initial)


def example_model_family(alpha: float, beta: float, branch: str) -> ClassicalHmm:
    """Three-state, two-parameter family with memory-reducible branches.

    ``branch`` selects how the third column is tied to (alpha, beta):

    * ``"quantum_reduction"``: gamma1 = ((sqrt(alpha)+sqrt(beta))/nu)^2,
      gamma2 = (1-alpha)/nu^2, gamma_bar = (1-beta)/nu^2, with nu^2 fixed
      by normalization.  The square-root memory states become linearly
      dependent, so a two-dimensional quantum model generates the process.
    * ``"classical_reduction"``: gamma1 = (alpha+beta)/2, gamma2 = (1-alpha)/2,
      gamma_bar = 1 - gamma1 - gamma2.  The third column is the average of
      the first two, so the process admits a two-state classical model.

    Parameters strictly inside (0, 1) are required; the boundary values
    degenerate the family.
    """
    if not (0.0 < alpha < 1.0 and 0.0 < beta < 1.0):
        raise ValueError("alpha and beta must lie strictly inside (0, 1)")
    if branch == QUANTUM_REDUCTION:
        nu_sq = (np.sqrt(alpha) + np.sqrt(beta)) ** 2 + (1.0 - alpha) + (1.0 - beta)
        gamma1 = (np.sqrt(alpha) + np.sqrt(beta)) ** 2 / nu_sq
        gamma2 = (1.0 - alpha) / nu_sq
    elif branch == CLASSICAL_REDUCTION:
        gamma1 = (alpha + beta) / 2.0
        gamma2 = (1.0 - alpha) / 2.0
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return three_state_model(alpha, beta, float(gamma1), float(gamma2))


def random_classical_hmm(dim: int, alphabet_size: int, seed: int) -> ClassicalHmm:
    """Random valid classical model, deterministic in ``seed``.

    Each source column draws ``dim * alphabet_size`` positive weights and
    normalizes them to one, so the column-stochasticity invariant holds by
    construction.
    """
    if dim < 1 or alphabet_size < 1:
        raise ValueError("dim and alphabet_size must be at least 1")
    rng = np.random.default_rng(seed)
    alphabet = Alphabet(tuple(str(k) for k in range(alphabet_size)))
    weights = rng.random((alphabet_size, dim, dim)) + 1e-3
    weights /= weights.sum(axis=(0, 1), keepdims=True)
    transition = {symbol: weights[k] for k, symbol in enumerate(alphabet)}
    initial = rng.random(dim) + 1e-3
    initial /= initial.sum()
    return ClassicalHmm(alphabet, transition, initial)


def random_qhmm(dim: int, alphabet_size: int, kraus_per_symbol: int, seed: int) -> Qhmm:
    """Random valid QHMM, deterministic in ``seed``.

    The Kraus operators are blocks of a random isometry, so completeness
    holds to machine precision; the initial state is a normalized random
    Wishart matrix.
    """
    if dim < 1 or alphabet_size < 1 or kraus_per_symbol < 1:
        raise ValueError("all arguments must be at least 1")
    rng = np.random.default_rng(seed)
    alphabet = Alphabet(tuple(str(k) for k in range(alphabet_size)))
    n_ops = alphabet_size * kraus_per_symbol
    g = rng.standard_normal((n_ops * dim, dim)) + 1j * rng.standard_normal((n_ops * dim, dim))
    isometry, _ = np.linalg.qr(g)
    blocks = [isometry[k * dim : (k + 1) * dim, :] for k in range(n_ops)]
    kraus = {
        symbol: tuple(blocks[k * kraus_per_symbol + a] for a in range(kraus_per_symbol))
        for k, symbol in enumerate(alphabet)
    }
    g_rho = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g_rho @ g_rho.conj().T
    rho /= np.trace(rho).real
    return Qhmm(alphabet, kraus, rho)


def conjugate_by_unitary(model: Qhmm, unitary: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> Qhmm:
    """Rotate a QHMM by a unitary change of the memory basis.

    The returned model has Kraus operators ``U K U^dag`` and initial state
    ``U rho U^dag``; it generates exactly the same process.
    """
    u = np.asarray(unitary, dtype=complex)
    d = model.dim
    if u.shape != (d, d):
        raise DimensionMismatchError(f"unitary has shape {u.shape}, expected {(d, d)}")
    unitarity = float(np.linalg.norm(u.conj().T @ u - np.eye(d)))
    if unitarity > tol.eps_cptp:
        raise NonUnitaryError(f"matrix is not unitary (residual {unitarity:.3g})")
    kraus = {
        symbol: tuple(u @ op @ u.conj().T for op in ops)
        for symbol, ops in model.kraus.items()
    }
    return Qhmm(model.alphabet, kraus, u @ model.initial @ u.conj().T)

"""Square-root memory states, Gram-rank detection, and model compression.

A classical model's hidden state ``i`` is represented by the amplitude
vector over (destination, symbol) pairs whose squared entries are the
outgoing transition weights.  Whenever these vectors are linearly
dependent, the model compresses into a quantum model on their span, which
generates exactly the same word probabilities in a lower dimension.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import CompressionError
from .models import (
    CLASSICAL_REDUCTION,
    QUANTUM_REDUCTION,
    ClassicalHmm,
    PhaseAssignment,
    Qhmm,
    ensure_valid,
    example_model_family,
    phase_label,
    random_phases,
)
from .evaluate import enumerate_distribution
from .spectral import complexity_bounds, spectrum
from .tolerances import DEFAULT_TOL, ToleranceConfig
from .transfer import self_transfer

__all__ = [
    "MemoryStateSet",
    "CompressionProvenance",
    "CompressedQhmm",
    "build_memory_states",
    "incoherent_profile_rank",
    "compress",
    "phase_rank_search",
    "SweepRow",
    "sweep_reduction_curves",
    "SWEEP_CSV_COLUMNS",
]

_THREADS_ENV_VAR = "QHMM_SPECTRAL_THREADS"


@dataclass(frozen=True)
class MemoryStateSet:
    """Amplitude memory states of a classical model with their Gram data.

    ``states`` has one column per hidden state; the row for destination
    ``j`` and symbol index ``a`` is ``j * |alphabet| + a``.  The numerical
    rank counts Gram singular values above ``eps_rank`` times the largest.
    """

    states: np.ndarray
    gram: np.ndarray
    numerical_rank: int
    phase_assignment: PhaseAssignment | None

    @property
    def dim(self) -> int:
        return self.states.shape[1]


def _state_matrix(model: ClassicalHmm, phases: PhaseAssignment | None) -> np.ndarray:
    m = model.dim
    n_symbols = len(model.alphabet)
    psi = np.zeros((m * n_symbols, m), dtype=complex)
    for a, symbol in enumerate(model.alphabet):
        matrix = model.transition[symbol]
        for i in range(m):
            for j in range(m):
                weight = matrix[j, i]
                if weight <= 0.0:
                    continue
                phi = 0.0 if phases is None else phases(i, j, symbol)
                psi[j * n_symbols + a, i] = np.sqrt(weight) * np.exp(1j * phi)
    return psi


def build_memory_states(
    model: ClassicalHmm,
    phases: PhaseAssignment | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MemoryStateSet:
    """Square-root amplitude states of every hidden state, plus Gram and rank.

    Each state is unit norm by column stochasticity.  The phase of each
    amplitude is a free parameter that never affects the generated word
    probabilities but does change the Gram matrix, and with it the
    compressibility of the model.
    """
    ensure_valid(model, tol)
    psi = _state_matrix(model, phases)
    gram = psi.conj().T @ psi
    sigma = np.linalg.svd(gram, compute_uv=False)
    rank = int(np.count_nonzero(sigma > tol.eps_rank * sigma[0])) if sigma[0] > 0 else 0
    return MemoryStateSet(psi, gram, rank, phases)


def incoherent_profile_rank(model: ClassicalHmm, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Rank of the transition-profile vectors, without square roots.

    Linear dependence among these probability vectors is the incoherent
    (classical) analog of memory-state dependence: a dependent column makes
    the process generable by a lower-dimensional classical model.
    """
    m = model.dim
    n_symbols = len(model.alphabet)
    profiles = np.zeros((m * n_symbols, m))
    for a, symbol in enumerate(model.alphabet):
        matrix = model.transition[symbol]
        for j in range(m):
            profiles[j * n_symbols + a, :] = matrix[j, :]
    gram = profiles.T @ profiles
    sigma = np.linalg.svd(gram, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > tol.eps_rank * sigma[0]))


@dataclass(frozen=True)
class CompressionProvenance:
    """Source model and phase assignment a compressed model was built from."""

    source: ClassicalHmm
    phases: str


@dataclass(frozen=True)
class CompressedQhmm:
    """Quantum model on the memory span of a classical model.

    ``isometry`` holds the compressed coordinates of the original memory
    states (one column per source hidden state); ``basis`` maps the
    compressed space back into the full (destination, symbol) amplitude
    space.  ``warnings`` carries rank-stability notes, if any.
    """

    model: Qhmm
    isometry: np.ndarray
    basis: np.ndarray
    provenance: CompressionProvenance
    warnings: tuple[str, ...]

    @property
    def dim(self) -> int:
        return self.model.dim


def compress(
    model: ClassicalHmm,
    phases: PhaseAssignment | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
    verify_length: int = 6,
) -> CompressedQhmm:
    """Compress a classical model into a quantum model on its memory span.

    Builds the amplitude states, picks an orthonormal basis of their span
    by column-pivoted QR, and projects the lifted rank-one Kraus operators
    and the initial state into that basis.  The resulting model is trace
    preserving on the span by construction and reproduces every source word
    probability exactly; agreement is verified exhaustively up to
    ``verify_length`` before returning.
    """
    ensure_valid(model, tol)
    state_set = build_memory_states(model, phases, tol)
    m = model.dim
    n_symbols = len(model.alphabet)
    full_dim = m * n_symbols
    psi = state_set.states
    rank = state_set.numerical_rank
    if rank == 0:
        raise CompressionError("memory states span a zero-dimensional space")

    warnings: list[str] = []
    sigma = np.linalg.svd(state_set.gram, compute_uv=False)
    threshold = tol.eps_rank * sigma[0]
    if sigma[rank - 1] < 10.0 * threshold:
        warnings.append(
            "rank decision is close to the threshold: smallest kept Gram singular value "
            f"{sigma[rank - 1]:.3e} is within 10x of the cut {threshold:.3e}"
        )

    q, _, _ = scipy.linalg.qr(psi, mode="economic", pivoting=True)
    basis = q[:, :rank]

    compressed_states = basis.conj().T @ psi
    kraus: dict[str, tuple[np.ndarray, ...]] = {}
    for a, symbol in enumerate(model.alphabet):
        ops = []
        for k in range(m):
            lifted = np.zeros((full_dim, full_dim), dtype=complex)
            lifted[:, k * n_symbols + a] = psi[:, k]
            ops.append(basis.conj().T @ lifted @ basis)
        kraus[symbol] = tuple(ops)
    rho_full = psi @ np.diag(model.initial).astype(complex) @ psi.conj().T
    rho = basis.conj().T @ rho_full @ basis
    rho = (rho + rho.conj().T) / 2.0

    compressed = Qhmm(model.alphabet, kraus, rho)
    ensure_valid(compressed, tol)

    for length in range(1, verify_length + 1):
        source_dist = enumerate_distribution(model, length)
        compressed_dist = enumerate_distribution(compressed, length)
        deviation = max(
            abs(source_dist.probabilities[w] - compressed_dist.probabilities[w])
            for w in source_dist.probabilities
        )
        if deviation > tol.eps_prob:
            raise CompressionError(
                f"compressed model deviates by {deviation:.3e} at word length {length}"
            )

    return CompressedQhmm(
        model=compressed,
        isometry=compressed_states,
        basis=basis,
        provenance=CompressionProvenance(model, phase_label(phases)),
        warnings=tuple(warnings),
    )


def phase_rank_search(
    model: ClassicalHmm,
    seeds: list[int],
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[tuple[int, int]]:
    """Gram rank under one random phase assignment per seed.

    A simple explorer for phase-induced rank reductions; finding optimal
    phases is out of scope.
    """
    out = []
    for seed in seeds:
        assignment = random_phases(model.dim, model.alphabet, seed)
        out.append((seed, build_memory_states(model, assignment, tol).numerical_rank))
    return out


@dataclass(frozen=True)
class SweepRow:
    """One (beta, branch) point of a reduction-curve sweep."""

    beta: float
    branch: str
    gamma1: float
    gamma2: float
    gamma_bar: float
    gram_rank: int
    spectrum_size_effective: int
    quantum_min_dim: int
    classical_min_dim: int


SWEEP_CSV_COLUMNS = (
    "beta",
    "branch",
    "gamma1",
    "gamma2",
    "gamma_bar",
    "gram_rank",
    "spectrum_size_effective",
    "quantum_min_dim",
    "classical_min_dim",
)


def _max_workers() -> int:
    value = os.environ.get(_THREADS_ENV_VAR, "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def _sweep_row(alpha: float, beta: float, branch: str, tol: ToleranceConfig) -> SweepRow:
    model = example_model_family(alpha, beta, branch)
    gamma1 = float(model.transition["0"][0, 2])
    gamma2 = float(model.transition["0"][1, 2])
    gamma_bar = float(model.transition["1"][2, 2])
    if branch == QUANTUM_REDUCTION:
        rank = build_memory_states(model, None, tol).numerical_rank
    else:
        rank = incoherent_profile_rank(model, tol)
    bounds = complexity_bounds(spectrum(self_transfer(model), tol))
    return SweepRow(
        beta=beta,
        branch=branch,
        gamma1=gamma1,
        gamma2=gamma2,
        gamma_bar=gamma_bar,
        gram_rank=rank,
        spectrum_size_effective=bounds.spectrum_size,
        quantum_min_dim=bounds.quantum_min_dim,
        classical_min_dim=bounds.classical_min_dim,
    )


def sweep_reduction_curves(
    alpha: float,
    beta_grid: list[float],
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[SweepRow]:
    """Reduction-curve data for both branches over a grid of beta values.

    For every beta the quantum-reduction and classical-reduction parameter
    points are emitted with their branch-appropriate Gram rank: the
    amplitude-state rank under zero phases for the quantum branch, and the
    incoherent transition-profile rank for the classical branch (the
    phase-free amplitude states are full rank on that line; the reduction
    there is a classical state merger).  Each row also carries the memory
    bounds of the generated process.

    Rows are computed, possibly in parallel (capped by the
    ``QHMM_SPECTRAL_THREADS`` environment variable), in a fixed
    deterministic order: both branches per beta, quantum first.
    """
    tasks = [
        (alpha, beta, branch)
        for beta in beta_grid
        for branch in (QUANTUM_REDUCTION, CLASSICAL_REDUCTION)
    ]
    workers = _max_workers()
    if workers == 1:
        return [_sweep_row(a, b, branch, tol) for a, b, branch in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: _sweep_row(t[0], t[1], t[2], tol), tasks))

"""Spectral invariants, memory bounds, and compression for classical and quantum hidden Markov models.

The package builds both model classes, evaluates exact word probabilities,
constructs vectorized transfer operators, extracts their spectral
invariants, derives lower bounds on generative memory, tests model pairs
for process equivalence, and compresses classical models into
lower-dimensional quantum ones via square-root memory states.
"""

from .compress import (
    CompressedQhmm,
    CompressionProvenance,
    MemoryStateSet,
    SweepRow,
    build_memory_states,
    compress,
    incoherent_profile_rank,
    phase_rank_search,
    sweep_reduction_curves,
)
from .evaluate import (
    WordDistribution,
    as_word,
    enumerate_distribution,
    sample,
    sample_many,
    squared_moment,
    word_prob_classical,
    word_prob_quantum,
    word_probability,
)
from .exceptions import (
    AlphabetMismatchError,
    CompressionError,
    DefectiveOperatorError,
    DimensionMismatchError,
    EnumerationCapError,
    InvalidModelError,
    ModelFormatError,
    NonUnitaryError,
    QhmmError,
    TransferSizeError,
    UnderflowError,
    UnknownSymbolError,
)
from .model_io import (
    load_model,
    load_transfer,
    model_from_json_dict,
    model_to_json_dict,
    save_model,
    save_transfer,
)
from .models import (
    CLASSICAL_REDUCTION,
    QUANTUM_REDUCTION,
    Alphabet,
    ClassicalHmm,
    Qhmm,
    TabulatedPhases,
    ValidationReport,
    Violation,
    conjugate_by_unitary,
    ensure_valid,
    example_model_family,
    random_classical_hmm,
    random_phases,
    random_qhmm,
    sio_embed,
    three_state_model,
    validate_classical,
    validate_quantum,
)
from .spectral import (
    BoundReport,
    EigenvalueCluster,
    EquivalenceVerdict,
    MomentCheck,
    SpectrumReport,
    check_equivalence,
    complexity_bounds,
    reconstruct_moment,
    spectrum,
    vandermonde_residual,
)
from .tolerances import DEFAULT_TOL, ToleranceConfig
from .transfer import (
    TransferOperator,
    build_classical_transfer,
    build_mixed_transfer,
    build_quantum_transfer,
    build_transfer,
    embed_classical_in_quantum,
    moment_via_transfer,
    self_transfer,
    vectorize_map,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ClassicalHmm",
    "Qhmm",
    "ValidationReport",
    "Violation",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "validate_classical",
    "validate_quantum",
    "ensure_valid",
    "sio_embed",
    "three_state_model",
    "example_model_family",
    "QUANTUM_REDUCTION",
    "CLASSICAL_REDUCTION",
    "random_qhmm",
    "random_classical_hmm",
    "random_phases",
    "TabulatedPhases",
    "conjugate_by_unitary",
    "as_word",
    "word_prob_classical",
    "word_prob_quantum",
    "word_probability",
    "WordDistribution",
    "enumerate_distribution",
    "squared_moment",
    "sample",
    "sample_many",
    "TransferOperator",
    "vectorize_map",
    "build_quantum_transfer",
    "build_classical_transfer",
    "build_mixed_transfer",
    "build_transfer",
    "self_transfer",
    "embed_classical_in_quantum",
    "moment_via_transfer",
    "SpectrumReport",
    "EigenvalueCluster",
    "BoundReport",
    "MomentCheck",
    "EquivalenceVerdict",
    "spectrum",
    "reconstruct_moment",
    "complexity_bounds",
    "check_equivalence",
    "vandermonde_residual",
    "MemoryStateSet",
    "CompressedQhmm",
    "CompressionProvenance",
    "SweepRow",
    "build_memory_states",
    "incoherent_profile_rank",
    "compress",
    "phase_rank_search",
    "sweep_reduction_curves",
    "model_to_json_dict",
    "model_from_json_dict",
    "save_model",
    "load_model",
    "save_transfer",
    "load_transfer",
    "QhmmError",
    "DimensionMismatchError",
    "UnknownSymbolError",
    "AlphabetMismatchError",
    "InvalidModelError",
    "NonUnitaryError",
    "EnumerationCapError",
    "UnderflowError",
    "TransferSizeError",
    "CompressionError",
    "DefectiveOperatorError",
    "ModelFormatError",
]

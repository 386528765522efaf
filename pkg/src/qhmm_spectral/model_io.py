"""JSON model interchange format and CSV emitters.

Model files carry a ``type`` tag ("classical" or "quantum"), the alphabet,
the memory dimension, the transition matrices or Kraus families keyed by
symbol, and the initial vector or density matrix.  Complex entries are
``[re, im]`` pairs; real entries may be plain numbers.  Files round-trip at
full double precision.
"""

from __future__ import annotations

import csv
import json
from typing import IO, Any

import numpy as np

from .compress import SWEEP_CSV_COLUMNS, CompressedQhmm, SweepRow
from .evaluate import WordDistribution
from .exceptions import ModelFormatError, QhmmError
from .models import Alphabet, ClassicalHmm, Qhmm
from .spectral import BoundReport, EquivalenceVerdict, SpectrumReport
from .transfer import TransferOperator

__all__ = [
    "model_to_json_dict",
    "model_from_json_dict",
    "save_model",
    "load_model",
    "compressed_to_json_dict",
    "transfer_to_json_dict",
    "transfer_from_json_dict",
    "save_transfer",
    "load_transfer",
    "distribution_to_csv",
    "distribution_to_json_dict",
    "sweep_rows_to_csv",
    "spectrum_report_as_dict",
    "bound_report_as_dict",
    "verdict_as_dict",
]


def _complex_entry(value: complex) -> Any:
    return [float(np.real(value)), float(np.imag(value))]


def _entry_from_json(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(part, (int, float)) for part in value)
    ):
        return complex(value[0], value[1])
    raise ModelFormatError(f"{where}: expected a number or an [re, im] pair, got {value!r}")


def _real_matrix_json(matrix: np.ndarray) -> list[list[float]]:
    return [[float(entry) for entry in row] for row in np.asarray(matrix)]

def _complex_matrix_json(matrix: np.ndarray) -> list[list[Any]]:
    return [[_complex_entry(entry) for entry in row] for row in np.asarray(matrix)]


def _matrix_from_json(rows: Any, where: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ModelFormatError(f"{where}: expected a list of rows")
    return np.array(
        [[_entry_from_json(v, where) for v in row] for row in rows], dtype=complex
    )


def model_to_json_dict(model: ClassicalHmm | Qhmm) -> dict[str, Any]:
    """Schema dictionary for a model, ready for ``json.dump``."""
    if isinstance(model, ClassicalHmm):
        return {
            "type": "classical",
            "alphabet": list(model.alphabet.symbols),
            "dim": model.dim,
            "transition": {
                symbol: _real_matrix_json(matrix) for symbol, matrix in model.transition.items()
            },
            "initial": [float(p) for p in model.initial],
        }
    return {
        "type": "quantum",
        "alphabet": list(model.alphabet.symbols),
        "dim": model.dim,
        "kraus": {
            symbol: [_complex_matrix_json(op) for op in ops]
            for symbol, ops in model.kraus.items()
        },
        "initial": _complex_matrix_json(model.initial),
    }


def compressed_to_json_dict(compressed: CompressedQhmm) -> dict[str, Any]:
    """Compressed model in the standard schema plus a provenance block."""
    data = model_to_json_dict(compressed.model)
    data["provenance"] = {
        "source": model_to_json_dict(compressed.provenance.source),
        "phases": compressed.provenance.phases,
        "isometry": _complex_matrix_json(compressed.isometry),
        "warnings": list(compressed.warnings),
    }
    return data


def _require(data: dict[str, Any], key: str) -> Any:
    if key not in data:
        raise ModelFormatError(f"model file is missing the {key!r} field")
    return data[key]


def model_from_json_dict(data: dict[str, Any]) -> ClassicalHmm | Qhmm:
    """Parse a schema dictionary into a model.

    Structural problems (missing fields, ragged matrices, dimension
    mismatches) raise :class:`ModelFormatError`; stochasticity violations do
    not, so an ill-normalized model can still be loaded and then reported by
    validation.
    """
    if not isinstance(data, dict):
        raise ModelFormatError("model file must contain a JSON object")
    kind = _require(data, "type")
    symbols = _require(data, "alphabet")
    if not isinstance(symbols, list) or not all(isinstance(s, str) for s in symbols):
        raise ModelFormatError("alphabet must be a list of strings")
    try:
        alphabet = Alphabet(tuple(symbols))
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(str(exc)) from exc
    dim = _require(data, "dim")
    if not isinstance(dim, int) or dim < 1:
        raise ModelFormatError("dim must be a positive integer")

    try:
        if kind == "classical":
            transition_json = _require(data, "transition")
            if not isinstance(transition_json, dict):
                raise ModelFormatError("transition must map symbols to matrices")
            transition = {}
            for symbol, rows in transition_json.items():
                matrix = _matrix_from_json(rows, f"transition[{symbol!r}]")
                if np.max(np.abs(matrix.imag)) > 0.0:
                    raise ModelFormatError(f"transition[{symbol!r}] has complex entries")
                transition[symbol] = matrix.real
            initial_json = _require(data, "initial")
            initial = np.array(
                [_entry_from_json(v, "initial") for v in initial_json], dtype=complex
            )
            if np.max(np.abs(initial.imag), initial=0.0) > 0.0:
                raise ModelFormatError("initial distribution has complex entries")
            model: ClassicalHmm | Qhmm = ClassicalHmm(alphabet, transition, initial.real)
        elif kind == "quantum":
            kraus_json = _require(data, "kraus")
            if not isinstance(kraus_json, dict):
                raise ModelFormatError("kraus must map symbols to lists of matrices")
            kraus = {}
            for symbol, ops in kraus_json.items():
                if not isinstance(ops, list) or not ops:
                    raise ModelFormatError(f"kraus[{symbol!r}] must be a nonempty list")
                kraus[symbol] = tuple(
                    _matrix_from_json(op, f"kraus[{symbol!r}][{k}]") for k, op in enumerate(ops)
                )
            initial = _matrix_from_json(_require(data, "initial"), "initial")
            model = Qhmm(alphabet, kraus, initial)
        else:
            raise ModelFormatError(f"unknown model type {kind!r}")
    except ModelFormatError:
        raise
    except (QhmmError, ValueError, TypeError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from exc
    if model.dim != dim:
        raise ModelFormatError(f"declared dim {dim} does not match matrices of size {model.dim}")
    return model


def save_model(model: ClassicalHmm | Qhmm | CompressedQhmm, path: str) -> None:
    if isinstance(model, CompressedQhmm):
        data = compressed_to_json_dict(model)
    else:
        data = model_to_json_dict(model)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2)
        handle.write("\n")


def load_model(path: str) -> ClassicalHmm | Qhmm:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid JSON in {path}: {exc}") from exc
    return model_from_json_dict(data)


def transfer_to_json_dict(operator: TransferOperator) -> dict[str, Any]:
    """Transfer operator with dimensions, kind, vectors, and dense matrix."""
    return {
        "kind": operator.kind,
        "dims": list(operator.dims),
        "size": operator.size,
        "matrix": _complex_matrix_json(operator.matrix),
        "boundary": [_complex_entry(v) for v in operator.boundary],
        "initial": [_complex_entry(v) for v in operator.initial],
    }


def transfer_from_json_dict(data: dict[str, Any]) -> TransferOperator:
    kind = _require(data, "kind")
    dims = _require(data, "dims")
    matrix = _matrix_from_json(_require(data, "matrix"), "matrix")
    boundary = np.array([_entry_from_json(v, "boundary") for v in _require(data, "boundary")])
    initial = np.array([_entry_from_json(v, "initial") for v in _require(data, "initial")])
    try:
        return TransferOperator(kind, matrix, boundary, initial, (int(dims[0]), int(dims[1])))
    except (QhmmError, ValueError, TypeError, IndexError) as exc:
        raise ModelFormatError(f"malformed transfer file: {exc}") from exc


def save_transfer(operator: TransferOperator, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(transfer_to_json_dict(operator), handle, indent=2)
        handle.write("\n")


def load_transfer(path: str) -> TransferOperator:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid JSON in {path}: {exc}") from exc
    return transfer_from_json_dict(data)


def distribution_to_csv(dist: WordDistribution, handle: IO[str]) -> None:
    """Write a word distribution as ``word, probability`` rows."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(["word", "probability"])
    for word, probability in dist.as_rows():
        writer.writerow([word, repr(probability)])


def distribution_to_json_dict(dist: WordDistribution) -> dict[str, Any]:
    return {
        "length": dist.length,
        "probabilities": {word: probability for word, probability in dist.as_rows()},
    }


def sweep_rows_to_csv(rows: list[SweepRow], handle: IO[str]) -> None:
    """Write reduction-sweep rows with full-precision parameter values."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(SWEEP_CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                repr(row.beta),
                row.branch,
                repr(row.gamma1),
                repr(row.gamma2),
                repr(row.gamma_bar),
                row.gram_rank,
                row.spectrum_size_effective,
                row.quantum_min_dim,
                row.classical_min_dim,
            ]
        )


def _complex_pair(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def spectrum_report_as_dict(report: SpectrumReport) -> dict[str, Any]:
    return {
        "raw_eigenvalue_count": int(report.raw_eigenvalues.size),
        "spectral_radius": report.spectral_radius,
        "distinct_nonzero": [
            {
                "value": _complex_pair(c.value),
                "multiplicity": c.multiplicity,
                "alpha": _complex_pair(c.alpha),
            }
            for c in report.distinct_nonzero
        ],
        "distinct_nonzero_count": len(report.distinct_nonzero),
        "effective_count": report.effective_count,
        "diagonalizable": report.diagonalizable,
        "eigenvector_condition": report.eigenvector_condition,
        "tolerances": {
            "eps_eig_dedup": report.tolerances.eps_eig_dedup,
            "eps_eig_zero": report.tolerances.eps_eig_zero,
        },
    }


def bound_report_as_dict(report: BoundReport) -> dict[str, Any]:
    return {
        "spectrum_size": report.spectrum_size,
        "raw_spectrum_size": report.raw_spectrum_size,
        "quantum_min_dim": report.quantum_min_dim,
        "classical_min_dim": report.classical_min_dim,
        "c_q_lower_bits": report.c_q_lower_bits,
        "c_c_lower_bits": report.c_c_lower_bits,
    }


def verdict_as_dict(verdict: EquivalenceVerdict) -> dict[str, Any]:
    return {
        "verdict": verdict.verdict,
        "reason": verdict.reason,
        "spectra_match": verdict.spectra_match,
        "coefficients_match": verdict.coefficients_match,
        "moment_checks": [
            {"length": c.length, "lhs": c.lhs, "rhs": c.rhs, "residual": c.residual}
            for c in verdict.moment_checks
        ],
        "brute_force_match": verdict.brute_force_match,
        "brute_force_length": verdict.brute_force_length,
    }

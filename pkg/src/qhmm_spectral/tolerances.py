"""Numerical tolerances used by validation, spectra, and compression."""

from __future__ import annotations

from dataclasses import dataclass, fields

__all__ = ["ToleranceConfig", "DEFAULT_TOL"]


@dataclass(frozen=True)
class ToleranceConfig:
    """Bundle of strictly positive numerical tolerances.

    Attributes
    ----------
    eps_stoch
        Slack on probability normalization (initial vectors, column sums,
        trace of the initial density matrix).
    eps_cptp
        Frobenius-norm slack on the trace-preservation identity of the
        summed Kraus families, and on unitarity checks.
    eps_herm
        Slack on Hermiticity of density matrices.
    eps_psd
        Most negative admissible eigenvalue of a density matrix.
    eps_eig_zero
        Relative cut below which an eigenvalue counts as zero, and the
        absolute cut below which a projector coefficient counts as zero.
    eps_eig_dedup
        Relative distance (to the spectral radius) under which eigenvalues
        are clustered into one distinct value.
    eps_rank
        Relative singular-value cut for numerical rank decisions.
    eps_prob
        Slack on word-probability normalization and agreement checks.
    """

    eps_stoch: float = 1e-9
    eps_cptp: float = 1e-9
    eps_herm: float = 1e-9
    eps_psd: float = 1e-9
    eps_eig_zero: float = 1e-9
    eps_eig_dedup: float = 1e-7
    eps_rank: float = 1e-8
    eps_prob: float = 1e-10

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) <= 0.0:
                raise ValueError(f"tolerance {f.name} must be strictly positive")


DEFAULT_TOL = ToleranceConfig()

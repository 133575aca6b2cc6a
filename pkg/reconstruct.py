"""Pure three-qubit state reconstruction from two two-party marginals.

For a pure |psi> on A|BC, rho_A and rho_BC share their non-zero spectrum
{p_0, p_1} and |psi> = sum_i e^{i a_i} sqrt(p_i) |a_i>|v_i>. The eigenvectors
fix everything except one relative phase, which is chosen so that the
AB marginal of the candidate matches the measured rho_AB as closely as
possible (an analytic minimizer of the Frobenius distance).

Generalized GHZ states cos(a)|000> + sin(a)|111> are the exception: either
the spectrum is degenerate (a = pi/4) or the AB marginal carries no
information about the phase. Both cases raise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from logger import get_logger
from qcore import (
    DensityMatrix,
    DimensionError,
    Ket,
    as_density,
    dagger,
    eig_hermitian,
    partial_trace,
    permute_ket,
    psd_project,
    relabel,
)
from utils.env_utils import get_float_env_var

if TYPE_CHECKING:
    from qcore import CMatrix

logger = get_logger(__name__)

DEFAULT_TOL_DEGEN = 1e-3
DEFAULT_TOL_INCONSISTENT = 0.2
RANK_ONE_TOL = 1e-9
CROSS_BLOCK_TOL = 1e-9
ORTHONORMAL_ATOL = 1e-9


class ReconstructionError(ValueError):
    """Base class for marginals that do not determine a pure state."""


class DegeneracyError(ReconstructionError):
    """Equal Schmidt weights on A|BC: the generalized GHZ exception."""


class PhaseIndeterminateError(DegeneracyError):
    """The AB marginal carries no information about the relative phase."""


class InconsistentMarginalsError(ReconstructionError):
    """rho_A and rho_BC spectra disagree beyond tolerance."""


@dataclass(frozen=True)
class ReconstructionConfig:
    tol_degen: float = DEFAULT_TOL_DEGEN
    tol_inconsistent: float = DEFAULT_TOL_INCONSISTENT

    def __post_init__(self) -> None:
        if self.tol_degen < 0 or self.tol_inconsistent < 0:
            msg = (
                "Reconstruction tolerances must be non-negative, got"
                f" tol_degen={self.tol_degen}, tol_inconsistent={self.tol_inconsistent}"
            )
            raise ValueError(msg)

    @classmethod
    def from_env(cls) -> ReconstructionConfig:
        """Read TRIQ_TOL_DEGEN and TRIQ_TOL_INCONSISTENT, falling back to defaults."""
        return cls(
            tol_degen=get_float_env_var("TRIQ_TOL_DEGEN", DEFAULT_TOL_DEGEN),
            tol_inconsistent=get_float_env_var(
                "TRIQ_TOL_INCONSISTENT",
                DEFAULT_TOL_INCONSISTENT,
            ),
        )


@dataclass(frozen=True)
class SchmidtData:
    """Schmidt weights and vectors of the A|BC cut.

    Attributes:
        p: (p_0, p_1), descending, summing to 1.
        a_vectors: 2x2, columns |a_0>, |a_1> (eigenvectors of rho_A).
        bc_vectors: 4x2, columns |v_0>, |v_1> (top eigenvectors of rho_BC).

    """

    p: np.ndarray
    a_vectors: np.ndarray
    bc_vectors: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=float)
        a = np.asarray(self.a_vectors, dtype=complex)
        v = np.asarray(self.bc_vectors, dtype=complex)
        if p.shape != (2,) or a.shape != (2, 2) or v.shape != (4, 2):
            msg = (
                f"Schmidt data needs p (2,), a_vectors (2, 2), bc_vectors (4, 2);"
                f" got {p.shape}, {a.shape}, {v.shape}"
            )
            raise DimensionError(msg)
        if p[1] < 0 or p[0] < p[1]:
            msg = f"Schmidt weights must satisfy p0 >= p1 >= 0, got {p}"
            raise ValueError(msg)
        for name, vecs in (("a_vectors", a), ("bc_vectors", v)):
            gram = dagger(vecs) @ vecs
            if np.max(np.abs(gram - np.eye(2))) > ORTHONORMAL_ATOL:
                msg = f"Schmidt {name} are not orthonormal"
                raise ValueError(msg)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a_vectors", a)
        object.__setattr__(self, "bc_vectors", v)

    @property
    def gap(self) -> float:
        return float(self.p[0] - self.p[1])


def schmidt_from_marginals(
    rho_bc: DensityMatrix,
    rho_ab: DensityMatrix,
    config: ReconstructionConfig | None = None,
) -> SchmidtData:
    """Schmidt weights and vectors of A|BC from the BC and AB marginals.

    rho_A is taken from rho_AB. The two largest eigenvalues of rho_BC are
    paired with those of rho_A in descending order; the weights are their
    average, renormalized.

    Raises:
        InconsistentMarginalsError: If the paired spectra differ by more than
            config.tol_inconsistent.
        DegeneracyError: If p0 - p1 < config.tol_degen.

    """
    config = config or ReconstructionConfig()
    for name, rho in (("rho_bc", rho_bc), ("rho_ab", rho_ab)):
        if rho.dim != 4:  # noqa: PLR2004
            msg = f"{name} must be a two-qubit state (dim 4), got dim {rho.dim}"
            raise DimensionError(msg)
    rho_bc = psd_project(rho_bc)
    rho_a = partial_trace(psd_project(rho_ab), "A")

    p_a, a_vecs = eig_hermitian(rho_a.entries)
    p_bc, bc_vecs = eig_hermitian(rho_bc.entries)
    p_a = np.clip(p_a, 0.0, None)
    p_bc_top = np.clip(p_bc[:2], 0.0, None)
    logger.debug("rho_A spectrum %s; rho_BC spectrum %s", p_a, p_bc)

    mismatch = float(np.max(np.abs(p_a - p_bc_top)))
    if mismatch > config.tol_inconsistent:
        msg = (
            f"rho_A spectrum {np.round(p_a, 4)} and top rho_BC spectrum"
            f" {np.round(p_bc_top, 4)} differ by {mismatch:.3f}"
            f" (> {config.tol_inconsistent}); marginals are not from one pure state"
        )
        raise InconsistentMarginalsError(msg)

    p = (p_a + p_bc_top) / 2
    p = p / p.sum()
    if p[0] - p[1] < config.tol_degen:
        msg = (
            f"Schmidt weights {np.round(p, 6)} are degenerate (gap {p[0] - p[1]:.2e}"
            f" < {config.tol_degen}); generalized GHZ states are not determined"
            " by their two-party marginals"
        )
        raise DegeneracyError(msg)
    return SchmidtData(p, a_vecs, bc_vecs[:, :2])


def _trace_out_c(op_bc: CMatrix) -> CMatrix:
    """Partial trace over C of a (not necessarily Hermitian) BC operator."""
    return np.trace(op_bc.reshape(2, 2, 2, 2), axis1=1, axis2=3)


def cross_block(schmidt: SchmidtData) -> CMatrix:
    """X(0) = sqrt(p0 p1) |a1><a0| (x) Tr_C(|v1><v0|), the phase-carrying AB term."""
    a0, a1 = schmidt.a_vectors[:, 0], schmidt.a_vectors[:, 1]
    v0, v1 = schmidt.bc_vectors[:, 0], schmidt.bc_vectors[:, 1]
    return math.sqrt(schmidt.p[0] * schmidt.p[1]) * np.kron(
        np.outer(a1, a0.conj()),
        _trace_out_c(np.outer(v1, v0.conj())),
    )


def candidate_ket(schmidt: SchmidtData, alpha: float) -> Ket:
    """sqrt(p0)|a0>|v0> + e^{i alpha} sqrt(p1)|a1>|v1>."""
    amps = math.sqrt(schmidt.p[0]) * np.kron(
        schmidt.a_vectors[:, 0],
        schmidt.bc_vectors[:, 0],
    ) + np.exp(1j * alpha) * math.sqrt(schmidt.p[1]) * np.kron(
        schmidt.a_vectors[:, 1],
        schmidt.bc_vectors[:, 1],
    )
    return Ket.from_amplitudes(amps, normalize=True)


def candidate_ab(schmidt: SchmidtData, alpha: float) -> DensityMatrix:
    """AB marginal of candidate_ket(schmidt, alpha)."""
    return partial_trace(candidate_ket(schmidt, alpha).density(), "AB")


def phase_fit(schmidt: SchmidtData, rho_ab: DensityMatrix) -> float:
    """Relative phase bringing the candidate AB marginal closest to rho_ab.

    The candidate marginal depends on alpha only through
    e^{i alpha} X + e^{-i alpha} X^dagger, so the Frobenius-nearest choice is
    arg <X, rho_ab>.

    Raises:
        PhaseIndeterminateError: If the cross block X vanishes.

    """
    x0 = cross_block(schmidt)
    norm = float(np.linalg.norm(x0))
    if norm < CROSS_BLOCK_TOL:
        msg = (
            f"Cross block norm {norm:.2e} vanishes: the AB marginal does not fix"
            " the relative phase (generalized GHZ state)"
        )
        raise PhaseIndeterminateError(msg)
    overlap = np.vdot(x0, rho_ab.entries)
    alpha = float(np.angle(overlap))
    logger.debug("Phase fit: |X|=%.4f, alpha*=%.2f deg", norm, math.degrees(alpha))
    return alpha


def reconstruct_pure(
    rho_ab: DensityMatrix,
    rho_bc: DensityMatrix,
    config: ReconstructionConfig | None = None,
) -> Ket:
    """The pure three-qubit state compatible with rho_AB and rho_BC.

    Noisy marginals are handled by truncating rho_BC to its two largest
    eigenvalues, so the output is always pure. Its BC marginal equals the
    truncated rho_BC; its AB marginal is as close to rho_ab as the single
    free phase allows.

    Raises:
        DegeneracyError: For degenerate Schmidt weights.
        PhaseIndeterminateError: If rho_ab does not fix the phase.
        InconsistentMarginalsError: If the spectra disagree.

    """
    schmidt = schmidt_from_marginals(rho_bc, rho_ab, config)
    if schmidt.p[1] < RANK_ONE_TOL:
        logger.info("Marginals describe a product state across A|BC; no phase to fit")
        ket = candidate_ket(schmidt, 0.0)
    else:
        ket = candidate_ket(schmidt, phase_fit(schmidt, psd_project(rho_ab)))
    logger.info(
        "Reconstructed pure state with Schmidt weights (%.4f, %.4f)",
        schmidt.p[0],
        schmidt.p[1],
    )
    return ket.phase_fixed()


def reconstruct_from_ab_ac(
    rho_ab: DensityMatrix,
    rho_ac: DensityMatrix,
    config: ReconstructionConfig | None = None,
) -> Ket:
    """Same reconstruction from the (rho_AB, rho_AC) pair.

    Qubits are relabeled to the order C, A, B so the cut becomes C|AB:
    rho_AB takes the Schmidt-partner role and rho_CA the phase-fit role.
    """
    rho_ca = relabel(rho_ac, "CA", labels="AC")
    ket_cab = reconstruct_pure(rho_ca, rho_ab, config)
    return permute_ket(ket_cab, "ABC", labels="CAB").phase_fixed()


def marginals_of(
    state: Ket | DensityMatrix,
) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """(rho_AB, rho_BC, rho_AC) of a three-qubit state."""
    rho = as_density(state)
    return (
        partial_trace(rho, "AB"),
        partial_trace(rho, "BC"),
        partial_trace(rho, "AC"),
    )

"""Dense complex linear algebra for one to three qubits.

Kets, density matrices, tensor products, partial traces, the Hermitian
eigensolver used by the reconstruction, and the normalized Hilbert-Schmidt
fidelity used to score prepared and tomographed states.

Qubit ordering is fixed: qubit 1 = A is the most significant bit, so the
computational basis runs |000>, |001>, ..., |111> in binary order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy import linalg

from logger import get_logger

if TYPE_CHECKING:
    from collections.abc import Iterable

    import numpy.typing as npt

    CMatrix = npt.NDArray[np.complex128]

logger = get_logger(__name__)

MAX_DIM = 8
QUBIT_LABELS = "ABC"

NORM_ATOL = 1e-12
HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-8
PSD_WARN_DISTANCE = 1e-9
EIG_HERMITIAN_ATOL = 1e-8

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DimensionError(ValueError):
    """Raised when a matrix or vector has a dimension outside {2, 4, 8}."""


class NotHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not, beyond tolerance."""


def _n_qubits(dim: int) -> int:
    if dim not in (2, 4, MAX_DIM):
        msg = f"Dimension must be 2, 4 or 8, got {dim}"
        raise DimensionError(msg)
    return dim.bit_length() - 1


def as_square_matrix(a: npt.ArrayLike) -> CMatrix:
    """Convert to a complex square matrix of dimension 2, 4 or 8.

    Raises:
        DimensionError: If the input is not square or has an unsupported size.

    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:  # noqa: PLR2004
        msg = f"Expected a square matrix, got shape {m.shape}"
        raise DimensionError(msg)
    _n_qubits(m.shape[0])
    return m


def dagger(m: CMatrix) -> CMatrix:
    """Conjugate transpose."""
    return m.conj().T


def hermitian_deviation(m: CMatrix) -> float:
    """Largest entrywise deviation from Hermiticity."""
    return float(np.max(np.abs(m - dagger(m))))


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> CMatrix:
    """Tensor product of two operators with dimensions that are powers of two.

    Raises:
        DimensionError: If either factor is not a power-of-two square matrix
            or the product would exceed dimension 8.

    """
    ma = np.asarray(a, dtype=complex)
    mb = np.asarray(b, dtype=complex)
    for m in (ma, mb):
        dim = m.shape[0]
        square = m.ndim == 2 and m.shape[1] == dim  # noqa: PLR2004
        if not square or dim < 1 or dim & (dim - 1):
            msg = f"kron factors must be square with power-of-two size, got {m.shape}"
            raise DimensionError(msg)
    if ma.shape[0] * mb.shape[0] > MAX_DIM:
        msg = (
            f"kron product dimension {ma.shape[0] * mb.shape[0]} exceeds {MAX_DIM}"
        )
        raise DimensionError(msg)
    return np.kron(ma, mb)


def embed(op: npt.ArrayLike, qubit: int, n_qubits: int = 3) -> CMatrix:
    """Lift a single-qubit operator onto qubit `qubit` (1-based) of n qubits."""
    if not 1 <= qubit <= n_qubits:
        msg = f"Qubit index must be in 1..{n_qubits}, got {qubit}"
        raise ValueError(msg)
    factors = [I2] * n_qubits
    factors[qubit - 1] = np.asarray(op, dtype=complex)
    out = factors[0]
    for f in factors[1:]:
        out = kron(out, f)
    return out


def spin_operator(axis: str, qubit: int, n_qubits: int = 3) -> CMatrix:
    """Spin-1/2 angular momentum I_x, I_y or I_z of one qubit, lifted."""
    paulis = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
    return embed(paulis[axis] / 2, qubit, n_qubits)


@dataclass(frozen=True)
class Ket:
    """Normalized pure state of one to three qubits."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.amps, dtype=complex).ravel()
        _n_qubits(arr.size)
        norm = float(np.linalg.norm(arr))
        if not np.isfinite(norm) or abs(norm - 1.0) > NORM_ATOL:
            msg = f"Ket must have unit norm, got norm {norm:.15f}"
            raise ValueError(msg)
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self) -> int:
        return self.amps.size

    @classmethod
    def from_amplitudes(
        cls,
        amps: npt.ArrayLike,
        *,
        normalize: bool = False,
    ) -> Ket:
        """Build a ket, optionally rescaling it to unit norm."""
        arr = np.asarray(amps, dtype=complex).ravel()
        if normalize:
            norm = np.linalg.norm(arr)
            if norm == 0:
                msg = "Cannot normalize the zero vector"
                raise ValueError(msg)
            arr = arr / norm
        return cls(arr)

    @classmethod
    def basis(cls, index: int, dim: int = MAX_DIM) -> Ket:
        """Computational basis state |index> (index in binary, qubit 1 first)."""
        if not 0 <= index < dim:
            msg = f"Basis index must be in 0..{dim - 1}, got {index}"
            raise ValueError(msg)
        arr = np.zeros(dim, dtype=complex)
        arr[index] = 1.0
        return cls(arr)

    def density(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amps, self.amps.conj()))

    def overlap(self, other: Ket) -> complex:
        """Inner product <self|other>."""
        if other.dim != self.dim:
            msg = f"Dimension mismatch: {self.dim} vs {other.dim}"
            raise DimensionError(msg)
        return complex(np.vdot(self.amps, other.amps))

    def apply(self, u: CMatrix) -> Ket:
        return Ket.from_amplitudes(u @ self.amps, normalize=True)

    def phase_fixed(self) -> Ket:
        """Global phase making the first non-negligible amplitude real positive."""
        nonzero = np.flatnonzero(np.abs(self.amps) > NORM_ATOL)
        lead = self.amps[nonzero[0]]
        return Ket(self.amps * (abs(lead) / lead))

    def equal_up_to_global_phase(self, other: Ket, atol: float = 1e-10) -> bool:
        ov = self.overlap(other)
        phase = ov / abs(ov) if abs(ov) > 0 else 1.0
        return bool(np.max(np.abs(self.amps * phase - other.amps)) <= atol)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace operator on one to three qubits.

    Positivity is not enforced by the constructor: raw tomographic fits and
    printed experimental matrices can have slightly negative eigenvalues.
    Use from_array(check_psd=True) or psd_project() where it matters.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = as_square_matrix(self.entries).copy()
        if not np.all(np.isfinite(m)):
            msg = "Density matrix entries must be finite"
            raise ValueError(msg)
        deviation = hermitian_deviation(m)
        if deviation > HERMITIAN_ATOL:
            msg = f"Density matrix is not Hermitian (max deviation {deviation:.3e})"
            raise NotHermitianError(msg)
        trace = np.trace(m)
        if abs(trace - 1.0) > TRACE_ATOL:
            msg = f"Density matrix must have unit trace, got {trace:.12f}"
            raise ValueError(msg)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.dim)

    @classmethod
    def from_array(
        cls,
        array: npt.ArrayLike,
        *,
        hermitize: bool = False,
        normalize: bool = False,
        check_psd: bool = True,
    ) -> DensityMatrix:
        """Build a density matrix from possibly rounded or noisy numbers.

        Args:
            array: Square matrix of dimension 2, 4 or 8.
            hermitize: Replace the input by its Hermitian part (h + h^dagger)/2.
            normalize: Rescale to unit trace.
            check_psd: Reject spectra below -1e-8.

        Raises:
            NotHermitianError: If the input is not Hermitian and hermitize is False.
            ValueError: If the trace is wrong and normalize is False, or the
                spectrum is negative and check_psd is True.

        """
        m = as_square_matrix(array)
        if hermitize:
            deviation = hermitian_deviation(m)
            if deviation > HERMITIAN_ATOL:
                logger.warning(
                    "Input matrix symmetrized (max Hermitian deviation %.3e)",
                    deviation,
                )
            m = (m + dagger(m)) / 2
        if normalize:
            trace = np.trace(m).real
            if trace <= 0:
                msg = f"Cannot normalize a matrix with trace {trace}"
                raise ValueError(msg)
            m = m / trace
        rho = cls(m)
        if check_psd:
            lowest = float(np.min(linalg.eigvalsh(rho.entries)))
            if lowest < -PSD_ATOL:
                msg = f"Density matrix has negative eigenvalue {lowest:.3e}"
                raise ValueError(msg)
        return rho

    def is_psd(self, atol: float = PSD_ATOL) -> bool:
        return bool(np.min(linalg.eigvalsh(self.entries)) >= -atol)


def as_density(state: Ket | DensityMatrix) -> DensityMatrix:
    """Promote a ket to its projector; density matrices pass through."""
    if isinstance(state, Ket):
        return state.density()
    return state


def _keep_axes(keep: str | Iterable[str], labels: str) -> list[int]:
    keep_set = {k.upper() for k in keep}
    unknown = keep_set - set(labels)
    if unknown:
        msg = f"Unknown subsystem labels {sorted(unknown)}; expected from '{labels}'"
        raise ValueError(msg)
    if not keep_set or len(keep_set) == len(labels):
        msg = (
            f"Kept subsystems must be a non-empty proper subset of '{labels}',"
            f" got {sorted(keep_set)}"
        )
        raise ValueError(msg)
    return [i for i, label in enumerate(labels) if label in keep_set]


def partial_trace(
    rho: DensityMatrix,
    keep: str | Iterable[str],
    labels: str | None = None,
) -> DensityMatrix:
    """Reduced state on the kept subsystems, in label order (A < B < C).

    Args:
        rho: State of two or three qubits.
        keep: Subsystems to keep, e.g. "AB" or {"C"}.
        labels: Names of the qubits of rho; defaults to "ABC" or "AB".

    Raises:
        ValueError: If keep is empty, contains every subsystem, or uses
            unknown labels.

    """
    n = rho.n_qubits
    labels = labels or QUBIT_LABELS[:n]
    if len(labels) != n:
        msg = f"Need {n} subsystem labels, got '{labels}'"
        raise ValueError(msg)
    kept = _keep_axes(keep, labels)
    traced = [i for i in range(n) if i not in kept]

    tensor = rho.entries.reshape([2] * (2 * n))
    remaining = n
    for axis in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=axis, axis2=axis + remaining)
        remaining -= 1
    dim = 2 ** len(kept)
    reduced = tensor.reshape(dim, dim)
    return DensityMatrix((reduced + dagger(reduced)) / 2)


def permute_qubits(m: CMatrix, order: str, labels: str | None = None) -> CMatrix:
    """Reorder the qubits of an operator, e.g. order="CAB" moves C to the front."""
    n = _n_qubits(m.shape[0])
    labels = labels or QUBIT_LABELS[:n]
    if sorted(order) != sorted(labels):
        msg = f"Order '{order}' is not a permutation of '{labels}'"
        raise ValueError(msg)
    perm = [labels.index(label) for label in order]
    tensor = np.asarray(m).reshape([2] * (2 * n))
    tensor = tensor.transpose(perm + [p + n for p in perm])
    return tensor.reshape(m.shape)


def relabel(rho: DensityMatrix, order: str, labels: str | None = None) -> DensityMatrix:
    """Density matrix with its qubits permuted into `order`."""
    return DensityMatrix(permute_qubits(rho.entries, order, labels))


def permute_ket(ket: Ket, order: str, labels: str | None = None) -> Ket:
    """Ket with its qubits permuted into `order`."""
    n = _n_qubits(ket.dim)
    labels = labels or QUBIT_LABELS[:n]
    perm = [labels.index(label) for label in order]
    tensor = ket.amps.reshape([2] * n).transpose(perm)
    return Ket(tensor.reshape(-1))


def eig_hermitian(h: npt.ArrayLike) -> tuple[np.ndarray, CMatrix]:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized before solving. Eigenvalues are returned in
    descending order; each eigenvector column has its largest-magnitude
    component made real positive.

    Returns:
        (values, vectors) with vectors as orthonormal columns.

    Raises:
        NotHermitianError: If the input deviates from Hermiticity by more
            than 1e-8 relative to its size.

    """
    m = as_square_matrix(h)
    scale = max(1.0, float(np.max(np.abs(m))))
    deviation = hermitian_deviation(m)
    if deviation > EIG_HERMITIAN_ATOL * scale:
        msg = f"Matrix is not Hermitian (max deviation {deviation:.3e})"
        raise NotHermitianError(msg)
    values, vectors = linalg.eigh((m + dagger(m)) / 2)
    values = values[::-1]
    vectors = vectors[:, ::-1]
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        lead = col[np.argmax(np.abs(col))]
        vectors[:, k] = col * (abs(lead) / lead)
    return values, vectors


def fidelity(r1: Ket | DensityMatrix, r2: Ket | DensityMatrix) -> float:
    """Normalized Hilbert-Schmidt overlap of two matrices.

    Tr(r1^dagger r2) / sqrt(Tr(r1^dagger r1) Tr(r2^dagger r2)).

    Raises:
        DimensionError: If the two states have different dimensions.
        ValueError: If either input has zero norm or the overlap is not real.

    """
    a = as_density(r1).entries
    b = as_density(r2).entries
    if a.shape != b.shape:
        msg = f"Dimension mismatch: {a.shape[0]} vs {b.shape[0]}"
        raise DimensionError(msg)
    norm_a = np.sqrt(np.trace(dagger(a) @ a).real)
    norm_b = np.sqrt(np.trace(dagger(b) @ b).real)
    if norm_a == 0 or norm_b == 0:
        msg = "Fidelity is undefined for a zero-norm matrix"
        raise ValueError(msg)
    value = np.trace(dagger(a) @ b) / (norm_a * norm_b)
    if abs(value.imag) > HERMITIAN_ATOL:
        msg = f"Fidelity has an imaginary part {value.imag:.3e}"
        raise ValueError(msg)
    return float(value.real)


def psd_project(rho: DensityMatrix | npt.ArrayLike) -> DensityMatrix:
    """Clip negative eigenvalues to zero and renormalize to unit trace.

    Raises:
        ValueError: If nothing positive is left after clipping.

    """
    m = rho.entries if isinstance(rho, DensityMatrix) else as_square_matrix(rho)
    values, vectors = eig_hermitian(m)
    clipped = np.clip(values, 0.0, None)
    total = float(np.sum(clipped))
    if total <= 0:
        msg = "Spectrum has no positive part; cannot project to a density matrix"
        raise ValueError(msg)
    projected = (vectors * (clipped / total)) @ dagger(vectors)
    projected = (projected + dagger(projected)) / 2
    moved = float(np.linalg.norm(projected - m))
    level = logging.WARNING if moved > PSD_WARN_DISTANCE else logging.DEBUG
    logger.log(
        level,
        "PSD projection moved matrix by %.3e (min eigenvalue %.3e)",
        moved,
        values[-1],
    )
    return DensityMatrix(projected)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    return float(np.trace(rho.entries @ rho.entries).real)


def frobenius_distance(a: DensityMatrix | CMatrix, b: DensityMatrix | CMatrix) -> float:
    ma = a.entries if isinstance(a, DensityMatrix) else np.asarray(a)
    mb = b.entries if isinstance(b, DensityMatrix) else np.asarray(b)
    return float(np.linalg.norm(ma - mb))


def unitary_distance(u: CMatrix, v: CMatrix) -> float:
    """Frobenius distance between two operators, minimized over a global phase."""
    overlap = np.trace(dagger(v) @ u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def random_pure_ket(rng: np.random.Generator, dim: int = MAX_DIM) -> Ket:
    """Haar-random pure state."""
    z = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Ket.from_amplitudes(z, normalize=True)


def random_density_matrix(
    rng: np.random.Generator,
    dim: int = MAX_DIM,
) -> DensityMatrix:
    """Random full-rank density matrix from the Ginibre ensemble."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ dagger(g)
    m = m / np.trace(m)
    return DensityMatrix((m + dagger(m)) / 2)


def basis_labels(n_qubits: int) -> list[str]:
    """Binary labels of the computational basis, e.g. ["00", "01", "10", "11"]."""
    return [format(i, f"0{n_qubits}b") for i in range(2**n_qubits)]


def matrix_to_dict(m: DensityMatrix | CMatrix, kind: str = "density") -> dict[str, Any]:
    """Matrix JSON: {"kind", "dim", "re", "im"}."""
    arr = m.entries if isinstance(m, DensityMatrix) else np.asarray(m, dtype=complex)
    return {
        "kind": kind,
        "dim": int(arr.shape[0]),
        "re": arr.real.tolist(),
        "im": arr.imag.tolist(),
    }


def matrix_from_dict(payload: dict[str, Any]) -> CMatrix:
    """Decode Matrix JSON into a complex array.

    Raises:
        ValueError: If the fields are missing or inconsistent with "dim".

    """
    try:
        dim = int(payload["dim"])
        m = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(
            payload["im"],
            dtype=float,
        )
    except (KeyError, TypeError) as e:
        msg = f"Malformed matrix JSON: {e}"
        raise ValueError(msg) from e
    if m.shape != (dim, dim):
        msg = f"Matrix JSON declares dim {dim} but holds shape {m.shape}"
        raise ValueError(msg)
    return m


def ket_to_dict(ket: Ket) -> dict[str, Any]:
    return {
        "kind": "ket",
        "dim": ket.dim,
        "re": ket.amps.real.tolist(),
        "im": ket.amps.imag.tolist(),
    }


def ket_from_dict(payload: dict[str, Any]) -> Ket:
    try:
        amps = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(
            payload["im"],
            dtype=float,
        )
    except (KeyError, TypeError) as e:
        msg = f"Malformed ket JSON: {e}"
        raise ValueError(msg) from e
    if amps.size != int(payload.get("dim", amps.size)):
        msg = f"Ket JSON declares dim {payload['dim']} but holds {amps.size} amplitudes"
        raise ValueError(msg)
    return Ket.from_amplitudes(amps, normalize=True)


def state_to_dict(state: Ket | DensityMatrix) -> dict[str, Any]:
    if isinstance(state, Ket):
        return ket_to_dict(state)
    return matrix_to_dict(state)


def state_from_dict(
    payload: dict[str, Any],
    *,
    hermitize: bool = False,
    normalize: bool = False,
) -> Ket | DensityMatrix:
    """Decode either a ket or a density matrix, dispatching on "kind"."""
    if payload.get("kind") == "ket":
        return ket_from_dict(payload)
    return DensityMatrix.from_array(
        matrix_from_dict(payload),
        hermitize=hermitize,
        normalize=normalize,
        check_psd=False,
    )

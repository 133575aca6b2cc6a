"""Simulated NMR state tomography and linear inversion.

A tomography operation applies pi/2 readout pulses (X or Y) to some spins,
after which every resolved resonance line is recorded. The line of spin k
with the other spins in computational state s has complex amplitude
    Tr[rho' (P_s (x) (I_kx + i I_ky))] = rho'[(s, k=1), (s, k=0)],
i.e. one single-quantum coherence. Stacking real and imaginary parts of all
lines over an operation set gives a real linear map from the traceless part
of rho (63 real parameters for three qubits, 15 for a pair), inverted here
by least squares.

For a pair target (AB, BC or AC) the lines of each pair spin are summed
over the state of the third spin, which is the same as reading out the
two-qubit reduced state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cache
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
from scipy import linalg

from gates import AXIS_X, AXIS_Y, rotation_matrix
from logger import get_logger
from qcore import (
    I2,
    QUBIT_LABELS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    DimensionError,
    basis_labels,
    dagger,
    partial_trace,
    psd_project,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from qcore import CMatrix

logger = get_logger(__name__)

FULL_TARGET = "full"
PAIR_TARGETS = ("AB", "BC", "AC")
RANK_TOL = 1e-9
DEFAULT_NOISE_SEED = 0

_READOUT = {
    "I": I2,
    "X": rotation_matrix(np.pi / 2, AXIS_X),
    "Y": rotation_matrix(np.pi / 2, AXIS_Y),
}
_PAULI = {"I": I2, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}


class RankDeficientError(ValueError):
    """Raised when an operation set cannot determine every density-matrix parameter."""

    def __init__(self, message: str, missing: Sequence[str]) -> None:
        super().__init__(message)
        self.missing = list(missing)


@dataclass(frozen=True)
class TomoOp:
    """Readout letters, one per qubit from {I, X, Y}, qubit 1 first."""

    letters: str

    def __post_init__(self) -> None:
        letters = self.letters.strip().upper()
        if len(letters) != len(QUBIT_LABELS) or set(letters) - set(_READOUT):
            msg = (
                "Tomography op must be three letters from I, X, Y; "
                f"got '{self.letters}'"
            )
            raise ValueError(msg)
        object.__setattr__(self, "letters", letters)

    def __str__(self) -> str:
        return self.letters

    def restricted(self, target: str) -> str:
        """Letters acting on the qubits of a target; the others must be I.

        Raises:
            ValueError: If the op pulses a qubit outside the target.

        """
        if target == FULL_TARGET:
            return self.letters
        kept = [QUBIT_LABELS.index(label) for label in target]
        outside = [
            i
            for i in range(len(QUBIT_LABELS))
            if i not in kept and self.letters[i] != "I"
        ]
        if outside:
            msg = f"Op {self.letters} pulses a qubit outside pair {target}"
            raise ValueError(msg)
        return "".join(self.letters[i] for i in kept)


def parse_ops(names: Iterable[str]) -> list[TomoOp]:
    return [TomoOp(n) for n in names]


FULL_OPS = parse_ops(
    ["III", "IIX", "IXI", "XII", "IIY", "IYI", "YII", "YYI", "IXX", "XXX", "YYY"],
)
COMPACT_OPS = parse_ops(["III", "XXX", "IIY", "XYX", "YII", "XXY", "IYY"])
PAIR_OPS = {
    "AB": parse_ops(["III", "IXI", "IYI", "XXI"]),
    "BC": parse_ops(["III", "IIX", "IIY", "IXX"]),
    "AC": parse_ops(["III", "IIX", "IIY", "XIX"]),
}


def op_set(name: str) -> tuple[list[TomoOp], str]:
    """Resolve "full", "compact", "ab", "bc" or "ac" to (ops, target)."""
    key = name.strip().lower()
    if key == "full":
        return list(FULL_OPS), FULL_TARGET
    if key == "compact":
        return list(COMPACT_OPS), FULL_TARGET
    if key.upper() in PAIR_OPS:
        return list(PAIR_OPS[key.upper()]), key.upper()
    msg = f"Unknown operation set '{name}'; expected full, compact, ab, bc or ac"
    raise ValueError(msg)


def _check_target(target: str) -> str:
    if target == FULL_TARGET:
        return target
    upper = target.upper()
    if upper not in PAIR_TARGETS:
        msg = (
            f"Tomography target must be 'full' or one of {PAIR_TARGETS}, "
            f"got '{target}'"
        )
        raise ValueError(msg)
    return upper


def _kron_all(factors: Iterable[CMatrix]) -> CMatrix:
    out = np.eye(1, dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def op_unitary(op: TomoOp | str) -> CMatrix:
    """Readout pulses: I, exp(-i pi/4 sigma_x) or exp(-i pi/4 sigma_y) per qubit."""
    letters = op.letters if isinstance(op, TomoOp) else op
    return _kron_all(_READOUT[c] for c in letters)


def _spins(target: str) -> list[int]:
    labels = QUBIT_LABELS if target == FULL_TARGET else target
    return [QUBIT_LABELS.index(label) + 1 for label in labels]


@cache
def _line_layout(target: str) -> tuple[tuple[int, str, int, int], ...]:
    """(spin, spectator_state, row, col) for every resolved line, canonical order."""
    spins = _spins(target)
    n = len(spins)
    layout = []
    for pos, spin in enumerate(spins):
        for bits in itertools.product("01", repeat=n - 1):
            spectator = "".join(bits)
            full0 = spectator[:pos] + "0" + spectator[pos:]
            full1 = spectator[:pos] + "1" + spectator[pos:]
            layout.append((spin, spectator, int(full1, 2), int(full0, 2)))
    return tuple(layout)


@dataclass(frozen=True)
class TomoRecord:
    """Line amplitudes of one operation, keyed by (spin, spectator_state)."""

    op: TomoOp
    lines: dict[tuple[int, str], complex] = field(default_factory=dict)

    @property
    def target(self) -> str:
        """full, or the pair label the lines belong to."""
        spectator_len = len(next(iter(self.lines))[1]) if self.lines else 2
        if spectator_len == len(QUBIT_LABELS) - 1:
            return FULL_TARGET
        spins = sorted({spin for spin, _ in self.lines})
        return "".join(QUBIT_LABELS[s - 1] for s in spins)

    def vector(self, target: str) -> np.ndarray:
        """Lines in canonical order as complex values.

        Raises:
            ValueError: If a line expected for the target is absent.

        """
        try:
            return np.array(
                [self.lines[(spin, s)] for spin, s, _, _ in _line_layout(target)],
                dtype=complex,
            )
        except KeyError as e:
            msg = (
                f"Record for {self.op} lacks line {e.args[0]} "
                f"needed for target {target}"
            )
            raise ValueError(msg) from e


def _reduce_for_target(rho: DensityMatrix, target: str) -> DensityMatrix:
    if target == FULL_TARGET:
        if rho.dim != 2 ** len(QUBIT_LABELS):
            msg = f"Full tomography needs a three-qubit state, got dim {rho.dim}"
            raise DimensionError(msg)
        return rho
    if rho.dim == 2 ** len(QUBIT_LABELS):
        return partial_trace(rho, target)
    if rho.dim == 2 ** len(target):
        return rho
    msg = f"Cannot read out pair {target} from a dim-{rho.dim} state"
    raise DimensionError(msg)


def _lines_of(m: CMatrix, op: TomoOp, target: str) -> np.ndarray:
    u = op_unitary(op.restricted(target))
    rotated = u @ m @ dagger(u)
    layout = _line_layout(target)
    rows = [r for _, _, r, _ in layout]
    cols = [c for _, _, _, c in layout]
    return rotated[rows, cols]


def simulate_readout(
    rho: DensityMatrix,
    op: TomoOp,
    target: str = FULL_TARGET,
) -> TomoRecord:
    """Line amplitudes after the readout pulses of `op`.

    For a pair target a three-qubit state is reduced to the pair first.
    """
    target = _check_target(target)
    reduced = _reduce_for_target(rho, target)
    values = _lines_of(reduced.entries, op, target)
    lines = {
        (spin, s): complex(v)
        for (spin, s, _, _), v in zip(_line_layout(target), values, strict=True)
    }
    return TomoRecord(op, lines)


def simulate_experiment(
    rho: DensityMatrix,
    ops: Sequence[TomoOp],
    target: str = FULL_TARGET,
    *,
    noise_sigma: float = 0.0,
    rng: np.random.Generator | None = None,
) -> list[TomoRecord]:
    """Records for a whole operation set, with optional Gaussian line noise.

    Without `rng` the noise comes from a generator seeded with
    DEFAULT_NOISE_SEED, so repeated calls give the same records.

    Raises:
        ValueError: If noise_sigma is negative.

    """
    if noise_sigma < 0:
        msg = f"Noise sigma must be non-negative, got {noise_sigma}"
        raise ValueError(msg)
    records = [simulate_readout(rho, op, target) for op in ops]
    if noise_sigma == 0:
        return records
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_NOISE_SEED)
    noisy = []
    for record in records:
        lines = {
            key: value
            + complex(rng.normal(0.0, noise_sigma), rng.normal(0.0, noise_sigma))
            for key, value in record.lines.items()
        }
        noisy.append(TomoRecord(record.op, lines))
    logger.debug("Added Gaussian noise sigma=%g to %d records", noise_sigma, len(noisy))
    return noisy


@cache
def pauli_basis(n_qubits: int) -> tuple[tuple[str, ...], np.ndarray]:
    """Labels and matrices P/2^n of the non-identity Pauli strings."""
    labels = []
    mats = []
    dim = 2**n_qubits
    for letters in itertools.product("IXYZ", repeat=n_qubits):
        if set(letters) == {"I"}:
            continue
        labels.append("".join(letters))
        mats.append(_kron_all(_PAULI[c] for c in letters) / dim)
    return tuple(labels), np.array(mats)


def _n_qubits(target: str) -> int:
    return len(QUBIT_LABELS) if target == FULL_TARGET else len(target)


def forward_matrix(ops: Sequence[TomoOp], target: str = FULL_TARGET) -> np.ndarray:
    """Real map from traceless Pauli coefficients to stacked (re, im) line values."""
    target = _check_target(target)
    _, basis = pauli_basis(_n_qubits(target))
    blocks = []
    for op in ops:
        columns = np.array([_lines_of(b, op, target) for b in basis]).T
        real = np.empty((2 * columns.shape[0], columns.shape[1]))
        real[0::2] = columns.real
        real[1::2] = columns.imag
        blocks.append(real)
    return np.vstack(blocks)


def _stack(records: Sequence[TomoRecord], target: str) -> np.ndarray:
    values = np.concatenate([r.vector(target) for r in records])
    out = np.empty(2 * values.size)
    out[0::2] = values.real
    out[1::2] = values.imag
    return out


def measurement_rank(ops: Sequence[TomoOp], target: str = FULL_TARGET) -> int:
    """Rank of the stacked line map; 63 (full) or 15 (pair) means complete."""
    if not ops:
        return 0
    rank = int(np.linalg.matrix_rank(forward_matrix(ops, target), tol=RANK_TOL))
    logger.debug(
        "Rank of %s on target %s: %d",
        " ".join(str(o) for o in ops),
        target,
        rank,
    )
    return rank


def unknown_count(target: str = FULL_TARGET) -> int:
    return 4 ** _n_qubits(_check_target(target)) - 1


def _missing_directions(a: np.ndarray, labels: Sequence[str]) -> list[str]:
    null = linalg.null_space(a, rcond=RANK_TOL)
    weight = np.linalg.norm(null, axis=1)
    pairs = zip(labels, weight, strict=True)
    return [label for label, w in pairs if w > 1e-6]  # noqa: PLR2004


def infer_target(records: Sequence[TomoRecord]) -> str:
    """Target implied by the line keys of the records.

    Raises:
        ValueError: If there are no records or they disagree.

    """
    targets = {r.target for r in records}
    if len(targets) != 1:
        msg = f"Records must share one target, found {sorted(targets) or 'none'}"
        raise ValueError(msg)
    return _check_target(targets.pop())


def fit_coefficients(
    records: Sequence[TomoRecord],
    target: str | None = None,
) -> tuple[np.ndarray, str]:
    """Least-squares Pauli coefficients of the traceless part.

    Raises:
        RankDeficientError: If the operation set does not determine every parameter.

    """
    if not records:
        msg = "No tomography records to invert"
        raise ValueError(msg)
    target = infer_target(records) if target is None else _check_target(target)
    ops = [r.op for r in records]
    a = forward_matrix(ops, target)
    labels, _ = pauli_basis(_n_qubits(target))
    rank = int(np.linalg.matrix_rank(a, tol=RANK_TOL)) if ops else 0
    if rank < len(labels):
        missing = _missing_directions(a, labels) if ops else list(labels)
        msg = (
            f"Operation set {' '.join(str(o) for o in ops)} has rank {rank} of"
            f" {len(labels)} on target {target}; unobservable Pauli directions:"
            f" {', '.join(missing)}"
        )
        raise RankDeficientError(msg, missing)
    coeffs, *_ = linalg.lstsq(a, _stack(records, target))
    return coeffs, target


def invert(
    records: Sequence[TomoRecord],
    target: str | None = None,
) -> DensityMatrix:
    """Density matrix whose readout best matches the records, projected to PSD.

    Args:
        records: One record per operation; all for the same target.
        target: "full" or a pair label; inferred from the records when None.

    Returns:
        A dim-8 (full) or dim-4 (pair) density matrix.

    Raises:
        RankDeficientError: If the operation set is incomplete.

    """
    coeffs, target = fit_coefficients(records, target)
    _, basis = pauli_basis(_n_qubits(target))
    dim = basis.shape[1]
    m = np.eye(dim, dtype=complex) / dim + np.tensordot(coeffs, basis, axes=1)
    projected = psd_project((m + dagger(m)) / 2)
    logger.info(
        "Inverted %d records on target %s (residual %.3e)",
        len(records),
        target,
        tomography_residual(records, projected, target),
    )
    return projected


def tomography_residual(
    records: Sequence[TomoRecord],
    rho: DensityMatrix,
    target: str | None = None,
) -> float:
    """RMS difference between recorded lines and those predicted from rho."""
    target = infer_target(records) if target is None else _check_target(target)
    reduced = _reduce_for_target(rho, target)
    predicted = np.concatenate(
        [_lines_of(reduced.entries, r.op, target) for r in records],
    )
    observed = np.concatenate([r.vector(target) for r in records])
    return float(np.sqrt(np.mean(np.abs(observed - predicted) ** 2)))


RECORD_COLUMNS = ["op", "spin", "spectator_state", "re", "im"]


def records_to_frame(records: Sequence[TomoRecord]) -> pd.DataFrame:
    rows = [
        {
            "op": str(r.op),
            "spin": spin,
            "spectator_state": s,
            "re": value.real,
            "im": value.imag,
        }
        for r in records
        for (spin, s), value in r.lines.items()
    ]
    return pd.DataFrame(rows, columns=RECORD_COLUMNS)


def records_from_frame(df: pd.DataFrame) -> list[TomoRecord]:
    """Rebuild records, one per op in order of first appearance.

    Raises:
        ValueError: If a required column is missing.

    """
    missing = [c for c in RECORD_COLUMNS if c not in df.columns]
    if missing:
        msg = f"Tomography CSV is missing columns {missing}"
        raise ValueError(msg)
    records = []
    for op_name, group in df.groupby("op", sort=False):
        lines = {
            (int(row.spin), str(row.spectator_state)): complex(row.re, row.im)
            for row in group.itertuples(index=False)
        }
        records.append(TomoRecord(TomoOp(str(op_name)), lines))
    return records


def read_records_csv(path: str) -> list[TomoRecord]:
    df = pd.read_csv(path, dtype={"op": str, "spectator_state": str})
    return records_from_frame(df)


def tomograph_frame(rho: DensityMatrix) -> pd.DataFrame:
    """Bar-plot data: one (row, col, re, im) row per matrix element, binary labels."""
    labels = basis_labels(rho.n_qubits)
    rows = [
        {
            "row": labels[i],
            "col": labels[j],
            "re": float(rho.entries[i, j].real),
            "im": float(rho.entries[i, j].imag),
        }
        for i in range(rho.dim)
        for j in range(rho.dim)
    ]
    return pd.DataFrame(rows, columns=["row", "col", "re", "im"])


def tomograph_from_frame(df: pd.DataFrame) -> DensityMatrix:
    """Inverse of tomograph_frame.

    Raises:
        ValueError: If the bars do not form a square matrix.

    """
    dim = int(round(np.sqrt(len(df))))
    if dim * dim != len(df):
        msg = f"Tomograph CSV has {len(df)} rows, not a square number"
        raise ValueError(msg)
    m = np.zeros((dim, dim), dtype=complex)
    for row in df.itertuples(index=False):
        m[int(str(row.row), 2), int(str(row.col), 2)] = complex(row.re, row.im)
    return DensityMatrix.from_array(m, check_psd=False)


def read_tomograph_csv(path: str) -> DensityMatrix:
    df = pd.read_csv(path, dtype={"row": str, "col": str})
    return tomograph_from_frame(df)

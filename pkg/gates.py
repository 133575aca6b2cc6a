"""Ideal gate-level preparation circuits for three qubits.

Gates are dense 8x8 unitaries. Rotations use
    R(angle, axis_phase) = exp(-i angle/2 (cos(axis_phase) X + sin(axis_phase) Y))
so axis_phase = pi/2 is a rotation about y and R(2t, pi/2)|0> = cos t|0> + sin t|1>.
Controlled rotations use the same y axis, which keeps every amplitude of the
canonical state non-negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from logger import get_logger
from qcore import (
    I2,
    MAX_DIM,
    SIGMA_X,
    SIGMA_Y,
    DimensionError,
    Ket,
    dagger,
    embed,
)
from states import GenericParams

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

    from qcore import CMatrix

logger = get_logger(__name__)

AXIS_X = 0.0
AXIS_Y = math.pi / 2
AXIS_MINUS_X = math.pi
AXIS_MINUS_Y = -math.pi / 2

UNITARY_ATOL = 1e-12
N_QUBITS = 3

P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)

# Start states of the W circuits: the shortened form skips the first flip.
W_START_SIMPLIFIED = 0b100
W_START_FULL = 0b000


def rotation_matrix(angle: float, axis_phase: float) -> CMatrix:
    """2x2 rotation by `angle` about the equatorial axis at `axis_phase`."""
    n_dot_sigma = math.cos(axis_phase) * SIGMA_X + math.sin(axis_phase) * SIGMA_Y
    return math.cos(angle / 2) * I2 - 1j * math.sin(angle / 2) * n_dot_sigma


@dataclass(frozen=True)
class Gate:
    """Named 8x8 unitary.

    `qubits` holds 1-based qubit indices (or the two basis levels for a
    transition pulse) and `params` the angles in radians; both only feed
    labels and the JSON codec.
    """

    unitary: np.ndarray
    label: str
    name: str = ""
    qubits: tuple[int, ...] = ()
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        u = np.array(self.unitary, dtype=complex)
        if u.shape != (MAX_DIM, MAX_DIM):
            msg = f"Gate '{self.label}' must be 8x8, got {u.shape}"
            raise DimensionError(msg)
        deviation = float(np.max(np.abs(dagger(u) @ u - np.eye(MAX_DIM))))
        if deviation > UNITARY_ATOL:
            msg = f"Gate '{self.label}' is not unitary (deviation {deviation:.3e})"
            raise ValueError(msg)
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @property
    def matrix(self) -> CMatrix:
        return self.unitary


def _check_qubits(*qubits: int) -> None:
    for q in qubits:
        if q not in (1, 2, 3):
            msg = f"Qubit index must be 1, 2 or 3, got {q}"
            raise ValueError(msg)
    if len(set(qubits)) != len(qubits):
        msg = f"Qubit indices must be distinct, got {qubits}"
        raise ValueError(msg)


def _controlled(op: CMatrix, controls: Sequence[int], target: int) -> CMatrix:
    """I on the subspace where any control is 0, `op` on the target otherwise."""
    selector = np.eye(MAX_DIM, dtype=complex)
    for c in controls:
        selector = selector @ embed(P1, c, N_QUBITS)
    return np.eye(MAX_DIM) - selector + selector @ embed(op, target, N_QUBITS)


def rot1(qubit: int, angle: float, axis_phase: float = AXIS_Y) -> Gate:
    """Single-qubit rotation lifted to three qubits; U^q_{angle} in the circuits."""
    _check_qubits(qubit)
    return Gate(
        embed(rotation_matrix(angle, axis_phase), qubit, N_QUBITS),
        f"U{qubit}({math.degrees(angle):.2f})",
        "rot",
        (qubit,),
        (angle, axis_phase),
    )


def cnot(control: int, target: int) -> Gate:
    _check_qubits(control, target)
    return Gate(
        _controlled(SIGMA_X, [control], target),
        f"CNOT{control}{target}",
        "cnot",
        (control, target),
    )


def crot(control: int, target: int, angle2theta: float) -> Gate:
    """Controlled y rotation: |1>_c|0>_t to cos(t)|10> + sin(t)|11>, t = angle/2."""
    _check_qubits(control, target)
    return Gate(
        _controlled(rotation_matrix(angle2theta, AXIS_Y), [control], target),
        f"CROT{control}{target}({math.degrees(angle2theta):.2f})",
        "crot",
        (control, target),
        (angle2theta,),
    )


def toffoli(c1: int, c2: int, target: int) -> Gate:
    _check_qubits(c1, c2, target)
    return Gate(
        _controlled(SIGMA_X, [c1, c2], target),
        f"CCN{c1}{c2},{target}",
        "toffoli",
        (c1, c2, target),
    )


def ccphase(c1: int, c2: int, target: int, phi: float) -> Gate:
    """e^{i phi} on the basis states where all three qubits are 1."""
    _check_qubits(c1, c2, target)
    phase = np.diag([1.0, np.exp(1j * phi)])
    return Gate(
        _controlled(phase, [c1, c2], target),
        f"Ph{c1}{c2},{target}({math.degrees(phi):.2f})",
        "ccphase",
        (c1, c2, target),
        (phi,),
    )


def transition_pi(level_a: int, level_b: int, phi: float) -> Gate:
    """Pi rotation confined to span{|a>, |b>} about the axis at phase phi + pi/2.

    The subspace phase is fixed so that <b|U|a> = e^{i phi} and
    <a|U|b> = -e^{-i phi}; toffoli(1, 2, 3) equals
    transition_pi(6, 7, 0) @ diag(1, ..., 1, -1).
    """
    for level in (level_a, level_b):
        if not 0 <= level < MAX_DIM:
            msg = f"Transition level must be in 0..7, got {level}"
            raise ValueError(msg)
    if level_a == level_b:
        msg = f"Transition levels must differ, got {level_a} twice"
        raise ValueError(msg)
    sub = rotation_matrix(math.pi, phi + math.pi / 2)
    u = np.eye(MAX_DIM, dtype=complex)
    idx = [level_a, level_b]
    u[np.ix_(idx, idx)] = sub
    return Gate(
        u,
        f"pi[{level_a:03b}<->{level_b:03b}]({math.degrees(phi):.2f})",
        "transition_pi",
        (level_a, level_b),
        (phi,),
    )


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list, applied first to last."""

    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self) -> int:
        return len(self.gates)

    def then(self, *gates: Gate) -> Circuit:
        return Circuit((*self.gates, *gates))

    def unitary(self) -> CMatrix:
        u = np.eye(MAX_DIM, dtype=complex)
        for gate in self.gates:
            u = gate.unitary @ u
        return u

    def intermediate_states(self, ket: Ket) -> list[Ket]:
        """State after each gate, in order."""
        states = []
        for gate in self.gates:
            ket = ket.apply(gate.unitary)
            states.append(ket)
        return states

    def labels(self) -> list[str]:
        return [g.label for g in self.gates]


def apply(c: Circuit, k: Ket) -> Ket:
    """Run the circuit on a ket.

    Raises:
        DimensionError: If the ket is not a three-qubit state.

    """
    if k.dim != MAX_DIM:
        msg = f"Circuits act on three qubits (dim 8), got a dim-{k.dim} ket"
        raise DimensionError(msg)
    amps = k.amps
    for gate in c.gates:
        amps = gate.unitary @ amps
    return Ket.from_amplitudes(amps, normalize=True)


def build_generic_circuit(p: GenericParams, *, fuse: bool = True) -> Circuit:
    """Gate sequence taking |000> to the canonical state of `p`.

    With `fuse` the Toffoli and doubly controlled phase are replaced by a
    single transition-selective pi pulse between |110> and |111>.
    """
    gates = [
        rot1(1, 2 * p.alpha),
        crot(1, 2, 2 * p.beta),
        cnot(2, 1),
        crot(1, 3, 2 * p.gamma),
        cnot(3, 1),
        crot(1, 2, 2 * p.delta),
    ]
    if fuse:
        gates.append(transition_pi(0b110, 0b111, p.phi))
    else:
        gates.extend([toffoli(1, 2, 3), ccphase(1, 2, 3, p.phi)])
    logger.debug("Generic circuit: %s", " ".join(g.label for g in gates))
    return Circuit(tuple(gates))


def build_ghz_circuit(alpha: float) -> Circuit:
    """|000> -> cos(alpha)|000> + sin(alpha)|111>."""
    return Circuit((rot1(1, 2 * alpha), cnot(1, 2), cnot(1, 3)))


def build_w_circuit(beta: float, gamma: float, *, simplified: bool = True) -> Circuit:
    """W-class circuit.

    The simplified form starts from |100> (W_START_SIMPLIFIED) and replaces
    the first flip and the first controlled rotation by a plain rotation of
    qubit 2; the full form starts from |000>.
    """
    head = (
        [rot1(2, 2 * beta)]
        if simplified
        else [rot1(1, math.pi), crot(1, 2, 2 * beta)]
    )
    return Circuit((*head, cnot(2, 1), crot(1, 3, 2 * gamma), cnot(3, 1)))


_GATE_BUILDERS: dict[str, Callable[..., Gate]] = {
    "rot": rot1,
    "cnot": cnot,
    "crot": crot,
    "toffoli": toffoli,
    "ccphase": ccphase,
    "transition_pi": transition_pi,
}


def gate_to_dict(gate: Gate) -> dict[str, Any]:
    return {
        "gate": gate.name,
        "qubits": list(gate.qubits),
        "params_deg": [math.degrees(v) for v in gate.params],
    }


def gate_from_dict(payload: dict[str, Any]) -> Gate:
    """Rebuild a gate from its JSON entry.

    Raises:
        ValueError: If the gate name is unknown or the arguments do not fit.

    """
    name = payload.get("gate")
    builder = _GATE_BUILDERS.get(str(name))
    if builder is None:
        msg = f"Unknown gate '{name}'; expected one of {sorted(_GATE_BUILDERS)}"
        raise ValueError(msg)
    qubits = [int(q) for q in payload.get("qubits", [])]
    params = [math.radians(float(v)) for v in payload.get("params_deg", [])]
    try:
        return builder(*qubits, *params)
    except TypeError as e:
        msg = (
            f"Bad arguments for gate '{name}': qubits={qubits},"
            f" params_deg={payload.get('params_deg')}"
        )
        raise ValueError(msg) from e


def circuit_to_list(c: Circuit) -> list[dict[str, Any]]:
    return [gate_to_dict(g) for g in c.gates]


def circuit_from_list(entries: Iterable[dict[str, Any]]) -> Circuit:
    return Circuit(tuple(gate_from_dict(e) for e in entries))

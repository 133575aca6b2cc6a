"""NMR pulse-level simulation of the three-spin preparation sequences.

Free evolution follows the weak-coupling rotating-frame Hamiltonian
    H = sum_i nu_i I_iz + sum_{i<j} J_ij I_iz I_jz      (Hz)
with propagator exp(-i 2 pi H t). RF pulses are instantaneous rotations
R(theta, phase) = exp(-i theta (cos(phase) I_x + sin(phase) I_y)).

Every two-qubit gate is compiled to a target rotation about -y and a
refocused J evolution of length 1/(2|J|), closed either by the full
theta_-y, z-rotation tail (ideal variant) or by a single target rotation
about -x (J > 0) or +x (J < 0) (short variant). Both realize
    G = |0><0| (x) I + |1><1| (x) Z R_y(-2 theta),
the short one only up to local z rotations of control and target, which are
carried as pending per-qubit compensation angles and flushed only when
needed. G agrees with the controlled y rotation on every input whose target
is |0> and equals CNOT exactly at theta = pi/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
from scipy import linalg

from gates import (
    AXIS_MINUS_X,
    AXIS_MINUS_Y,
    AXIS_X,
    AXIS_Y,
    P0,
    P1,
    rotation_matrix,
)
from logger import get_logger
from qcore import (
    I2,
    MAX_DIM,
    SIGMA_Z,
    DensityMatrix,
    DimensionError,
    dagger,
    embed,
    spin_operator,
)

if TYPE_CHECKING:
    from collections.abc import Iterable

    from qcore import CMatrix
    from states import GenericParams

logger = get_logger(__name__)

N_SPINS = 3
PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (2, 3))
ANGLE_ATOL = 1e-12

Variant = Literal["ideal", "short"]
Schedule = Literal["parallel", "sequential"]
VARIANTS = ("ideal", "short")
SCHEDULES = ("parallel", "sequential")


def _pair(i: int, j: int) -> tuple[int, int]:
    pair = (min(i, j), max(i, j))
    if pair not in PAIRS:
        msg = f"Spin pair must be two distinct spins of 1, 2, 3, got ({i}, {j})"
        raise ValueError(msg)
    return pair


def wrap_angle(angle: float) -> float:
    """Reduce to (-pi, pi]; z rotations differing by 2 pi agree up to global phase."""
    wrapped = math.remainder(angle, 2 * math.pi)
    return math.pi if math.isclose(wrapped, -math.pi) else wrapped


@dataclass(frozen=True)
class SpinSystem:
    """Three weakly coupled spin-1/2 nuclei.

    Attributes:
        nu: Rotating-frame offsets of spins 1, 2, 3 (Hz).
        couplings: J12, J13, J23 (Hz), signed.
        t1: Longitudinal relaxation time (s).
        t2: Transverse relaxation time (s).

    """

    nu: tuple[float, float, float] = (0.0, 0.0, 0.0)
    couplings: tuple[float, float, float] = (69.8, 47.5, -129.0)
    t1: float = 5.0
    t2: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "nu", tuple(float(v) for v in self.nu))
        object.__setattr__(self, "couplings", tuple(float(v) for v in self.couplings))
        if len(self.nu) != N_SPINS or len(self.couplings) != len(PAIRS):
            msg = "A spin system needs three offsets and three couplings"
            raise ValueError(msg)
        if self.t1 <= 0 or self.t2 <= 0:
            msg = f"Relaxation times must be positive, got T1={self.t1}, T2={self.t2}"
            raise ValueError(msg)

    @classmethod
    def default(cls) -> SpinSystem:
        """Trifluoroiodoethylene constants with zero offsets."""
        return cls()

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> SpinSystem:
        """Build from {"nu_hz", "j12_hz", "j13_hz", "j23_hz", "t1_s", "t2_s"}.

        Offsets default to zero and relaxation times to 5 s / 1 s; the three
        couplings are required.

        Raises:
            ValueError: If a coupling is missing or a value is invalid.

        """
        missing = [k for k in ("j12_hz", "j13_hz", "j23_hz") if k not in payload]
        if missing:
            msg = f"Spin system JSON is missing {missing}"
            raise ValueError(msg)
        return cls(
            nu=tuple(payload.get("nu_hz", (0.0, 0.0, 0.0))),
            couplings=(payload["j12_hz"], payload["j13_hz"], payload["j23_hz"]),
            t1=float(payload.get("t1_s", 5.0)),
            t2=float(payload.get("t2_s", 1.0)),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "nu_hz": list(self.nu),
            "j12_hz": self.couplings[0],
            "j13_hz": self.couplings[1],
            "j23_hz": self.couplings[2],
            "t1_s": self.t1,
            "t2_s": self.t2,
        }

    def coupling(self, i: int, j: int) -> float:
        return self.couplings[PAIRS.index(_pair(i, j))]

    def tau(self, i: int, j: int) -> float:
        """Evolution time 1/(2|J_ij|) of a two-qubit block.

        Raises:
            ValueError: If the coupling is zero.

        """
        j_ij = self.coupling(i, j)
        if j_ij == 0:
            msg = f"Coupling J{min(i, j)}{max(i, j)} is zero; no gate can use it"
            raise ValueError(msg)
        return 1 / (2 * abs(j_ij))


@dataclass(frozen=True)
class RfPulse:
    """Simultaneous hard pulse of `flip_angle` about axis `phase` on `targets`."""

    targets: tuple[int, ...]
    flip_angle: float
    phase: float


@dataclass(frozen=True)
class Delay:
    """Free evolution. `active_couplings` None means every coupling acts."""

    duration: float
    active_couplings: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self) -> None:
        if not self.duration >= 0:
            msg = f"Delay duration must be non-negative, got {self.duration}"
            raise ValueError(msg)
        if self.active_couplings is not None:
            object.__setattr__(
                self,
                "active_couplings",
                tuple(sorted({_pair(*p) for p in self.active_couplings})),
            )


@dataclass(frozen=True)
class ZRot:
    """exp(-i angle I_z) on each target."""

    targets: tuple[int, ...]
    angle: float


@dataclass(frozen=True)
class TransitionPulse:
    """Pi rotation between two energy levels about the axis at `axis_phase`."""

    level_a: int
    level_b: int
    axis_phase: float


PulseEvent = RfPulse | Delay | ZRot | TransitionPulse


@dataclass(frozen=True)
class PulseProgram:
    """Ordered pulse events plus the z compensation still owed per qubit.

    `pending_z[q - 1]` is the angle of the z rotation on qubit q that turns
    the simulated evolution into the intended gate sequence. `finalized()`
    emits it as terminal ZRot events.
    """

    events: tuple[PulseEvent, ...] = ()
    pending_z: tuple[float, float, float] = (0.0, 0.0, 0.0)
    initial_state: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(
            self,
            "pending_z",
            tuple(wrap_angle(float(a)) for a in self.pending_z),
        )
        for event in self.events:
            if not isinstance(event, RfPulse | Delay | ZRot | TransitionPulse):
                msg = f"Unknown pulse event {event!r}"
                raise TypeError(msg)

    @property
    def is_finalized(self) -> bool:
        return all(abs(a) < ANGLE_ATOL for a in self.pending_z)

    def finalized(self, qubits: Iterable[int] | None = None) -> PulseProgram:
        """Append the pending compensation of `qubits` (default all) as ZRot events."""
        selected = set(range(1, N_SPINS + 1) if qubits is None else qubits)
        events = list(self.events)
        pending = list(self.pending_z)
        for q in sorted(selected):
            if abs(pending[q - 1]) >= ANGLE_ATOL:
                events.append(ZRot((q,), pending[q - 1]))
            pending[q - 1] = 0.0
        return PulseProgram(
            tuple(events),
            tuple(pending),
            self.initial_state,
            self.label,
        )

    def compensation_unitary(self) -> CMatrix:
        """Product of the pending z rotations."""
        u = np.eye(MAX_DIM, dtype=complex)
        for q, angle in enumerate(self.pending_z, start=1):
            u = embed(z_rotation_matrix(angle), q, N_SPINS) @ u
        return u


def z_rotation_matrix(angle: float) -> CMatrix:
    """exp(-i angle I_z) = diag(e^{-i angle/2}, e^{i angle/2})."""
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def hamiltonian(
    sys: SpinSystem,
    active: Iterable[tuple[int, int]] | None = None,
    *,
    include_offsets: bool = True,
) -> CMatrix:
    """Rotating-frame Hamiltonian in Hz, restricted to the selected terms."""
    pairs = PAIRS if active is None else tuple({_pair(*p) for p in active})
    h = np.zeros((MAX_DIM, MAX_DIM), dtype=complex)
    if include_offsets:
        for q, nu in enumerate(sys.nu, start=1):
            h += nu * spin_operator("z", q, N_SPINS)
    for i, j in pairs:
        h += (
            sys.coupling(i, j)
            * spin_operator("z", i, N_SPINS)
            @ spin_operator("z", j, N_SPINS)
        )
    return h


def delay_unitary(
    t: float,
    sys: SpinSystem,
    active: Iterable[tuple[int, int]] | None = None,
    *,
    include_offsets: bool = True,
) -> CMatrix:
    """exp(-i 2 pi H t); diagonal in the computational basis.

    Raises:
        ValueError: If t is negative.

    """
    if t < 0:
        msg = f"Delay time must be non-negative, got {t}"
        raise ValueError(msg)
    h = hamiltonian(sys, active, include_offsets=include_offsets)
    return linalg.expm(-2j * math.pi * t * h)


def event_unitary(event: PulseEvent, sys: SpinSystem) -> CMatrix:
    """8x8 propagator of a single event."""
    if isinstance(event, Delay):
        return delay_unitary(event.duration, sys, event.active_couplings)
    if isinstance(event, RfPulse):
        rot = rotation_matrix(event.flip_angle, event.phase)
        return _on_targets(rot, event.targets)
    if isinstance(event, ZRot):
        return _on_targets(z_rotation_matrix(event.angle), event.targets)
    if isinstance(event, TransitionPulse):
        u = np.eye(MAX_DIM, dtype=complex)
        idx = [event.level_a, event.level_b]
        u[np.ix_(idx, idx)] = rotation_matrix(math.pi, event.axis_phase)
        return u
    msg = f"Unknown pulse event {event!r}"
    raise TypeError(msg)


def _on_targets(op: CMatrix, targets: Iterable[int]) -> CMatrix:
    u = np.eye(MAX_DIM, dtype=complex)
    for q in targets:
        u = embed(op, q, N_SPINS) @ u
    return u


def crot_block_unitary(control: int, target: int, theta: float) -> CMatrix:
    """The gate G a compensated block realizes: |0><0| I + |1><1| Z R_y(-2 theta)."""
    active = SIGMA_Z @ rotation_matrix(2 * theta, AXIS_MINUS_Y)
    return embed(P0, control, N_SPINS) + embed(P1, control, N_SPINS) @ embed(
        active,
        target,
        N_SPINS,
    )


class _ProgramBuilder:
    """Accumulates events and pending z compensation while compiling."""

    def __init__(self, sys: SpinSystem, label: str, initial_state: int = 0) -> None:
        self.sys = sys
        self.label = label
        self.initial_state = initial_state
        self.events: list[PulseEvent] = []
        self.pending = [0.0] * N_SPINS

    def flush(self, *qubits: int) -> None:
        """Emit the pending z rotation of each qubit inline."""
        for q in qubits:
            angle = wrap_angle(self.pending[q - 1])
            if abs(angle) >= ANGLE_ATOL:
                self.events.append(ZRot((q,), angle))
            self.pending[q - 1] = 0.0

    def rf(self, targets: tuple[int, ...], flip_angle: float, phase: float) -> None:
        """Target rotation; pending phases of the targets are flushed first."""
        self.flush(*targets)
        self.events.append(RfPulse(targets, flip_angle, phase))

    def echo(self, i: int, j: int) -> None:
        """J_ij evolution for 1/(2|J_ij|), offsets and spectator couplings refocused.

        Pi pulses on the pair at 1/2 and at the end; on the spectator at 1/4
        and 3/4. The pi pulses act as -I in pairs, so pending phases are not
        disturbed.
        """
        pair = _pair(i, j)
        (spectator,) = {1, 2, 3} - set(pair)
        quarter = self.sys.tau(*pair) / 4
        self.events.extend(
            [
                Delay(quarter),
                RfPulse((spectator,), math.pi, AXIS_Y),
                Delay(quarter),
                RfPulse(pair, math.pi, AXIS_Y),
                Delay(quarter),
                RfPulse((spectator,), math.pi, AXIS_Y),
                Delay(quarter),
                RfPulse(pair, math.pi, AXIS_Y),
            ],
        )

    def crot(self, control: int, target: int, theta: float, variant: Variant) -> None:
        """Controlled rotation block; theta is the flip angle of the target pulses.

        ideal: theta_-y, (pi/2)_z, echo, theta_-y, (pi)_z, the z rotations on
        both spins and negated for J < 0. short: theta_-y, echo, theta_-x (theta_x
        for J < 0), with -pi/2 (+pi/2 for J < 0) booked as pending z on both spins.
        The two agree up to global phase once the short block is finalized.
        """
        if variant not in VARIANTS:
            msg = f"Unknown CROT variant '{variant}'; expected one of {VARIANTS}"
            raise ValueError(msg)
        sign = math.copysign(1.0, self.sys.coupling(control, target))
        pair = (control, target)
        self.rf((target,), theta, AXIS_MINUS_Y)
        if variant == "ideal":
            self.events.append(ZRot(pair, sign * math.pi / 2))
            self.echo(control, target)
            self.events.extend(
                [RfPulse((target,), theta, AXIS_MINUS_Y), ZRot(pair, sign * math.pi)],
            )
            return
        self.echo(control, target)
        self.events.append(
            RfPulse((target,), theta, AXIS_MINUS_X if sign > 0 else AXIS_X),
        )
        self.compensate(pair, -sign * math.pi / 2, variant)

    def compensate(
        self,
        qubits: tuple[int, ...],
        angle: float,
        variant: Variant,
    ) -> None:
        if variant == "ideal":
            self.events.append(ZRot(qubits, angle))
            return
        for q in qubits:
            self.pending[q - 1] += angle
        logger.debug(
            "Pending z compensation after %s: %s",
            self.label,
            ", ".join(f"{math.degrees(wrap_angle(a)):.1f}" for a in self.pending),
        )

    def transition(self, level_a: int, level_b: int, axis_phase: float) -> None:
        """Transition pulse; qubits whose bit differs between the levels are flushed."""
        differing = [
            q
            for q in range(1, N_SPINS + 1)
            if (level_a >> (N_SPINS - q)) & 1 != (level_b >> (N_SPINS - q)) & 1
        ]
        self.flush(*differing)
        self.events.append(TransitionPulse(level_a, level_b, axis_phase))

    def build(self) -> PulseProgram:
        program = PulseProgram(
            tuple(self.events),
            tuple(self.pending),
            self.initial_state,
            self.label,
        )
        logger.info(
            "Compiled %s: %d events, %.2f ms of free evolution",
            self.label,
            len(program.events),
            duration(program) * 1e3,
        )
        return program


def compile_crot(
    control: int,
    target: int,
    theta: float,
    sys: SpinSystem,
    *,
    variant: Variant = "short",
) -> PulseProgram:
    """Controlled rotation by theta (CROT^{2 theta}) on one spin pair.

    Raises:
        ValueError: If the pair's coupling is zero or the variant is unknown.

    """
    builder = _ProgramBuilder(sys, f"CROT{control}{target}")
    builder.crot(control, target, theta, variant)
    return builder.build()


def compile_cnot(
    control: int,
    target: int,
    sys: SpinSystem,
    *,
    variant: Variant = "short",
) -> PulseProgram:
    builder = _ProgramBuilder(sys, f"CNOT{control}{target}")
    builder.crot(control, target, math.pi / 2, variant)
    return builder.build()


def compile_generic(
    p: GenericParams,
    sys: SpinSystem,
    *,
    variant: Variant = "short",
) -> PulseProgram:
    """Pulse program taking |000> to the canonical state of `p`."""
    builder = _ProgramBuilder(sys, "generic")
    builder.rf((1,), 2 * p.alpha, AXIS_Y)
    builder.crot(1, 2, p.beta, variant)
    builder.crot(2, 1, math.pi / 2, variant)
    builder.crot(1, 3, p.gamma, variant)
    builder.crot(3, 1, math.pi / 2, variant)
    builder.crot(1, 2, p.delta, variant)
    builder.transition(0b110, 0b111, p.phi + math.pi / 2)
    return builder.build()


def compile_ghz(
    alpha: float,
    sys: SpinSystem,
    *,
    schedule: Schedule = "parallel",
    variant: Variant = "short",
) -> PulseProgram:
    """Pulse program taking |000> to cos(alpha)|000> + sin(alpha)|111>.

    The parallel schedule runs CNOT12 and CNOT13 in one window: J13 acts
    alone for tau_d = (tau13 - tau12)/2 on each side of a shared tau12
    window in which J12 and J13 both act, with pi pulses on all spins at
    the midpoint and the end. In the tau_d windows a pair of pi pulses on
    spin 2 refocuses J12, J23 and the spin-2 offset. No pi pulse pattern
    keeps J12 and J13 while removing J23, so the shared window alone carries
    an explicit coupling selection. When tau13 < tau12 the sequential
    schedule is used instead.
    """
    if schedule not in SCHEDULES:
        msg = f"Unknown GHZ schedule '{schedule}'; expected one of {SCHEDULES}"
        raise ValueError(msg)
    tau12, tau13 = sys.tau(1, 2), sys.tau(1, 3)
    if schedule == "parallel" and tau13 < tau12:
        logger.warning(
            "tau13 (%.3f ms) is shorter than tau12 (%.3f ms); "
            "using sequential GHZ schedule",
            tau13 * 1e3,
            tau12 * 1e3,
        )
        schedule = "sequential"

    builder = _ProgramBuilder(sys, f"ghz-{schedule}")
    builder.rf((1,), 2 * alpha, AXIS_Y)
    if schedule == "sequential":
        builder.crot(1, 2, math.pi / 2, variant)
        builder.crot(1, 3, math.pi / 2, variant)
        return builder.build()

    tau_d = (tau13 - tau12) / 2
    spin2_echo = [
        Delay(tau_d / 2),
        RfPulse((2,), math.pi, AXIS_Y),
        Delay(tau_d / 2),
        RfPulse((2,), math.pi, AXIS_Y),
    ]
    both = ((1, 2), (1, 3))
    sign12 = math.copysign(1.0, sys.coupling(1, 2))
    sign13 = math.copysign(1.0, sys.coupling(1, 3))
    builder.rf((2, 3), math.pi / 2, AXIS_MINUS_Y)
    builder.events.extend(
        [
            *spin2_echo,
            Delay(tau12 / 2, both),
            RfPulse((1, 2, 3), math.pi, AXIS_Y),
            Delay(tau12 / 2, both),
            *spin2_echo,
            RfPulse((1, 2, 3), math.pi, AXIS_Y),
            RfPulse((2,), math.pi / 2, AXIS_MINUS_X if sign12 > 0 else AXIS_X),
            RfPulse((3,), math.pi / 2, AXIS_MINUS_X if sign13 > 0 else AXIS_X),
        ],
    )
    builder.compensate((1, 2), -sign12 * math.pi / 2, variant)
    builder.compensate((1, 3), -sign13 * math.pi / 2, variant)
    return builder.build()


def compile_w(
    beta: float,
    gamma: float,
    sys: SpinSystem,
    *,
    variant: Variant = "short",
    qubit3_phase: float = 0.0,
) -> PulseProgram:
    """Pulse program preparing the W-class state from |100>.

    The result is cos(g)cos(b)|100> + sin(g)cos(b)|001> + sin(b)|010>.

    A nonzero `qubit3_phase` adds a z rotation of that angle on qubit 3 to
    the compensation, which puts the relative phase e^{i qubit3_phase} on
    |001>; pi/2 gives (i|001> + |010> + |100>)/sqrt(3) at the equal-weight
    angles.
    """
    builder = _ProgramBuilder(sys, "w", initial_state=0b100)
    builder.rf((2,), 2 * beta, AXIS_Y)
    builder.crot(2, 1, math.pi / 2, variant)
    builder.crot(1, 3, gamma, variant)
    builder.crot(3, 1, math.pi / 2, variant)
    if qubit3_phase:
        builder.compensate((3,), qubit3_phase, variant)
    return builder.build()


def duration(prog: PulseProgram) -> float:
    """Total free-evolution time in seconds; pulses are instantaneous."""
    return math.fsum(e.duration for e in prog.events if isinstance(e, Delay))


def program_unitary(prog: PulseProgram, sys: SpinSystem) -> CMatrix:
    """Product of all event propagators, without relaxation or pending compensation."""
    u = np.eye(MAX_DIM, dtype=complex)
    for event in prog.events:
        u = event_unitary(event, sys) @ u
    return u


def _relax(m: CMatrix, t: float, sys: SpinSystem) -> CMatrix:
    gamma = 1 - math.exp(-t / sys.t1)
    dephasing_rate = max(0.0, 1 / sys.t2 - 1 / (2 * sys.t1))
    coherence = math.exp(-t * dephasing_rate)
    damping = [
        np.array([[1, 0], [0, math.sqrt(1 - gamma)]], dtype=complex),
        np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=complex),
    ]
    dephasing = [
        math.sqrt((1 + coherence) / 2) * I2,
        math.sqrt((1 - coherence) / 2) * SIGMA_Z,
    ]
    for q in range(1, N_SPINS + 1):
        for kraus in (damping, dephasing):
            lifted = [embed(k, q, N_SPINS) for k in kraus]
            m = sum(k @ m @ dagger(k) for k in lifted)
    return m


def apply_relaxation(rho: DensityMatrix, t: float, sys: SpinSystem) -> DensityMatrix:
    """Independent per-spin amplitude damping (T1) then pure dephasing for time t.

    The dephasing rate is 1/T2 - 1/(2 T1), clipped at zero.
    """
    if t < 0:
        msg = f"Relaxation time must be non-negative, got {t}"
        raise ValueError(msg)
    m = _relax(rho.entries, t, sys)
    return DensityMatrix((m + dagger(m)) / 2)


def evolve(
    prog: PulseProgram,
    rho: DensityMatrix,
    sys: SpinSystem,
    *,
    relaxation: bool = False,
) -> DensityMatrix:
    """Run the program on a three-spin density matrix.

    Pulses are instantaneous; relaxation, when enabled, acts after each delay
    for the delay's duration.

    Raises:
        DimensionError: If rho is not a three-qubit state.
        TypeError: If the program holds an unknown event.

    """
    if rho.dim != MAX_DIM:
        msg = f"Pulse programs act on three spins (dim 8), got dim {rho.dim}"
        raise DimensionError(msg)
    if not prog.is_finalized:
        logger.warning(
            "Program '%s' still has pending z compensation %s (deg)",
            prog.label,
            [round(math.degrees(a), 3) for a in prog.pending_z],
        )
    m = rho.entries
    for event in prog.events:
        u = event_unitary(event, sys)
        m = u @ m @ dagger(u)
        if relaxation and isinstance(event, Delay) and event.duration > 0:
            m = _relax(m, event.duration, sys)
    return DensityMatrix((m + dagger(m)) / 2)


def event_to_dict(event: PulseEvent) -> dict[str, Any]:
    if isinstance(event, RfPulse):
        return {
            "type": "rf",
            "targets": list(event.targets),
            "flip_deg": math.degrees(event.flip_angle),
            "phase_deg": math.degrees(event.phase),
        }
    if isinstance(event, Delay):
        return {
            "type": "delay",
            "duration_s": event.duration,
            "couplings": (
                None
                if event.active_couplings is None
                else [list(p) for p in event.active_couplings]
            ),
        }
    if isinstance(event, ZRot):
        return {
            "type": "zrot",
            "targets": list(event.targets),
            "angle_deg": math.degrees(event.angle),
        }
    return {
        "type": "transition",
        "levels": [event.level_a, event.level_b],
        "axis_phase_deg": math.degrees(event.axis_phase),
    }


def event_from_dict(payload: dict[str, Any]) -> PulseEvent:
    """Decode one event of the program JSON.

    Raises:
        ValueError: If the type tag is unknown or a field is missing.

    """
    kind = payload.get("type")
    try:
        if kind == "rf":
            return RfPulse(
                tuple(int(q) for q in payload["targets"]),
                math.radians(payload["flip_deg"]),
                math.radians(payload["phase_deg"]),
            )
        if kind == "delay":
            couplings = payload.get("couplings")
            return Delay(
                float(payload["duration_s"]),
                None if couplings is None else tuple(tuple(p) for p in couplings),
            )
        if kind == "zrot":
            return ZRot(
                tuple(int(q) for q in payload["targets"]),
                math.radians(payload["angle_deg"]),
            )
        if kind == "transition":
            level_a, level_b = payload["levels"]
            return TransitionPulse(
                int(level_a),
                int(level_b),
                math.radians(payload["axis_phase_deg"]),
            )
    except (KeyError, TypeError) as e:
        msg = f"Malformed '{kind}' pulse event: {e}"
        raise ValueError(msg) from e
    msg = f"Unknown pulse event type '{kind}'"
    raise ValueError(msg)


def program_to_dict(prog: PulseProgram) -> dict[str, Any]:
    return {
        "label": prog.label,
        "initial_state": format(prog.initial_state, "03b"),
        "pending_z_deg": [math.degrees(a) for a in prog.pending_z],
        "duration_s": duration(prog),
        "events": [event_to_dict(e) for e in prog.events],
    }


def program_from_dict(payload: dict[str, Any]) -> PulseProgram:
    return PulseProgram(
        tuple(event_from_dict(e) for e in payload.get("events", [])),
        tuple(math.radians(a) for a in payload.get("pending_z_deg", (0.0, 0.0, 0.0))),
        int(payload.get("initial_state", "000"), 2),
        str(payload.get("label", "")),
    )

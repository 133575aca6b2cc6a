"""Tests for the gate-level preparation circuits."""

from __future__ import annotations

import math

import numpy as np
import pytest

import gates
from qcore import DimensionError, Ket, unitary_distance
from states import GenericParams, generic_ket, ghz_ket, w_ket


def _random_params(rng: np.random.Generator) -> GenericParams:
    alpha, beta, gamma, delta = rng.uniform(0, math.pi / 2, size=4)
    return GenericParams(alpha, beta, gamma, delta, rng.uniform(0, 2 * math.pi))


def test_rotation_convention() -> None:
    t = 0.37
    out = gates.rotation_matrix(2 * t, gates.AXIS_Y) @ np.array([1, 0])
    np.testing.assert_allclose(out, [math.cos(t), math.sin(t)], atol=1e-15)


def test_controlled_rotation_acts_only_when_control_is_set() -> None:
    g = gates.crot(1, 3, 2 * 0.3)
    untouched = Ket.basis(0b010).apply(g.unitary)
    assert untouched.equal_up_to_global_phase(Ket.basis(0b010))
    out = Ket.basis(0b100).apply(g.unitary)
    np.testing.assert_allclose(out.amps[[0b100, 0b101]], [math.cos(0.3), math.sin(0.3)])


@pytest.mark.parametrize("fuse", [True, False])
def test_generic_circuit_matches_closed_form(
    rng: np.random.Generator,
    *,
    fuse: bool,
) -> None:
    for _ in range(1000):
        p = _random_params(rng)
        out = gates.apply(gates.build_generic_circuit(p, fuse=fuse), Ket.basis(0))
        assert abs(out.overlap(generic_ket(p))) >= 1 - 1e-10


def test_generic_circuit_intermediate_states() -> None:
    p = GenericParams(0.5, 0.6, 0.7, 0.8, 1.0)
    circuit = gates.build_generic_circuit(p)
    steps = circuit.intermediate_states(Ket.basis(0))
    assert len(steps) == len(circuit) == 7
    first = np.zeros(8)
    first[[0b000, 0b100]] = [math.cos(0.5), math.sin(0.5)]
    np.testing.assert_allclose(steps[0].amps, first, atol=1e-15)
    assert steps[-1].equal_up_to_global_phase(generic_ket(p))


def test_generic_circuit_specializes_to_ghz_and_w(rng: np.random.Generator) -> None:
    for _ in range(100):
        alpha, beta, gamma = rng.uniform(0, math.pi / 2, size=3)
        ghz = gates.apply(
            gates.build_generic_circuit(GenericParams(alpha, 0, 0, math.pi / 2)),
            Ket.basis(0),
        )
        assert ghz.equal_up_to_global_phase(ghz_ket(alpha))
        w = gates.apply(
            gates.build_generic_circuit(GenericParams(math.pi / 2, beta, gamma, 0)),
            Ket.basis(0),
        )
        assert w.equal_up_to_global_phase(w_ket(beta, gamma))


def test_ghz_circuit() -> None:
    out = gates.apply(gates.build_ghz_circuit(0.3), Ket.basis(0))
    assert out.equal_up_to_global_phase(ghz_ket(0.3))


@pytest.mark.parametrize(
    ("simplified", "start"),
    [(True, gates.W_START_SIMPLIFIED), (False, gates.W_START_FULL)],
)
def test_w_circuit_forms(*, simplified: bool, start: int) -> None:
    circuit = gates.build_w_circuit(0.4, 0.9, simplified=simplified)
    out = gates.apply(circuit, Ket.basis(start))
    assert out.equal_up_to_global_phase(w_ket(0.4, 0.9))


def test_toffoli_is_transition_pulse_times_phase_flip() -> None:
    flip = np.diag([1, 1, 1, 1, 1, 1, 1, -1]).astype(complex)
    np.testing.assert_allclose(
        gates.toffoli(1, 2, 3).unitary,
        gates.transition_pi(6, 7, 0.0).unitary @ flip,
        atol=1e-15,
    )


def test_transition_pulse_phase() -> None:
    u = gates.transition_pi(6, 7, 0.8).unitary
    assert u[7, 6] == pytest.approx(np.exp(0.8j))
    assert u[6, 7] == pytest.approx(-np.exp(-0.8j))
    np.testing.assert_allclose(u[:6, :6], np.eye(6))


def test_gate_validation() -> None:
    with pytest.raises(ValueError, match="not unitary"):
        gates.Gate(np.eye(8) * 2, "bad")
    with pytest.raises(DimensionError):
        gates.Gate(np.eye(4), "small")
    with pytest.raises(ValueError, match="distinct"):
        gates.cnot(2, 2)
    with pytest.raises(ValueError, match="1, 2 or 3"):
        gates.rot1(4, 0.1)
    with pytest.raises(ValueError, match="differ"):
        gates.transition_pi(3, 3, 0.0)


def test_apply_requires_three_qubits() -> None:
    with pytest.raises(DimensionError):
        gates.apply(gates.build_ghz_circuit(0.2), Ket.basis(0, 4))


def test_circuit_json_codec() -> None:
    params = GenericParams(0.2, 0.4, 0.6, 0.8, 2.0)
    circuit = gates.build_generic_circuit(params, fuse=False)
    entries = gates.circuit_to_list(circuit)
    assert [e["gate"] for e in entries] == [
        "rot", "crot", "cnot", "crot", "cnot", "crot", "toffoli", "ccphase",
    ]
    rebuilt = gates.circuit_from_list(entries)
    assert unitary_distance(rebuilt.unitary(), circuit.unitary()) < 1e-12
    with pytest.raises(ValueError, match="Unknown gate"):
        gates.gate_from_dict({"gate": "swap", "qubits": [1, 2]})
    with pytest.raises(ValueError, match="Bad arguments"):
        gates.gate_from_dict({"gate": "cnot", "qubits": [1]})


def test_then_appends_gates() -> None:
    base = gates.build_ghz_circuit(0.2)
    longer = base.then(gates.rot1(3, 0.5))
    assert len(longer) == len(base) + 1
    assert longer.labels()[-1].startswith("U3")


def _expected_steps(p: GenericParams) -> list[dict[int, complex]]:
    """Nonzero amplitudes after each gate of the unfused generic circuit."""
    ca, sa = math.cos(p.alpha), math.sin(p.alpha)
    cb, sb = math.cos(p.beta), math.sin(p.beta)
    cg, sg = math.cos(p.gamma), math.sin(p.gamma)
    cd, sd = math.cos(p.delta), math.sin(p.delta)
    after_cnot31 = {
        0b000: ca,
        0b100: sa * cb * cg,
        0b001: sa * cb * sg,
        0b010: sa * sb,
    }
    after_last_crot = {
        **after_cnot31,
        0b100: sa * cb * cg * cd,
        0b110: sa * cb * cg * sd,
    }
    after_toffoli = {**after_last_crot, 0b111: sa * cb * cg * sd}
    del after_toffoli[0b110]
    return [
        {0b000: ca, 0b100: sa},
        {0b000: ca, 0b100: sa * cb, 0b110: sa * sb},
        {0b000: ca, 0b100: sa * cb, 0b010: sa * sb},
        {0b000: ca, 0b100: sa * cb * cg, 0b101: sa * cb * sg, 0b010: sa * sb},
        after_cnot31,
        after_last_crot,
        after_toffoli,
        {**after_toffoli, 0b111: after_toffoli[0b111] * np.exp(1j * p.phi)},
    ]


def test_generic_circuit_state_after_every_gate(rng: np.random.Generator) -> None:
    for _ in range(100):
        p = _random_params(rng)
        steps = gates.build_generic_circuit(p, fuse=False).intermediate_states(
            Ket.basis(0),
        )
        for step, amplitudes in zip(steps, _expected_steps(p), strict=True):
            expected = np.zeros(8, dtype=complex)
            for index, value in amplitudes.items():
                expected[index] = value
            np.testing.assert_allclose(step.amps, expected, atol=1e-10)


def test_fused_pulse_lands_on_the_same_final_state(rng: np.random.Generator) -> None:
    for _ in range(20):
        p = _random_params(rng)
        fused = gates.build_generic_circuit(p).intermediate_states(Ket.basis(0))
        np.testing.assert_allclose(fused[-1].amps, generic_ket(p).amps, atol=1e-10)


@pytest.mark.parametrize(
    "gate",
    [
        gates.rot1(1, 1.1),
        gates.rot1(2, 2.3, gates.AXIS_MINUS_X),
        gates.rot1(3, 0.0),
        gates.cnot(1, 3),
        gates.cnot(3, 2),
        gates.crot(2, 1, 0.7),
        gates.crot(1, 2, 0.0),
        gates.toffoli(1, 2, 3),
        gates.toffoli(2, 3, 1),
        gates.ccphase(1, 2, 3, 2.1),
        gates.transition_pi(6, 7, 0.4),
        gates.transition_pi(0, 5, 3.0),
    ],
    ids=lambda g: g.label,
)
def test_every_gate_factory_is_unitary(gate: gates.Gate) -> None:
    u = gate.unitary
    np.testing.assert_allclose(u.conj().T @ u, np.eye(8), atol=1e-12)


def test_zero_angle_controlled_rotation_is_identity() -> None:
    np.testing.assert_allclose(gates.crot(1, 2, 0.0).unitary, np.eye(8), atol=1e-15)
    np.testing.assert_allclose(gates.rot1(2, 0.0).unitary, np.eye(8), atol=1e-15)


def test_cnot_21_flips_qubit_one() -> None:
    out = Ket.basis(0b110).apply(gates.cnot(2, 1).unitary)
    np.testing.assert_allclose(out.amps, Ket.basis(0b010).amps, atol=1e-15)


def test_ccphase_only_touches_all_ones(rng: np.random.Generator) -> None:
    phi = rng.uniform(0, 2 * math.pi)
    u = gates.ccphase(1, 2, 3, phi).unitary
    expected = np.eye(8, dtype=complex)
    expected[7, 7] = np.exp(1j * phi)
    np.testing.assert_allclose(u, expected, atol=1e-15)

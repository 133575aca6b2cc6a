"""Tests for pure-state reconstruction from two-party marginals."""

from __future__ import annotations

import math

import numpy as np
import pytest

import reconstruct
from qcore import (
    DensityMatrix,
    DimensionError,
    Ket,
    eig_hermitian,
    fidelity,
    frobenius_distance,
    partial_trace,
    random_pure_ket,
)
from states import (
    CANONICAL_GENERIC_DEG,
    GenericParams,
    generic_ket,
    ghz_ket,
    standard_w_ket,
    w_ket,
)


def _gap(ket: Ket, keep: str = "A") -> float:
    values, _ = eig_hermitian(partial_trace(ket.density(), keep).entries)
    return float(values[0] - values[1])


def test_random_pure_states_are_determined_by_ab_and_bc(
    rng: np.random.Generator,
) -> None:
    checked = 0
    for _ in range(1000):
        psi = random_pure_ket(rng)
        if _gap(psi) < 1e-2:
            continue
        rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
        out = reconstruct.reconstruct_pure(rho_ab, rho_bc)
        assert fidelity(out, psi) >= 1 - 1e-8
        checked += 1
    assert checked > 900


def test_ab_ac_entry_point(rng: np.random.Generator) -> None:
    checked = 0
    for _ in range(100):
        psi = random_pure_ket(rng)
        if _gap(psi, "C") < 1e-2:
            continue
        rho_ab, _, rho_ac = reconstruct.marginals_of(psi)
        out = reconstruct.reconstruct_from_ab_ac(rho_ab, rho_ac)
        assert fidelity(out, psi) >= 1 - 1e-8
        checked += 1
    assert checked > 80


def test_output_is_phase_fixed(rng: np.random.Generator) -> None:
    psi = random_pure_ket(rng)
    rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
    out = reconstruct.reconstruct_pure(rho_ab, rho_bc)
    lead = out.amps[np.flatnonzero(np.abs(out.amps) > 1e-12)[0]]
    assert lead.imag == pytest.approx(0.0, abs=1e-14)
    assert lead.real > 0


def test_w_states_are_determined() -> None:
    for psi in (standard_w_ket(), w_ket(0.3, 1.2)):
        rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
        assert fidelity(reconstruct.reconstruct_pure(rho_ab, rho_bc), psi) >= 1 - 1e-8


@pytest.mark.parametrize(
    "alpha",
    [*np.linspace(0.1, math.pi / 2 - 0.1, 9), math.pi / 4],
)
def test_generalized_ghz_states_are_rejected(alpha: float) -> None:
    rho_ab, rho_bc, _ = reconstruct.marginals_of(ghz_ket(alpha))
    with pytest.raises(reconstruct.DegeneracyError):
        reconstruct.reconstruct_pure(rho_ab, rho_bc)


def test_ghz_rejection_reasons() -> None:
    rho_ab, rho_bc, _ = reconstruct.marginals_of(ghz_ket(math.pi / 4))
    with pytest.raises(reconstruct.DegeneracyError, match="degenerate"):
        reconstruct.reconstruct_pure(rho_ab, rho_bc)
    rho_ab, rho_bc, _ = reconstruct.marginals_of(ghz_ket(0.4))
    with pytest.raises(reconstruct.PhaseIndeterminateError, match="relative phase"):
        reconstruct.reconstruct_pure(rho_ab, rho_bc)


def test_product_state_takes_rank_one_path() -> None:
    psi = Ket.basis(0b011)
    rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
    out = reconstruct.reconstruct_pure(rho_ab, rho_bc)
    assert out.equal_up_to_global_phase(psi)


def test_schmidt_weights_match_rho_a() -> None:
    psi = w_ket(0.3, 1.2)
    rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
    schmidt = reconstruct.schmidt_from_marginals(rho_bc, rho_ab)
    expected, _ = eig_hermitian(partial_trace(psi.density(), "A").entries)
    np.testing.assert_allclose(schmidt.p, expected, atol=1e-12)
    assert schmidt.gap == pytest.approx(expected[0] - expected[1])


def test_inconsistent_marginals() -> None:
    rho_ab = partial_trace(Ket.basis(0).density(), "AB")
    _, rho_bc, _ = reconstruct.marginals_of(standard_w_ket())
    with pytest.raises(
        reconstruct.InconsistentMarginalsError,
        match="not from one pure state",
    ):
        reconstruct.reconstruct_pure(rho_ab, rho_bc)
    loose = reconstruct.ReconstructionConfig(tol_inconsistent=0.5)
    out = reconstruct.reconstruct_pure(rho_ab, rho_bc, loose)
    assert out.dim == 8


def test_wrong_dimension() -> None:
    rho = Ket.basis(0).density()
    with pytest.raises(DimensionError, match="dim 4"):
        reconstruct.reconstruct_pure(rho, rho)


def test_config_from_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("TRIQ_TOL_DEGEN", "0.05")
    config = reconstruct.ReconstructionConfig.from_env()
    assert config.tol_degen == 0.05
    assert config.tol_inconsistent == reconstruct.DEFAULT_TOL_INCONSISTENT
    monkeypatch.setenv("TRIQ_TOL_INCONSISTENT", "loose")
    with pytest.raises(ValueError, match="TRIQ_TOL_INCONSISTENT"):
        reconstruct.ReconstructionConfig.from_env()
    with pytest.raises(ValueError, match="non-negative"):
        reconstruct.ReconstructionConfig(tol_degen=-1.0)


def test_large_degeneracy_tolerance_rejects_ordinary_states() -> None:
    rho_ab, rho_bc, _ = reconstruct.marginals_of(standard_w_ket())
    # rho_A of the W state is diag(2/3, 1/3).
    strict = reconstruct.ReconstructionConfig(tol_degen=0.5)
    with pytest.raises(reconstruct.DegeneracyError):
        reconstruct.reconstruct_pure(rho_ab, rho_bc, strict)


def test_printed_w_marginals_reconstruct_the_printed_tomograph(
    printed_w: dict[str, DensityMatrix],
) -> None:
    out = reconstruct.reconstruct_pure(printed_w["AB"], printed_w["BC"])
    rho = out.density().entries
    assert np.max(np.abs(rho - printed_w["ABC"].entries)) <= 0.05
    assert 0.95 <= fidelity(out, standard_w_ket()) <= 0.99


def test_printed_w_tomograph_fidelity(printed_w: dict[str, DensityMatrix]) -> None:
    assert 0.95 <= fidelity(printed_w["ABC"], standard_w_ket()) <= 0.99


def test_phase_fit_picks_the_closest_candidate(rng: np.random.Generator) -> None:
    psi = random_pure_ket(rng)
    rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
    schmidt = reconstruct.schmidt_from_marginals(rho_bc, rho_ab)
    alpha = reconstruct.phase_fit(schmidt, rho_ab)
    best = reconstruct.candidate_ab(schmidt, alpha)
    assert frobenius_distance(best, rho_ab) < 1e-10
    shifted = reconstruct.candidate_ab(schmidt, alpha + 0.5)
    assert frobenius_distance(shifted, rho_ab) > frobenius_distance(best, rho_ab)


def _nondegenerate(rng: np.random.Generator) -> Ket:
    while True:
        psi = random_pure_ket(rng)
        if _gap(psi) >= 1e-2:
            return psi


def test_bc_marginal_is_reproduced_exactly(rng: np.random.Generator) -> None:
    for _ in range(50):
        rho_ab, rho_bc, _ = reconstruct.marginals_of(_nondegenerate(rng))
        out = reconstruct.reconstruct_pure(rho_ab, rho_bc)
        np.testing.assert_allclose(
            partial_trace(out.density(), "BC").entries,
            rho_bc.entries,
            atol=1e-9,
        )


def test_noisy_bc_marginal_is_truncated_to_schmidt_rank_two(
    rng: np.random.Generator,
) -> None:
    psi = _nondegenerate(rng)
    noisy = DensityMatrix(0.9 * psi.density().entries + 0.1 * np.eye(8) / 8)
    rho_ab, rho_bc, _ = reconstruct.marginals_of(noisy)
    schmidt = reconstruct.schmidt_from_marginals(rho_bc, rho_ab)
    out = reconstruct.reconstruct_pure(rho_ab, rho_bc)
    v = schmidt.bc_vectors
    np.testing.assert_allclose(
        partial_trace(out.density(), "BC").entries,
        v @ np.diag(schmidt.p) @ v.conj().T,
        atol=1e-9,
    )
    assert fidelity(out, psi) > 0.99


def test_eigenvector_phases_do_not_change_the_result(
    rng: np.random.Generator,
) -> None:
    for _ in range(20):
        psi = _nondegenerate(rng)
        rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
        schmidt = reconstruct.schmidt_from_marginals(rho_bc, rho_ab)
        rephased = reconstruct.SchmidtData(
            schmidt.p,
            schmidt.a_vectors * np.exp(1j * rng.uniform(0, 2 * math.pi, size=2)),
            schmidt.bc_vectors * np.exp(1j * rng.uniform(0, 2 * math.pi, size=2)),
        )
        outs = [
            reconstruct.candidate_ket(s, reconstruct.phase_fit(s, rho_ab))
            for s in (schmidt, rephased)
        ]
        assert fidelity(outs[0], outs[1]) == pytest.approx(1.0, abs=1e-10)
        assert fidelity(outs[1], psi) == pytest.approx(1.0, abs=1e-10)


def test_phase_fit_beats_every_grid_phase(rng: np.random.Generator) -> None:
    grid = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    for _ in range(100):
        psi = _nondegenerate(rng)
        # Perturb the AB marginal so the optimum is not a perfect match.
        rho_ab = DensityMatrix(
            0.95 * partial_trace(psi.density(), "AB").entries + 0.05 * np.eye(4) / 4,
        )
        rho_bc = partial_trace(psi.density(), "BC")
        schmidt = reconstruct.schmidt_from_marginals(rho_bc, rho_ab)
        best = frobenius_distance(
            reconstruct.candidate_ab(schmidt, reconstruct.phase_fit(schmidt, rho_ab)),
            rho_ab,
        )
        for alpha in grid:
            candidate = reconstruct.candidate_ab(schmidt, alpha)
            assert best <= frobenius_distance(candidate, rho_ab) + 1e-12


def test_phase_fit_returns_zero_for_its_own_zero_phase_candidate(
    rng: np.random.Generator,
) -> None:
    psi = _nondegenerate(rng)
    rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
    schmidt = reconstruct.schmidt_from_marginals(rho_bc, rho_ab)
    alpha = reconstruct.phase_fit(schmidt, reconstruct.candidate_ab(schmidt, 0.0))
    assert alpha == pytest.approx(0.0, abs=1e-9)


def test_canonical_generic_state_round_trip() -> None:
    psi = generic_ket(GenericParams.from_degrees(*CANONICAL_GENERIC_DEG))
    rho_ab, rho_bc, _ = reconstruct.marginals_of(psi)
    out = reconstruct.reconstruct_pure(rho_ab, rho_bc)
    assert fidelity(out, psi) >= 1 - 1e-9
    np.testing.assert_allclose(
        np.abs(out.amps[[0b000, 0b001, 0b010, 0b100, 0b111]]),
        (0.707, 0.351, 0.579, 0.107, 0.172),
        atol=1e-3,
    )

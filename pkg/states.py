"""Closed-form three-qubit states.

The canonical generic state
    a1|000> + a2|001> + a3|010> + a4|100> + a5 e^{i phi}|111>
with its GHZ and W specializations, and the NMR pseudopure start state.
Angles are radians internally; the JSON and CLI boundary use degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from logger import get_logger
from qcore import MAX_DIM, DensityMatrix, Ket

logger = get_logger(__name__)

HALF_PI = math.pi / 2
TWO_PI = 2 * math.pi
ANGLE_ATOL = 1e-12
AMPLITUDE_NORM_ATOL = 1e-12

# Basis indices carrying the five canonical amplitudes.
GENERIC_SUPPORT = (0b000, 0b001, 0b010, 0b100, 0b111)

CANONICAL_GENERIC_DEG = (45.0, 55.0, 60.0, 58.0, 125.0)

# Equal-weight W state: sin(beta) = 1/sqrt(3), gamma = 45 degrees.
STANDARD_W_BETA = math.asin(1 / math.sqrt(3))
STANDARD_W_GAMMA = math.pi / 4


def _check_quarter_turn(name: str, value: float) -> float:
    if not math.isfinite(value) or not -ANGLE_ATOL <= value <= HALF_PI + ANGLE_ATOL:
        msg = (
            f"Parameter '{name}' must lie in [0, 90] degrees,"
            f" got {math.degrees(value):.6g} degrees"
        )
        raise ValueError(msg)
    return min(max(value, 0.0), HALF_PI)


@dataclass(frozen=True)
class GenericParams:
    """The five canonical parameters, radians.

    alpha, beta, gamma, delta lie in [0, pi/2]; phi is taken modulo 2 pi.
    At boundaries such as alpha = 0 the remaining parameters are irrelevant
    and the parameterization is not unique.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(
                self,
                name,
                _check_quarter_turn(name, float(getattr(self, name))),
            )
        if not math.isfinite(self.phi):
            msg = f"Parameter 'phi' must be finite, got {self.phi}"
            raise ValueError(msg)
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @classmethod
    def from_degrees(
        cls,
        alpha: float,
        beta: float,
        gamma: float,
        delta: float,
        phi: float = 0.0,
    ) -> GenericParams:
        return cls(*(math.radians(v) for v in (alpha, beta, gamma, delta, phi)))

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> GenericParams:
        """Build from {"alpha_deg", "beta_deg", "gamma_deg", "delta_deg", "phi_deg"}.

        Raises:
            ValueError: If a key is missing or a value is out of range.

        """
        names = ("alpha", "beta", "gamma", "delta", "phi")
        missing = [f"{n}_deg" for n in names if f"{n}_deg" not in payload]
        if missing:
            msg = f"Generic parameter JSON is missing {missing}"
            raise ValueError(msg)
        return cls.from_degrees(*(float(payload[f"{n}_deg"]) for n in names))

    def to_degrees_dict(self) -> dict[str, float]:
        return {
            "alpha_deg": math.degrees(self.alpha),
            "beta_deg": math.degrees(self.beta),
            "gamma_deg": math.degrees(self.gamma),
            "delta_deg": math.degrees(self.delta),
            "phi_deg": math.degrees(self.phi),
        }


@dataclass(frozen=True)
class Amplitudes:
    """Non-negative coefficients a1..a5 and the relative phase on |111>."""

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        values = self.as_tuple()
        if any(a < 0 for a in values):
            msg = f"Canonical amplitudes must be non-negative, got {values}"
            raise ValueError(msg)
        norm_sq = math.fsum(a * a for a in values)
        if abs(norm_sq - 1.0) > AMPLITUDE_NORM_ATOL:
            msg = (
                "Canonical amplitudes must have unit norm, "
                f"got sum of squares {norm_sq}"
            )
            raise ValueError(msg)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4, self.a5)

    def to_vector(self) -> np.ndarray:
        """Dense dim-8 amplitude vector in binary basis order."""
        vec = np.zeros(MAX_DIM, dtype=complex)
        vec[list(GENERIC_SUPPORT[:4])] = self.as_tuple()[:4]
        vec[GENERIC_SUPPORT[4]] = self.a5 * np.exp(1j * self.phi)
        return vec


def generic_amplitudes(p: GenericParams) -> Amplitudes:
    """Canonical amplitudes produced by the parameter set `p`."""
    ca, sa = math.cos(p.alpha), math.sin(p.alpha)
    cb, sb = math.cos(p.beta), math.sin(p.beta)
    cg, sg = math.cos(p.gamma), math.sin(p.gamma)
    cd, sd = math.cos(p.delta), math.sin(p.delta)
    return Amplitudes(
        a1=ca,
        a2=sa * cb * sg,
        a3=sa * sb,
        a4=sa * cb * cg * cd,
        a5=sa * cb * cg * sd,
        phi=p.phi,
    )


def generic_ket(p: GenericParams) -> Ket:
    return Ket(generic_amplitudes(p).to_vector())


def ghz_ket(alpha: float) -> Ket:
    """cos(alpha)|000> + sin(alpha)|111>."""
    alpha = _check_quarter_turn("alpha", alpha)
    amps = np.zeros(MAX_DIM, dtype=complex)
    amps[0b000] = math.cos(alpha)
    amps[0b111] = math.sin(alpha)
    return Ket(amps)


def w_ket(beta: float, gamma: float, phase: float = 0.0) -> Ket:
    """cos(g)cos(b)|100> + e^{i phase} sin(g)cos(b)|001> + sin(b)|010>.

    A nonzero `phase` gives the locally equivalent W state with a relative
    phase on |001>, as prepared by a z rotation of qubit 3.
    """
    beta = _check_quarter_turn("beta", beta)
    gamma = _check_quarter_turn("gamma", gamma)
    amps = np.zeros(MAX_DIM, dtype=complex)
    amps[0b100] = math.cos(gamma) * math.cos(beta)
    amps[0b001] = math.sin(gamma) * math.cos(beta) * np.exp(1j * phase)
    amps[0b010] = math.sin(beta)
    return Ket(amps)


def standard_w_ket() -> Ket:
    """(i|001> + |010> + |100>)/sqrt(3)."""
    return w_ket(STANDARD_W_BETA, STANDARD_W_GAMMA, phase=HALF_PI)


@dataclass(frozen=True)
class PseudopureSpec:
    """Basis state index (0..7) and polarization epsilon in (0, 1]."""

    basis_state: int = 0
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        if not 0 <= self.basis_state < MAX_DIM:
            msg = f"Pseudopure basis state must be in 0..7, got {self.basis_state}"
            raise ValueError(msg)
        if not 0 < self.epsilon <= 1:
            msg = f"Pseudopure epsilon must be in (0, 1], got {self.epsilon}"
            raise ValueError(msg)

    @classmethod
    def from_label(cls, label: str, epsilon: float = 1.0) -> PseudopureSpec:
        """Build from a bit string such as "100" (qubit 1 first)."""
        if len(label) != 3 or set(label) - {"0", "1"}:  # noqa: PLR2004
            msg = f"Basis label must be three bits such as '000', got '{label}'"
            raise ValueError(msg)
        return cls(int(label, 2), epsilon)


def pseudopure(spec: PseudopureSpec) -> DensityMatrix:
    """(1 - eps)/8 I + eps |s><s|."""
    m = np.eye(MAX_DIM, dtype=complex) * (1 - spec.epsilon) / MAX_DIM
    m[spec.basis_state, spec.basis_state] += spec.epsilon
    logger.debug(
        "Pseudopure state |%s> with epsilon %g",
        format(spec.basis_state, "03b"),
        spec.epsilon,
    )
    return DensityMatrix(m)

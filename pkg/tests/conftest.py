"""Shared fixtures."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from qcore import DensityMatrix, state_from_dict
from utils.fs_utils import read_json

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240517)


@pytest.fixture(autouse=True)
def _isolated_env(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep CLI log files and configuration variables out of the developer's setup."""
    monkeypatch.setenv("TRIQ_LOG_DIR", str(tmp_path / "logs"))
    for name in (
        "TRIQ_LOG_LEVEL",
        "TRIQ_SYSTEM_FILE",
        "TRIQ_TOL_DEGEN",
        "TRIQ_TOL_INCONSISTENT",
        "TRIQ_SEED",
    ):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def printed_w() -> dict[str, DensityMatrix]:
    """Printed W-state tomographs from fixtures/, symmetrized and normalized."""
    return {
        key: state_from_dict(
            read_json(FIXTURES / f"w_rho_{key.lower()}.json"),
            hermitize=True,
            normalize=True,
        )
        for key in ("AB", "BC", "ABC")
    }


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES

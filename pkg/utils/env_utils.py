"""Utility functions for environment variable management."""

from __future__ import annotations

import os


def get_required_env_var(var_name: str, purpose: str | None = None) -> str:
    """Retrieve a required environment variable, raising ValueError if not found.

    Args:
        var_name: The name of the environment variable.
        purpose: An optional string describing the purpose of the environment
                 variable, to be included in the error message if not found.

    Returns:
        The value of the environment variable.

    Raises:
        ValueError: If the environment variable is not set or is an empty string.

    """
    value = os.getenv(var_name)
    if not value:
        if purpose:
            err_msg = (
                f"Environment variable '{var_name}' required for {purpose} is not"
                " set."
            )
            raise ValueError(err_msg)
        err_msg = f"Environment variable '{var_name}' is required."
        raise ValueError(err_msg)
    return value


def get_env_var(var_name: str, default: str | None = None) -> str | None:
    """Retrieve an optional environment variable; empty strings count as unset."""
    value = os.getenv(var_name)
    if not value:
        return default
    return value


def get_float_env_var(var_name: str, default: float) -> float:
    """Retrieve an optional float-valued environment variable.

    Args:
        var_name: The name of the environment variable.
        default: Value used when the variable is not set.

    Returns:
        The parsed value, or the default.

    Raises:
        ValueError: If the variable is set but is not a valid float.

    """
    raw = get_env_var(var_name)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as e:
        err_msg = f"Environment variable '{var_name}' must be a number, got: '{raw}'"
        raise ValueError(err_msg) from e


def get_int_env_var(var_name: str, default: int) -> int:
    """Retrieve an optional integer-valued environment variable.

    Raises:
        ValueError: If the variable is set but is not a valid integer.

    """
    raw = get_env_var(var_name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as e:
        err_msg = f"Environment variable '{var_name}' must be an integer, got: '{raw}'"
        raise ValueError(err_msg) from e

"""Utility functions for file system operations and path validations."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .env_utils import get_required_env_var


def validate_path(
    path: str | Path,
    purpose: str | None = None,
    *,  # Makes subsequent arguments keyword-only
    check_exists: bool = False,
    check_is_file: bool = False,
) -> Path:
    """Turn a user-supplied path into a Path and perform the requested checks.

    Args:
        path: The path as given on the command line or in a config file.
        purpose: Optional description of the path, used in error messages.
        check_exists: If True, ensures the path exists.
        check_is_file: If True, ensures the path exists and is a file.

    Returns:
        A Path object representing the validated path.

    Raises:
        FileNotFoundError: If check_exists or check_is_file is True and the
                           path does not exist.
        ValueError: If check_is_file is True and the path is not a file.

    """
    path_obj = Path(path)
    label = f" ({purpose})" if purpose else ""

    if (check_exists or check_is_file) and not path_obj.exists():
        err_msg = f"Path '{path_obj}'{label} does not exist."
        raise FileNotFoundError(err_msg)

    if check_is_file and not path_obj.is_file():
        err_msg = (
            f"Path '{path_obj}'{label} is not a file. It exists but is a"
            " directory or other type."
        )
        raise ValueError(err_msg)

    return path_obj


def get_validated_path_from_env(
    var_name: str,
    purpose: str | None = None,
    *,
    check_exists: bool = False,
    check_is_file: bool = False,
) -> Path:
    """Retrieve a path from an environment variable and validate it.

    Raises:
        ValueError: If the environment variable is not set (from get_required_env_var).
        FileNotFoundError: If the path is required to exist and does not.

    """
    path_str = get_required_env_var(var_name, purpose)
    return validate_path(
        path_str,
        f"from environment variable '{var_name}'",
        check_exists=check_exists,
        check_is_file=check_is_file,
    )


def ensure_directory_exists(
    dir_path: Path,
    *,
    create_if_not_exists: bool = False,
) -> None:
    """Ensure a directory exists at the given path.

    Args:
        dir_path: The Path object representing the directory.
        create_if_not_exists: If True, the directory (and any necessary parents)
                              will be created if it doesn't exist.

    Raises:
        NotADirectoryError: If the path exists but is not a directory.
        FileNotFoundError: If the path does not exist and create_if_not_exists is False.

    """
    if dir_path.exists():
        if not dir_path.is_dir():
            err_msg = f"Path '{dir_path}' exists but is not a directory."
            raise NotADirectoryError(err_msg)
    elif create_if_not_exists:
        dir_path.mkdir(parents=True, exist_ok=True)
    else:
        err_msg = (
            f"Directory '{dir_path}' does not exist and create_if_not_exists is False."
        )
        raise FileNotFoundError(err_msg)


def read_json(path: str | Path, purpose: str | None = None) -> Any:  # noqa: ANN401
    """Load a JSON document from an existing file."""
    file = validate_path(path, purpose, check_is_file=True)
    with Path.open(file) as f:
        return json.load(f)


def write_json(path: str | Path, payload: Any) -> Path:  # noqa: ANN401
    """Write a JSON document with stable formatting, creating parent directories."""
    file = Path(path)
    ensure_directory_exists(file.parent, create_if_not_exists=True)
    with Path.open(file, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return file

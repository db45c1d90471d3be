"""JSON file formats shared by the library and the CLI.

Matrix:  {"rows": N, "cols": M, "re": [[...], ...], "im": [[...], ...]}  (row-major)
Tensor:  {"dims": [N1, ..., Nr], "re": [...], "im": [...]}  (flat, first index slowest)
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class FormatError(ValueError):
    """A file or config does not follow the expected schema."""


def matrix_to_json(M) -> dict:
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        M = M[:, None]
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "re": M.real.tolist(), "im": M.imag.tolist()}


def matrix_from_json(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object with rows/cols/re/im")
    for key in ("rows", "cols", "re"):
        if key not in obj:
            raise FormatError(f"{where}: missing field {key!r}")
    rows, cols = obj["rows"], obj["cols"]
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: entries must be numbers ({exc})") from None
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise FormatError(f"{where}: 're'/'im' must be {rows}x{cols} nested lists")
    M = re + 1j * im
    if not np.all(np.isfinite(M)):
        raise FormatError(f"{where}: non-finite entries")
    return M


def load_matrix(ref, base: Path | None = None, where: str = "matrix") -> np.ndarray:
    """Inline matrix object, or a path (relative to ``base``) to a matrix file."""
    if isinstance(ref, (str, Path)):
        path = Path(ref)
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            obj = json.loads(path.read_text())
        except FileNotFoundError:
            raise FormatError(f"{where}: file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise FormatError(f"{where}: invalid JSON in {path}: {exc}") from None
        return matrix_from_json(obj, where)
    return matrix_from_json(ref, where)


def save_matrix(path, M) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(M)) + "\n")


def tensor_to_json(data) -> dict:
    data = np.asarray(data, dtype=complex)
    flat = data.reshape(-1)
    return {"dims": list(data.shape), "re": flat.real.tolist(), "im": flat.imag.tolist()}


def tensor_from_json(obj, where: str = "tensor") -> np.ndarray:
    if not isinstance(obj, dict) or "dims" not in obj or "re" not in obj:
        raise FormatError(f"{where}: expected an object with dims/re/im")
    dims = obj["dims"]
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d > 0 for d in dims):
        raise FormatError(f"{where}: 'dims' must be a nonempty list of positive integers")
    try:
        re = np.asarray(obj["re"], dtype=float).reshape(-1)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{where}: entries must be numbers ({exc})") from None
    n = int(np.prod(dims))
    if re.size != n or im.size != n:
        raise FormatError(f"{where}: expected {n} entries for dims {dims}, got {re.size}/{im.size}")
    return (re + 1j * im).reshape(dims)


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise FormatError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON in {path}: {exc}") from None


def write_json(path, obj) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or str(path) == "-":
        import sys
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)

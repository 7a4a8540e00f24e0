"""JSON file format for states and matrices.

Schema version "1". Complex numbers serialize as two-element arrays
``[re, im]`` (never strings), so files are bit-exact and language neutral.
Three kinds exist:

* ``density``: ``dims`` plus a row-major matrix of ``[re, im]`` pairs,
* ``pure``: ``dims`` plus a flat vector of ``[re, im]`` pairs,
* ``matrix``: ``rows``/``cols`` plus a row-major matrix; used for raw
  matrices such as realignment output, with no physicality checks.

Serialization is canonical (fixed key order, shortest round-trip floats),
so identical inputs always produce identical bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .states import DensityMatrix, PureState

SCHEMA_VERSION = "1"


class StateFileError(ValueError):
    """Raised when a state file is malformed or fails validation."""


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_data(matrix: np.ndarray) -> list[list[list[float]]]:
    return [[_pair(z) for z in row] for row in matrix]


def density_payload(state: DensityMatrix) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "density",
        "dims": list(state.dims),
        "data": _matrix_data(state.matrix),
    }


def pure_payload(state: PureState) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "pure",
        "dims": list(state.dims),
        "data": [_pair(z) for z in state.amplitudes],
    }


def matrix_payload(matrix: np.ndarray) -> dict:
    m = np.asarray(matrix, dtype=complex)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "matrix",
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": _matrix_data(m),
    }


def dump_payload(payload: dict) -> str:
    return json.dumps(payload) + "\n"


def save(path: str | Path, obj: DensityMatrix | PureState | np.ndarray) -> None:
    if isinstance(obj, DensityMatrix):
        payload = density_payload(obj)
    elif isinstance(obj, PureState):
        payload = pure_payload(obj)
    else:
        payload = matrix_payload(obj)
    Path(path).write_text(dump_payload(payload))


def _parse_pair(entry: object, where: str) -> complex:
    if (
        not isinstance(entry, (list, tuple))
        or len(entry) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry)
    ):
        raise StateFileError(f"{where}: complex entries must be [re, im] number pairs")
    z = complex(float(entry[0]), float(entry[1]))
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise StateFileError(f"{where}: entries must be finite")
    return z


def _parse_matrix(data: object, rows: int, cols: int, where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != rows:
        raise StateFileError(f"{where}: expected {rows} matrix rows")
    out = np.zeros((rows, cols), dtype=complex)
    for r, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise StateFileError(f"{where}: row {r} must have {cols} entries")
        for c, entry in enumerate(row):
            out[r, c] = _parse_pair(entry, f"{where} row {r}")
    return out


def _parse_dims(payload: dict, where: str) -> tuple[int, ...]:
    dims = payload.get("dims")
    if (
        not isinstance(dims, list)
        or not dims
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)
    ):
        raise StateFileError(f"{where}: 'dims' must be a non-empty list of positive integers")
    return tuple(dims)


def load(path: str | Path) -> DensityMatrix | PureState | np.ndarray:
    """Load a state file; density/pure kinds are physically validated.

    :raises StateFileError: on malformed JSON, schema or shape problems, or
        a density payload violating the density-matrix invariants.
    """
    where = str(path)
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise StateFileError(f"{where}: cannot read file ({exc})") from exc
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{where}: invalid JSON ({exc})") from exc
    if not isinstance(payload, dict):
        raise StateFileError(f"{where}: top level must be a JSON object")
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise StateFileError(
            f"{where}: unsupported schema_version {payload.get('schema_version')!r}"
        )
    kind = payload.get("kind")
    if kind == "density":
        dims = _parse_dims(payload, where)
        side = math.prod(dims)
        matrix = _parse_matrix(payload.get("data"), side, side, where)
        try:
            return DensityMatrix(matrix, dims)
        except ValueError as exc:
            raise StateFileError(f"{where}: {exc}") from exc
    if kind == "pure":
        dims = _parse_dims(payload, where)
        side = math.prod(dims)
        data = payload.get("data")
        if not isinstance(data, list) or len(data) != side:
            raise StateFileError(f"{where}: expected {side} amplitudes")
        amplitudes = np.array([_parse_pair(e, where) for e in data])
        try:
            return PureState(amplitudes, dims)
        except ValueError as exc:
            raise StateFileError(f"{where}: {exc}") from exc
    if kind == "matrix":
        rows, cols = payload.get("rows"), payload.get("cols")
        for name, value in (("rows", rows), ("cols", cols)):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise StateFileError(f"{where}: '{name}' must be a positive integer")
        return _parse_matrix(payload.get("data"), rows, cols, where)
    raise StateFileError(f"{where}: unknown kind {kind!r}")

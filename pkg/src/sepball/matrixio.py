"""JSON matrix exchange format.

A matrix file is ``{"dim": n, "entries": [[re, im], ...]}`` with ``n * n``
pairs in row-major order. Extra top-level keys are ignored on read, which lets
``gen`` attach its :class:`~sepball.states.StateSpec` as ``"spec"``.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .hermitian import HERMITICITY_TOL, hermitian


class MatrixFormatError(ValueError):
    pass


def matrix_to_obj(a: np.ndarray) -> dict[str, Any]:
    a = np.asarray(a, dtype=np.complex128)
    flat = a.ravel()
    return {"dim": int(a.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def obj_to_matrix(obj: Any) -> np.ndarray:
    """Decode a matrix object without any Hermiticity check."""
    if not isinstance(obj, dict) or "dim" not in obj or "entries" not in obj:
        raise MatrixFormatError('matrix JSON must be an object with "dim" and "entries"')
    n = obj["dim"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixFormatError(f'"dim" must be a positive integer, got {n!r}')
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n * n:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise MatrixFormatError(f'"entries" must hold dim*dim = {n * n} [re, im] pairs, got {got}')
    try:
        arr = np.array(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"entries must be numeric [re, im] pairs: {exc}") from None
    if arr.shape != (n * n, 2):
        raise MatrixFormatError("every entry must be a [re, im] pair")
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(n, n)


def dumps(a: np.ndarray, **extra: Any) -> str:
    obj = matrix_to_obj(a)
    obj.update(extra)
    return json.dumps(obj)


def loads(text: str, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Parse a matrix document and return it as a validated Hermitian matrix."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"malformed JSON: {exc}") from None
    return hermitian(obj_to_matrix(obj), tol=tol)

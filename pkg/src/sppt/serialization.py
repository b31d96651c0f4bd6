"""JSON interchange for matrices, states, factors, verdicts and decompositions.

A matrix is ``{"rows": R, "cols": C, "data": [[re, im], ...]}`` in row-major
order. Floats are written with ``repr`` (shortest round-trip form), so
parsing and re-serializing reproduces the text exactly.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .classification import Classification
from .decomposition import ProductTerm, SeparableDecomposition, VerificationReport
from .errors import InvalidInput
from .factorization import BlockFactor
from .states import BipartiteState


def _num(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInput("cannot serialize non-finite number")
    return x


def _pairs(values) -> list[list[float]]:
    return [[_num(z.real), _num(z.imag)] for z in np.asarray(values, dtype=np.complex128).ravel()]


def _unpairs(data, name: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name}: entries must be [re, im] pairs") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInput(f"{name}: entries must be [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name}: non-finite entry")
    return arr[:, 0] + 1j * arr[:, 1]


def matrix_to_json(a: np.ndarray) -> dict[str, Any]:
    a = np.asarray(a)
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "data": _pairs(a)}


def matrix_from_json(obj: Any, name: str = "matrix") -> np.ndarray:
    """Parse the matrix schema; a bare nested list of reals is also accepted."""
    if isinstance(obj, list):
        try:
            arr = np.array(obj, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"{name}: expected a matrix object or a nested list of reals") from exc
        if arr.ndim != 2 or not np.all(np.isfinite(arr)):
            raise InvalidInput(f"{name}: expected a finite 2-D list")
        return arr.astype(np.complex128)
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise InvalidInput(f"{name}: expected keys rows, cols, data")
    rows, cols = obj["rows"], obj["cols"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise InvalidInput(f"{name}: rows and cols must be positive integers")
    flat = _unpairs(obj["data"], name)
    if flat.size != rows * cols:
        raise InvalidInput(f"{name}: expected {rows * cols} entries, got {flat.size}")
    return flat.reshape(rows, cols)


def vector_from_json(obj: Any, name: str) -> np.ndarray:
    return _unpairs(obj, name)


def state_to_json(rho: BipartiteState) -> dict[str, Any]:
    out = {"dim_a": rho.dim_a, "dim_b": rho.dim_b, "normalized": bool(rho.normalized)}
    out.update(matrix_to_json(rho.matrix))
    return out


def _dim(obj: dict, key: str) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise InvalidInput(f"{key} must be a positive integer")
    return v


def state_from_json(obj: Any) -> BipartiteState:
    if not isinstance(obj, dict):
        raise InvalidInput("state JSON must be an object")
    m, n = _dim(obj, "dim_a"), _dim(obj, "dim_b")
    normalized = obj.get("normalized", True)
    if not isinstance(normalized, bool):
        raise InvalidInput("normalized must be a boolean")
    return BipartiteState(m, n, matrix_from_json(obj, "state"), normalized)


def factor_to_json(factor: BlockFactor) -> dict[str, Any]:
    out: dict[str, Any] = {
        "dim_a": factor.dim_a,
        "dim_b": factor.dim_b,
        "X": [matrix_to_json(x) for x in factor.X],
        "S": [{"i": i, "j": j, "matrix": matrix_to_json(s)} for (i, j), s in sorted(factor.S.items())],
        "basis": matrix_to_json(factor.basis),
    }
    if factor.reconstruction_residual is not None:
        out["reconstruction_residual"] = _num(factor.reconstruction_residual)
    return out


def factor_from_json(obj: Any) -> BlockFactor:
    if not isinstance(obj, dict) or "X" not in obj:
        raise InvalidInput("factor JSON must be an object with an X list")
    m, n = _dim(obj, "dim_a"), _dim(obj, "dim_b")
    xs = tuple(matrix_from_json(x, f"X[{k}]") for k, x in enumerate(obj["X"]))
    s = {}
    for entry in obj.get("S", []):
        try:
            key = (int(entry["i"]), int(entry["j"]))
            s[key] = matrix_from_json(entry["matrix"], f"S{key}")
        except (KeyError, TypeError) as exc:
            raise InvalidInput("each S entry needs i, j and matrix") from exc
    basis = matrix_from_json(obj["basis"], "basis") if "basis" in obj else None
    residual = obj.get("reconstruction_residual")
    return BlockFactor(m, n, xs, s, basis, None if residual is None else float(residual))


def classification_to_json(c: Classification) -> dict[str, Any]:
    return {
        "ppt": c.ppt,
        "ppt_min_eig": _num(c.ppt_min_eig),
        "sppt": c.sppt,
        "sppt_residual": _num(c.sppt_residual),
        "super_sppt": c.super_sppt,
        "ssppt_residual": _num(c.ssppt_residual),
        "tol": _num(c.tol),
        "marginal": list(c.marginal),
        "basis": matrix_to_json(c.basis),
    }


def decomposition_to_json(d: SeparableDecomposition,
                          state: BipartiteState | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "dim_a": d.dim_a,
        "dim_b": d.dim_b,
        "terms": [
            {"weight": _num(t.weight), "row": t.row, "vec_a": _pairs(t.vec_a), "vec_b": _pairs(t.vec_b)}
            for t in d.terms
        ],
    }
    if state is not None:
        out["state"] = state_to_json(state)
    return out


def decomposition_from_json(obj: Any) -> SeparableDecomposition:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise InvalidInput("decomposition JSON must be an object with a terms list")
    m, n = _dim(obj, "dim_a"), _dim(obj, "dim_b")
    terms = []
    for idx, t in enumerate(obj["terms"]):
        try:
            terms.append(ProductTerm(float(t["weight"]), vector_from_json(t["vec_a"], f"term {idx} vec_a"),
                                     vector_from_json(t["vec_b"], f"term {idx} vec_b"), t.get("row")))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"term {idx} needs weight, vec_a and vec_b") from exc
    return SeparableDecomposition(m, n, tuple(terms))


def report_to_json(r: VerificationReport) -> dict[str, Any]:
    return {
        "passed": r.passed,
        "residual": _num(r.residual),
        "min_weight": _num(r.min_weight),
        "max_norm_defect": _num(r.max_norm_defect),
        "term_count": r.term_count,
        "tol": _num(r.tol),
        "messages": list(r.messages),
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from exc

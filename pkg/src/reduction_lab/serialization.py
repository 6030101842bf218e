"""JSON file formats for models, observables, states, and reports.

Complex numbers are two-element ``[re, im]`` arrays; matrices are row-major
nested arrays of those.  Python's shortest round-trip float formatting makes
serialization bit-exact for doubles, so parse -> serialize is a fixed point.
"""

from __future__ import annotations

import json

import numpy as np

from .instrument import CheckRecord
from .models import MeasurementModel
from .quantum import (
    DensityOperator,
    DiscreteObservable,
    PureState,
    observable_from_hermitian,
)


class ParseError(ValueError):
    """Malformed input file; message carries the offending field."""


def complex_to_json(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray) -> list:
    return [[complex_to_json(z) for z in row] for row in np.asarray(m, dtype=complex)]


def _entry_from_json(e, where: str) -> complex:
    if not isinstance(e, (list, tuple)) or len(e) != 2:
        raise ParseError(f"{where}: complex entries must be [re, im] pairs")
    try:
        return complex(float(e[0]), float(e[1]))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: non-numeric entry {e!r}") from exc


def matrix_from_json(j, where: str = "matrix") -> np.ndarray:
    if not isinstance(j, list) or not j:
        raise ParseError(f"{where}: expected a non-empty nested array")
    rows = []
    for i, row in enumerate(j):
        if not isinstance(row, list) or len(row) != len(j):
            raise ParseError(f"{where}: row {i} does not make a square matrix")
        rows.append([_entry_from_json(e, f"{where}[{i}][{k}]") for k, e in enumerate(row)])
    return np.array(rows, dtype=complex)


def vector_from_json(j, where: str = "vector") -> np.ndarray:
    if not isinstance(j, list) or not j:
        raise ParseError(f"{where}: expected a non-empty array")
    return np.array([_entry_from_json(e, f"{where}[{k}]") for k, e in enumerate(j)])


def observable_to_json(obs: DiscreteObservable) -> dict:
    return {
        "eigenvalues": [a for a, _ in obs.outcomes],
        "projectors": [matrix_to_json(p) for _, p in obs.outcomes],
    }


def observable_from_json(j, where: str = "observable") -> DiscreteObservable:
    if not isinstance(j, dict):
        raise ParseError(f"{where}: expected an object")
    if "hermitian" in j:
        h = matrix_from_json(j["hermitian"], f"{where}.hermitian")
        tol = float(j.get("degeneracy_tol", 1e-9))
        return observable_from_hermitian(h, tol)
    if "eigenvalues" not in j or "projectors" not in j:
        raise ParseError(
            f"{where}: needs either 'hermitian' or 'eigenvalues' + 'projectors'"
        )
    eigvals = j["eigenvalues"]
    projs = j["projectors"]
    if len(eigvals) != len(projs):
        raise ParseError(f"{where}: eigenvalue and projector counts differ")
    try:
        return DiscreteObservable(
            tuple(
                (float(a), matrix_from_json(p, f"{where}.projectors[{k}]"))
                for k, (a, p) in enumerate(zip(eigvals, projs))
            )
        )
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def density_to_json(rho: DensityOperator) -> dict:
    return {"density": matrix_to_json(rho.matrix)}


def density_from_json(j, where: str = "state") -> DensityOperator:
    if not isinstance(j, dict):
        raise ParseError(f"{where}: expected an object")
    try:
        if "vector" in j:
            return PureState(vector_from_json(j["vector"], f"{where}.vector")).to_density()
        if "density" in j:
            return DensityOperator(matrix_from_json(j["density"], f"{where}.density"))
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}: needs either 'density' or 'vector'")


def model_to_json(model: MeasurementModel) -> dict:
    out = {
        "dim_s": model.dim_s,
        "dim_a": model.dim_a,
        "observable": observable_to_json(model.observable),
        "apparatus_state": matrix_to_json(model.apparatus_state.matrix),
        "unitary": matrix_to_json(model.unitary),
    }
    if model.probe is not None:
        out["probe"] = observable_to_json(model.probe)
    return out


def model_from_json(j) -> MeasurementModel:
    if not isinstance(j, dict):
        raise ParseError("model: expected an object")
    for key in ("dim_s", "dim_a", "observable", "apparatus_state", "unitary"):
        if key not in j:
            raise ParseError(f"model: missing field '{key}'")
    try:
        return MeasurementModel(
            dim_s=int(j["dim_s"]),
            dim_a=int(j["dim_a"]),
            observable=observable_from_json(j["observable"], "model.observable"),
            apparatus_state=DensityOperator(
                matrix_from_json(j["apparatus_state"], "model.apparatus_state")
            ),
            unitary=matrix_from_json(j["unitary"], "model.unitary"),
            probe=(
                observable_from_json(j["probe"], "model.probe")
                if j.get("probe") is not None
                else None
            ),
        )
    except ParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"model: {exc}") from exc


def record_to_json(r: CheckRecord) -> dict:
    return {
        "check": r.check,
        "outcome": r.outcome,
        "residual": r.residual,
        "tolerance": r.tolerance,
        "pass": r.passed,
    }


def records_to_csv(records) -> str:
    lines = ["check,outcome,residual,tolerance,pass"]
    for r in records:
        outcome = "" if r.outcome is None else repr(r.outcome)
        lines.append(
            f"{r.check},{outcome},{r.residual!r},{r.tolerance!r},{r.passed}"
        )
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_file(path: str):
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}")

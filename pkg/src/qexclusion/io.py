"""JSON file formats for ensembles, measurements and reports.

Matrices are row-major nested lists of ``[re, im]`` pairs. Floats are written
with Python's shortest round-trip repr, so a written file re-parses to the
same doubles bit for bit. Non-finite numbers are written as the strings
``"inf"``, ``"-inf"`` and ``"nan"``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .ensembles import Ensemble, Measurement, OperatorList, make_ensemble, make_measurement, make_operator_list
from .errors import ExclusionError


class ParseError(Exception):
    """A file could not be read as the expected schema; the message names file and field."""


def number(x) -> float | str:
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[number(z.real), number(z.imag)] for z in row] for row in m]


def decode_matrix(data, where: str, dim: int | None = None) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError(f"{where}: expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list):
            raise ParseError(f"{where}[{i}]: expected a list of [re, im] pairs")
        vals = []
        for j, z in enumerate(row):
            if (not isinstance(z, list) or len(z) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in z)):
                raise ParseError(f"{where}[{i}][{j}]: expected a [re, im] pair of numbers")
            vals.append(complex(z[0], z[1]))
        rows.append(vals)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ParseError(f"{where}: matrix is not square")
    if dim is not None and n != dim:
        raise ParseError(f"{where}: matrix is {n} x {n} but dim is {dim}")
    return np.array(rows, dtype=complex)


def _load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: line 1: top level must be an object")
    return data


def _field(data: dict, key: str, where: str, kind):
    if key not in data:
        raise ParseError(f"{where}: missing field {key!r}")
    value = data[key]
    if kind is float:
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise ParseError(f"{where}.{key}: expected {kind.__name__}")
    return value


def ensemble_from_dict(data: dict, where: str = "ensemble") -> Ensemble | OperatorList:
    dim = _field(data, "dim", where, int)
    if dim < 1:
        raise ParseError(f"{where}.dim: must be positive")
    states = _field(data, "states", where, list)
    if not states:
        raise ParseError(f"{where}.states: must not be empty")
    sub = data.get("subnormalized", False)
    if not isinstance(sub, bool):
        raise ParseError(f"{where}.subnormalized: expected bool")
    labels, probs, mats = [], [], []
    for i, item in enumerate(states):
        at = f"{where}.states[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{at}: expected an object")
        labels.append(str(_field(item, "label", at, str)))
        if not sub:
            probs.append(float(_field(item, "prob", at, float)))
        mats.append(decode_matrix(_field(item, "matrix", at, list), f"{at}.matrix", dim))
    try:
        if sub:
            return make_operator_list(mats, labels)
        return make_ensemble(mats, probs, labels)
    except ExclusionError as exc:
        raise ParseError(f"{where}: {type(exc).__name__}: {exc}") from exc


def ensemble_to_dict(source) -> dict:
    if isinstance(source, Ensemble):
        states = [{"label": lab, "prob": number(p), "matrix": encode_matrix(rho)}
                  for lab, p, rho in zip(source.labels, source.probs, source.states)]
        return {"dim": source.dim, "states": states}
    states = [{"label": lab, "matrix": encode_matrix(op)}
              for lab, op in zip(source.labels, source.operators)]
    return {"dim": source.dim, "subnormalized": True, "states": states}


def measurement_from_dict(data: dict, where: str = "measurement") -> Measurement:
    dim = _field(data, "dim", where, int)
    elements = _field(data, "elements", where, list)
    if not elements:
        raise ParseError(f"{where}.elements: must not be empty")
    mats = []
    for i, item in enumerate(elements):
        at = f"{where}.elements[{i}]"
        if not isinstance(item, dict):
            raise ParseError(f"{at}: expected an object")
        mats.append(decode_matrix(_field(item, "matrix", at, list), f"{at}.matrix", dim))
    try:
        return make_measurement(mats)
    except ExclusionError as exc:
        raise ParseError(f"{where}: {type(exc).__name__}: {exc}") from exc


def measurement_to_dict(meas: Measurement, labels=None) -> dict:
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(len(meas.outcomes))]
    if meas.has_inconclusive:
        labels.append("?")
    return {
        "dim": meas.dim,
        "elements": [{"label": lab, "matrix": encode_matrix(m)} for lab, m in zip(labels, meas.elements)],
    }


def load_ensemble(path) -> Ensemble | OperatorList:
    return ensemble_from_dict(_load_json(path), str(path))


def load_measurement(path) -> Measurement:
    return measurement_from_dict(_load_json(path), str(path))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_json(obj, path) -> None:
    text = dumps(obj)
    if str(path) == "-":
        print(text, end="")
    else:
        Path(path).write_text(text)

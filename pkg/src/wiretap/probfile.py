"""Problem-file serialization.

JSON schema (complex scalars are [re, im] pairs):

    {
      "N": 3, "K": 2, "J": 1,
      "N0": 1.0,
      "epsilon": 0.1,
      "P_T": {"value": 12.0, "unit": "dB"},      # or "linear"
      "H": [ [[..row of [re,im]..], ...], ... ],  # K matrices, N x N
      "Z": [ ... ],                               # J matrices
      "csi_mode": "statistical"                   # optional; or
                  {"perfect_users": [[...], ...]} # K vectors of [re,im]
      "alphabet": "bpsk"                          # optional; or [[re,im], ...]
    }

dB-to-linear conversion happens here and only here; the solver core is
unit-clean linear throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .model import STATISTICAL, CsiMode, WiretapProblem, perfect_users


class ProblemFileError(ValueError):
    """Malformed problem file; the message names the offending field."""


def _complex_from_pair(pair, where: str) -> complex:
    try:
        re, im = pair
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"{where}: expected an [re, im] pair, got {pair!r}") from exc


def _matrix(entry, n: int, where: str) -> np.ndarray:
    if len(entry) != n:
        raise ProblemFileError(f"{where}: expected {n} rows, got {len(entry)}")
    rows = []
    for i, row in enumerate(entry):
        if len(row) != n:
            raise ProblemFileError(f"{where} row {i}: expected {n} entries, got {len(row)}")
        rows.append([_complex_from_pair(c, f"{where}[{i}]") for c in row])
    return np.array(rows, dtype=np.complex128)


def _vector(entry, n: int, where: str) -> np.ndarray:
    if len(entry) != n:
        raise ProblemFileError(f"{where}: expected {n} entries, got {len(entry)}")
    return np.array([_complex_from_pair(c, where) for c in entry], dtype=np.complex128)


def _power_linear(raw) -> float:
    if isinstance(raw, dict):
        try:
            value = float(raw["value"])
            unit = str(raw.get("unit", "linear"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFileError(f"P_T: malformed power entry {raw!r}") from exc
        if unit == "dB":
            return 10.0 ** (value / 10.0)
        if unit == "linear":
            return value
        raise ProblemFileError(f"P_T: unknown unit {unit!r} (use 'linear' or 'dB')")
    try:
        return float(raw)
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"P_T: expected a number or tagged object, got {raw!r}") from exc


@dataclass(frozen=True)
class ProblemFile:
    problem: WiretapProblem
    csi_mode: CsiMode
    alphabet: object | None   # built-in name (str) or list of [re, im] pairs


def parse_problem(doc: dict) -> ProblemFile:
    for field in ("N", "K", "J", "N0", "epsilon", "P_T", "H", "Z"):
        if field not in doc:
            raise ProblemFileError(f"missing required field {field!r}")
    try:
        n, k, j = int(doc["N"]), int(doc["K"]), int(doc["J"])
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"N/K/J must be integers: {exc}") from exc
    if len(doc["H"]) != k:
        raise ProblemFileError(f"H: expected {k} matrices, got {len(doc['H'])}")
    if len(doc["Z"]) != j:
        raise ProblemFileError(f"Z: expected {j} matrices, got {len(doc['Z'])}")
    h = tuple(_matrix(m, n, f"H[{i}]") for i, m in enumerate(doc["H"]))
    z = tuple(_matrix(m, n, f"Z[{i}]") for i, m in enumerate(doc["Z"]))
    try:
        n0 = float(doc["N0"])
        eps = float(doc["epsilon"])
    except (TypeError, ValueError) as exc:
        raise ProblemFileError(f"N0/epsilon must be numbers: {exc}") from exc
    problem = WiretapProblem(H=h, Z=z, N0=n0, epsilon=eps, P_T=_power_linear(doc["P_T"]))

    mode_raw = doc.get("csi_mode", "statistical")
    if mode_raw == "statistical":
        mode = STATISTICAL
    elif isinstance(mode_raw, dict) and "perfect_users" in mode_raw:
        vecs = mode_raw["perfect_users"]
        if len(vecs) != k:
            raise ProblemFileError(f"csi_mode.perfect_users: expected {k} vectors")
        mode = perfect_users([_vector(v, n, f"perfect_users[{i}]") for i, v in enumerate(vecs)])
    else:
        raise ProblemFileError(f"csi_mode: unrecognized value {mode_raw!r}")
    return ProblemFile(problem=problem, csi_mode=mode, alphabet=doc.get("alphabet"))


def load_problem(path: str) -> ProblemFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ProblemFileError(f"cannot read problem file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ProblemFileError("problem file must contain a JSON object")
    return parse_problem(doc)


def _pair(c: complex) -> list:
    return [float(np.real(c)), float(np.imag(c))]


def to_doc(p: WiretapProblem, csi_mode: CsiMode = STATISTICAL, alphabet=None) -> dict:
    def mat(m):
        return [[_pair(c) for c in row] for row in m]

    doc = {
        "N": p.N,
        "K": p.K,
        "J": p.J,
        "N0": p.N0,
        "epsilon": p.epsilon,
        "P_T": {"value": p.P_T, "unit": "linear"},
        "H": [mat(m) for m in p.H],
        "Z": [mat(m) for m in p.Z],
    }
    if not csi_mode.is_statistical:
        doc["csi_mode"] = {
            "perfect_users": [[_pair(c) for c in v] for v in csi_mode.user_channels]
        }
    if alphabet is not None:
        doc["alphabet"] = alphabet
    return doc


def save_problem(path: str, p: WiretapProblem, csi_mode: CsiMode = STATISTICAL,
                 alphabet=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_doc(p, csi_mode, alphabet), fh, indent=2, sort_keys=True)
        fh.write("\n")

"""JSON readers and writers for covariance matrices and circuits."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .gaussian_states import BeamSplitter, Circuit, Squeezer, TwoModeSqueezer
from .phase_space import CovarianceError, n_modes_of, xxpp_to_xpxp

ORDERINGS = ("xpxp", "xxpp")


class FileFormatError(ValueError):
    """A file does not follow the expected JSON layout."""


def covariance_to_dict(gamma: np.ndarray, mean=None) -> dict:
    gamma = np.asarray(gamma, dtype=float)
    out = {
        "modes": n_modes_of(gamma),
        "ordering": "xpxp",
        "hbar": 1,
        "matrix": [[float(x) for x in row] for row in gamma],
    }
    if mean is not None:
        out["mean"] = [float(x) for x in mean]
    return out


def covariance_from_dict(data: dict) -> tuple[np.ndarray, np.ndarray | None]:
    """Return ``(gamma, mean)`` in xpxp order with hbar = 1.

    ``xxpp`` input is reordered; any other ``ordering`` is rejected. A file
    written with another hbar is rescaled so the vacuum has variance 1/2.
    """
    try:
        modes = int(data["modes"])
        matrix = np.array(data["matrix"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise FileFormatError(f"covariance file needs integer 'modes' and numeric 'matrix': {exc}") from exc
    ordering = data.get("ordering", "xpxp")
    if ordering not in ORDERINGS:
        raise FileFormatError(f"unknown ordering {ordering!r}; expected one of {ORDERINGS}")
    hbar = float(data.get("hbar", 1))
    if not hbar > 0:
        raise FileFormatError("hbar must be positive")
    if matrix.shape != (2 * modes, 2 * modes):
        raise CovarianceError(f"matrix has shape {matrix.shape}, expected {(2 * modes, 2 * modes)} for {modes} modes")
    mean = data.get("mean")
    if mean is not None:
        mean = np.array(mean, dtype=float)
        if mean.shape != (2 * modes,):
            raise CovarianceError(f"mean has shape {mean.shape}, expected ({2 * modes},)")
    if ordering == "xxpp":
        matrix = xxpp_to_xpxp(matrix)
        mean = None if mean is None else xxpp_to_xpxp(mean)
    matrix = matrix / hbar
    if mean is not None:
        mean = mean / np.sqrt(hbar)
    return matrix, mean


def read_covariance(path) -> tuple[np.ndarray, np.ndarray | None]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc
    return covariance_from_dict(data)


def write_covariance(path, gamma: np.ndarray, mean=None) -> None:
    Path(path).write_text(json.dumps(covariance_to_dict(gamma, mean), indent=2) + "\n")


def _gate_from_dict(entry: dict):
    op = entry.get("op")
    if op == "sq":
        return Squeezer(int(entry["mode"]), float(entry["r"]))
    if op == "tms":
        i, j = entry["modes"]
        return TwoModeSqueezer((int(i), int(j)), float(entry["r"]))
    if op == "bs":
        i, j = entry["modes"]
        return BeamSplitter((int(i), int(j)), float(entry["theta"]))
    raise FileFormatError(f"unknown gate op {op!r}")


def circuit_from_dict(data: dict) -> Circuit:
    try:
        gates = tuple(_gate_from_dict(g) for g in data.get("gates", []))
        return Circuit(int(data["modes"]), gates)
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"malformed circuit description: {exc}") from exc


def circuit_to_dict(circuit: Circuit) -> dict:
    gates = []
    for g in circuit.gates:
        if isinstance(g, Squeezer):
            gates.append({"op": "sq", "mode": g.mode, "r": g.r})
        elif isinstance(g, TwoModeSqueezer):
            gates.append({"op": "tms", "modes": list(g.modes), "r": g.r})
        else:
            gates.append({"op": "bs", "modes": list(g.modes), "theta": g.theta})
    return {"modes": circuit.n_modes, "gates": gates}


def read_circuit(path) -> Circuit:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"{path}: not valid JSON ({exc})") from exc
    return circuit_from_dict(data)

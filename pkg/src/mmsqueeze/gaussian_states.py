"""Gaussian states built from squeezers and beam splitters.

Every gate acts on the quadrature vector in the Heisenberg picture,
``U^dagger r U = S r``, and a state evolves as ``gamma -> S gamma S^T``.
The gate actions below follow from the generators

* squeezer ``exp(r/2 (a^dag^2 - a^2))``:            x -> e^r x, p -> e^-r p
* two-mode squeezer ``exp(r (a_i^dag a_j^dag - a_i a_j))``:
  a_i -> a_i cosh r + a_j^dag sinh r
* beam splitter ``exp(theta (a_i a_j^dag - a_i^dag a_j))``:
  a_i -> a_i cos(theta) - a_j sin(theta), a_j -> a_j cos(theta) + a_i sin(theta)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .phase_space import build_symplectic_form, n_modes_of

FAMILIES = ("vacuum", "tms2", "tms3")


@dataclass(frozen=True)
class Squeezer:
    mode: int
    r: float

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.mode,)


@dataclass(frozen=True)
class TwoModeSqueezer:
    modes: tuple[int, int]
    r: float


@dataclass(frozen=True)
class BeamSplitter:
    modes: tuple[int, int]
    theta: float


Gate = Union[Squeezer, TwoModeSqueezer, BeamSplitter]


@dataclass(frozen=True)
class Circuit:
    """Gates on ``n_modes`` modes (1-based indices), listed in time order."""

    n_modes: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("a circuit needs at least one mode")
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            modes = gate.modes
            if any(not 1 <= m <= self.n_modes for m in modes):
                raise ValueError(f"{gate} addresses a mode outside 1..{self.n_modes}")
            if len(set(modes)) != len(modes):
                raise ValueError(f"{gate} needs two distinct modes")


def gate_matrix(gate: Gate, n_modes: int) -> np.ndarray:
    """Symplectic matrix of a single gate, identity on untouched modes."""
    S = np.eye(2 * n_modes)
    if isinstance(gate, Squeezer):
        k = 2 * (gate.mode - 1)
        S[k, k] = np.exp(gate.r)
        S[k + 1, k + 1] = np.exp(-gate.r)
    elif isinstance(gate, TwoModeSqueezer):
        i, j = (2 * (m - 1) for m in gate.modes)
        c, s = np.cosh(gate.r), np.sinh(gate.r)
        for a, b in ((i, j), (j, i)):
            S[a, a] = c
            S[a + 1, a + 1] = c
            S[a, b] = s
            S[a + 1, b + 1] = -s
    elif isinstance(gate, BeamSplitter):
        i, j = (2 * (m - 1) for m in gate.modes)
        c, s = np.cos(gate.theta), np.sin(gate.theta)
        for q in (0, 1):
            S[i + q, i + q] = c
            S[i + q, j + q] = -s
            S[j + q, i + q] = s
            S[j + q, j + q] = c
    else:
        raise TypeError(f"unknown gate {gate!r}")
    return S


def compile_symplectic(circuit: Circuit) -> np.ndarray:
    """Return ``S_k ... S_2 S_1`` for gates ``1..k`` applied in order."""
    S = np.eye(2 * circuit.n_modes)
    for gate in circuit.gates:
        S = gate_matrix(gate, circuit.n_modes) @ S
    return S


def is_symplectic(S: np.ndarray, atol: float = 1e-10) -> bool:
    omega = build_symplectic_form(S.shape[0] // 2)
    return bool(np.allclose(S @ omega @ S.T, omega, rtol=0, atol=atol))


def vacuum_covariance(n_modes: int) -> np.ndarray:
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    return 0.5 * np.eye(2 * n_modes)


def evolve_covariance(gamma: np.ndarray, circuit: Circuit) -> np.ndarray:
    if n_modes_of(gamma) != circuit.n_modes:
        raise ValueError(f"circuit acts on {circuit.n_modes} modes, covariance has {n_modes_of(gamma)}")
    S = compile_symplectic(circuit)
    out = S @ np.asarray(gamma, dtype=float) @ S.T
    return 0.5 * (out + out.T)


def tms3_circuit(r: float) -> Circuit:
    """Three single-mode squeezers followed by two beam splitters.

    Produces the symmetric three-mode squeezed vacuum whose collective
    position ``x_1 + x_2 + x_3`` is squeezed.
    """
    return Circuit(
        3,
        (
            Squeezer(1, -r),
            Squeezer(2, r),
            Squeezer(3, r),
            BeamSplitter((1, 2), np.arccos(1 / np.sqrt(3))),
            BeamSplitter((2, 3), np.pi / 4),
        ),
    )


def tms2_circuit(r: float) -> Circuit:
    return Circuit(2, (TwoModeSqueezer((1, 2), r),))


def named_state(family: str, r: float = 0.0, n_modes: int | None = None) -> np.ndarray:
    """Closed-form covariance matrix of a named state family.

    ``tms2`` is the two-mode squeezed vacuum, ``tms3`` the three-mode state of
    :func:`tms3_circuit`, ``vacuum`` needs ``n_modes``. These are written out
    entry by entry rather than evolved, so the circuit route stays an
    independent check.
    """
    if family == "vacuum":
        return vacuum_covariance(1 if n_modes is None else n_modes)
    if family == "tms2":
        R, S = np.cosh(2 * r), np.sinh(2 * r)
        return 0.5 * np.array(
            [
                [R, 0, S, 0],
                [0, R, 0, -S],
                [S, 0, R, 0],
                [0, -S, 0, R],
            ]
        )
    if family == "tms3":
        Rp = np.cosh(2 * r) + np.sinh(2 * r) / 3
        Rm = np.cosh(2 * r) - np.sinh(2 * r) / 3
        S = -2 / 3 * np.sinh(2 * r)
        return 0.5 * np.array(
            [
                [Rp, 0, S, 0, S, 0],
                [0, Rm, 0, -S, 0, -S],
                [S, 0, Rp, 0, S, 0],
                [0, -S, 0, Rm, 0, -S],
                [S, 0, S, 0, Rp, 0],
                [0, -S, 0, -S, 0, Rm],
            ]
        )
    raise ValueError(f"unknown state family {family!r}; expected one of {FAMILIES}")


def random_symplectic(n_modes: int, rng: np.random.Generator, max_squeezing: float = 1.0) -> np.ndarray:
    """Random symplectic matrix ``O_1 diag(e^r, e^-r) O_2`` (Bloch-Messiah form)."""

    def passive():
        z = rng.normal(size=(n_modes, n_modes)) + 1j * rng.normal(size=(n_modes, n_modes))
        U, _ = np.linalg.qr(z)
        # (x, p) of mode k transforms like (Re, Im) of a_k under a -> U a
        O = np.empty((2 * n_modes, 2 * n_modes))
        O[0::2, 0::2] = U.real
        O[0::2, 1::2] = -U.imag
        O[1::2, 0::2] = U.imag
        O[1::2, 1::2] = U.real
        return O

    r = rng.uniform(-max_squeezing, max_squeezing, size=n_modes)
    D = np.diag(np.ravel(np.column_stack([np.exp(r), np.exp(-r)])))
    return passive() @ D @ passive()


def random_covariance(
    n_modes: int,
    rng: np.random.Generator,
    max_squeezing: float = 1.0,
    max_thermal: float = 1.0,
) -> np.ndarray:
    """Random physical covariance matrix: a squeezed, mixed thermal state."""
    nu = 1 + rng.uniform(0, max_thermal, size=n_modes)
    S = random_symplectic(n_modes, rng, max_squeezing)
    gamma = S @ np.diag(np.repeat(nu, 2) / 2) @ S.T
    return 0.5 * (gamma + gamma.T)


def random_product_covariance(n_modes: int, rng: np.random.Generator, **kwargs) -> np.ndarray:
    """Block-diagonal covariance of independently drawn single-mode states."""
    gamma = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        gamma[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = random_covariance(1, rng, **kwargs)
    return gamma

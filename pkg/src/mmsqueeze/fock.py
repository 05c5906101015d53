"""Truncated Fock-space simulation of N bosonic modes.

Each mode keeps the levels ``0..d-1``; the joint space has dimension ``d**N``
with mode 1 as the most significant tensor factor. States are stored as
weighted ensembles of kets, ``rho = sum_k p_k |psi_k><psi_k|``, which keeps
low-rank mixtures (a pure state mixed with the vacuum, say) cheap at large
cutoffs.

Quadratures follow the phase-space conventions: ``x = (a + a^dag)/sqrt(2)``,
``p = i (a^dag - a)/sqrt(2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .gaussian_states import BeamSplitter, Circuit, Squeezer, TwoModeSqueezer
from .phase_space import Partition, as_partition, build_symplectic_form
from .witness import BoundCheck

DEFAULT_MEMORY_BUDGET = 2 * 1024**3
LEAKAGE_TOL = 1e-8
FOCK_GUARD = 2
COMMUTATOR_FLOOR = 1e-12
VARIANCE_FLOOR = 1e-12
CONVERGENCE_TOL = 1e-6
CUTOFF_STEP = 4

# kets, operator products and sparse generators held at once, in units of one ket
_WORKING_KETS = 64


class InapplicableCriterionError(ValueError):
    """The criterion's denominator vanishes for this state and operator pair."""


class TruncationWarning(UserWarning):
    """Population reaches the top of the truncated Fock space."""


@dataclass(frozen=True)
class FockSpace:
    n_modes: int
    cutoff: int
    memory_budget: int = DEFAULT_MEMORY_BUDGET

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError("n_modes must be positive")
        if self.cutoff < 2:
            raise ValueError("cutoff must be at least 2")
        need = 16 * self.dim * _WORKING_KETS
        if need > self.memory_budget:
            raise MemoryError(
                f"cutoff {self.cutoff} on {self.n_modes} modes needs ~{need / 2**20:.0f} MiB, "
                f"budget is {self.memory_budget / 2**20:.0f} MiB"
            )

    @property
    def dim(self) -> int:
        return self.cutoff**self.n_modes

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.cutoff,) * self.n_modes

    def check_mode(self, mode: int) -> None:
        if not 1 <= mode <= self.n_modes:
            raise ValueError(f"mode {mode} outside 1..{self.n_modes}")

    def local_annihilation(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.cutoff, dtype=float)), 1)

    def embed(self, local, mode: int) -> sp.csr_matrix:
        """Lift a single-mode ``d x d`` operator to the full space."""
        self.check_mode(mode)
        d = self.cutoff
        left = sp.identity(d ** (mode - 1), format="csr")
        right = sp.identity(d ** (self.n_modes - mode), format="csr")
        return sp.kron(sp.kron(left, sp.csr_matrix(local)), right, format="csr")

    def embed_sum(self, locals_: Sequence) -> sp.csr_matrix:
        """``sum_i A_i`` for per-mode operators (``None`` entries are skipped)."""
        if len(locals_) != self.n_modes:
            raise ValueError(f"need one local operator per mode ({self.n_modes}), got {len(locals_)}")
        out = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for mode, op in enumerate(locals_, start=1):
            if op is not None:
                out = out + self.embed(op, mode)
        return out

    def basis_state(self, occupations: Sequence[int]) -> np.ndarray:
        idx = np.ravel_multi_index(tuple(occupations), self.shape)
        v = np.zeros(self.dim, dtype=complex)
        v[idx] = 1.0
        return v

    def vacuum(self) -> "FockState":
        return FockState.pure(self, self.basis_state([0] * self.n_modes))


def ladder_ops(space: FockSpace, mode: int) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Annihilation and creation operators of ``mode`` on the full space."""
    a = space.embed(space.local_annihilation(), mode)
    return a, a.conj().T.tocsr()


def local_quadratures(space: FockSpace) -> tuple[np.ndarray, np.ndarray]:
    a = space.local_annihilation()
    x = (a + a.T) / np.sqrt(2)
    p = 1j * (a.T - a) / np.sqrt(2)
    return x, p


@dataclass(frozen=True)
class FockState:
    """Ensemble ``(weights, kets)``; ``kets`` has one column per component."""

    space: FockSpace
    weights: np.ndarray
    kets: np.ndarray
    converged: bool = True

    @classmethod
    def pure(cls, space: FockSpace, vector, converged: bool = True, atol: float = 1e-10) -> "FockState":
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if vector.size != space.dim:
            raise ValueError(f"state vector has length {vector.size}, space dimension is {space.dim}")
        nrm = np.linalg.norm(vector)
        if abs(nrm - 1) > atol:
            raise ValueError(f"state vector is not normalized (norm {nrm})")
        return cls(space, np.ones(1), (vector / nrm)[:, None], converged)

    @classmethod
    def from_density_matrix(cls, space: FockSpace, rho, atol: float = 1e-10) -> "FockState":
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (space.dim, space.dim):
            raise ValueError(f"density matrix has shape {rho.shape}, expected {(space.dim, space.dim)}")
        if np.max(np.abs(rho - rho.conj().T)) > atol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1) > atol:
            raise ValueError("density matrix does not have unit trace")
        lam, vecs = np.linalg.eigh(0.5 * (rho + rho.conj().T))
        if lam[0] < -1e-9:
            raise ValueError(f"density matrix is not positive semidefinite (min eigenvalue {lam[0]:.3e})")
        keep = lam > 1e-15
        return cls(space, lam[keep] / lam[keep].sum(), vecs[:, keep])

    @classmethod
    def ensemble(cls, space: FockSpace, weights, kets, converged: bool = True) -> "FockState":
        weights = np.asarray(weights, dtype=float)
        kets = np.asarray(kets, dtype=complex)
        if kets.ndim != 2 or kets.shape[0] != space.dim or kets.shape[1] != weights.size:
            raise ValueError("kets must be a (dim, K) array matching K weights")
        if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-10:
            raise ValueError("weights must be a probability vector")
        kets = kets / np.linalg.norm(kets, axis=0)
        return cls(space, weights, kets, converged)

    @property
    def is_pure(self) -> bool:
        return self.weights.size == 1

    @property
    def vector(self) -> np.ndarray:
        if not self.is_pure:
            raise ValueError("state is mixed")
        return self.kets[:, 0]

    def density_matrix(self) -> np.ndarray:
        need = 16 * self.space.dim**2
        if need > self.space.memory_budget:
            raise MemoryError(f"dense density matrix needs {need / 2**20:.0f} MiB")
        return (self.kets * self.weights) @ self.kets.conj().T

    def expectation(self, op) -> complex:
        return complex(np.sum(self.weights * np.einsum("ik,ik->k", self.kets.conj(), op @ self.kets)))

    def variance(self, op) -> float:
        """Variance of a Hermitian operator; ``<O^2>`` is taken as ``sum_k p_k |O psi_k|^2``."""
        Ok = op @ self.kets
        mean = np.sum(self.weights * np.einsum("ik,ik->k", self.kets.conj(), Ok)).real
        second = np.sum(self.weights * np.sum(np.abs(Ok) ** 2, axis=0))
        return float(second - mean**2)

    def commutator_expectation(self, A, B) -> complex:
        Ak, Bk = A @ self.kets, B @ self.kets
        ab = np.sum(self.weights * np.einsum("ik,ik->k", Ak.conj(), Bk))
        # <[A, B]> = <A psi|B psi> - <B psi|A psi> for Hermitian A, B
        return complex(ab - np.conj(ab))

    def occupation_probabilities(self) -> np.ndarray:
        probs = np.sum(self.weights * np.abs(self.kets) ** 2, axis=1)
        return probs.reshape(self.space.shape)

    def leakage(self, guard: int = FOCK_GUARD) -> float:
        """Population with any mode in its top ``guard`` levels."""
        probs = self.occupation_probabilities()
        d = self.space.cutoff
        grids = np.meshgrid(*[np.arange(d)] * self.space.n_modes, indexing="ij")
        mask = reduce(np.logical_or, [g >= d - guard for g in grids])
        return float(probs[mask].sum())

    def reduced(self, modes: Sequence[int]) -> np.ndarray:
        """Reduced density matrix on ``modes`` (1-based), tensor order as given."""
        modes = [int(m) for m in modes]
        for m in modes:
            self.space.check_mode(m)
        n, d = self.space.n_modes, self.space.cutoff
        keep = [m - 1 for m in modes]
        rest = [i for i in range(n) if i not in keep]
        K = self.kets.shape[1]
        T = self.kets.T.reshape((K,) + self.space.shape)
        T = np.transpose(T, [0] + [1 + i for i in keep] + [1 + i for i in rest])
        T = T.reshape(K, d ** len(keep), d ** len(rest))
        return np.einsum("k,kab,kcb->ac", self.weights, T, T.conj())

    def purity(self) -> float:
        G = self.kets.conj().T @ self.kets
        return float(np.real(np.einsum("i,j,ij,ij->", self.weights, self.weights, G, G.conj())))


@dataclass(frozen=True)
class ObservableMatrix:
    """Hermitian operator on the full space, optionally with its local summands."""

    matrix: sp.csr_matrix
    label: str = ""
    locals: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        M = sp.csr_matrix(self.matrix)
        if M.shape[0] and abs(M - M.conj().T).max() > 1e-10:
            raise ValueError(f"observable {self.label!r} is not Hermitian")
        object.__setattr__(self, "matrix", M)


def _second_order_local(space: FockSpace, c_re: float, c_im: float) -> np.ndarray:
    a = space.local_annihilation()
    a2 = a @ a
    return c_re * (a2 + a2.T) + c_im * 1j * (a2.T - a2)


def second_order_locals(space: FockSpace, mu) -> tuple[np.ndarray, ...]:
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (2 * space.n_modes,):
        raise ValueError(f"mu must have length {2 * space.n_modes}")
    return tuple(_second_order_local(space, mu[2 * i], mu[2 * i + 1]) for i in range(space.n_modes))


def nonlinear_observable(space: FockSpace, mu) -> ObservableMatrix:
    """``D(mu) = sum_i mu_{2i-1}(a_i^2 + a_i^dag^2) + mu_{2i} i(a_i^dag^2 - a_i^2)`` on two modes."""
    if space.n_modes != 2:
        raise ValueError("the second-order observable D(mu) is defined for two modes")
    locals_ = second_order_locals(space, mu)
    return ObservableMatrix(space.embed_sum(locals_), f"D({list(np.asarray(mu, dtype=float))})", locals_)


def quadrature_observable(space: FockSpace, v) -> ObservableMatrix:
    """``M(v) = sum_j n_j x_j + m_j p_j`` for ``v_j = n_j + i m_j``."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (space.n_modes,):
        raise ValueError(f"v must have length {space.n_modes}")
    x, p = local_quadratures(space)
    locals_ = tuple(vj.real * x + vj.imag * p for vj in v)
    return ObservableMatrix(space.embed_sum(locals_), f"M({list(v)})", locals_)


def observable_from_spec(space: FockSpace, spec: dict) -> ObservableMatrix:
    """Build an observable from its JSON description.

    ``{"type": "second_order", "mu": [c1, c2, c3, c4]}`` or
    ``{"type": "quadrature", "v": [[re, im], ...]}``.
    """
    kind = spec.get("type")
    if kind == "second_order":
        return nonlinear_observable(space, spec["mu"])
    if kind == "quadrature":
        v = [complex(re, im) for re, im in spec["v"]]
        return quadrature_observable(space, v)
    raise ValueError(f"unknown observable type {kind!r}")


def expm_multiply_taylor(G, v: np.ndarray, rel_tol: float = 1e-16, max_terms: int = 200) -> np.ndarray:
    """``exp(G) v`` by Taylor series on substeps with ``||G / s||_1 <= 1``.

    Each substep sums terms until the newest term's norm drops below
    ``rel_tol`` times the accumulated norm.
    """
    G = sp.csr_matrix(G)
    norm1 = abs(G).sum(axis=0).max() if G.nnz else 0.0
    steps = max(1, math.ceil(norm1))
    Gs = G / steps
    out = np.asarray(v, dtype=complex).copy()
    for _ in range(steps):
        term = out
        acc = out.copy()
        for k in range(1, max_terms + 1):
            term = Gs @ term / k
            acc += term
            if np.linalg.norm(term) <= rel_tol * np.linalg.norm(acc):
                break
        else:
            raise RuntimeError("Taylor series did not converge within max_terms")
        out = acc
    return out


def _finish(space: FockSpace, psi: np.ndarray, leakage_tol: float, what: str) -> FockState:
    psi = psi / np.linalg.norm(psi)
    state = FockState.pure(space, psi)
    leak = state.leakage()
    if leak >= leakage_tol:
        warnings.warn(
            f"{what}: population {leak:.2e} in the top {FOCK_GUARD} Fock levels exceeds {leakage_tol:.0e}; "
            f"raise the cutoff (currently {space.cutoff})",
            TruncationWarning,
            stacklevel=3,
        )
        state = FockState(space, state.weights, state.kets, converged=False)
    return state


def fourth_order_generator(space: FockSpace, r: float) -> sp.csr_matrix:
    """``(r/2)(a_1^dag^2 a_2^dag^2 - a_1^2 a_2^2)``."""
    a1, a1d = ladder_ops(space, 1)
    a2, a2d = ladder_ops(space, 2)
    K = a1d @ a1d @ a2d @ a2d
    return ((r / 2) * (K - K.conj().T)).tocsr()


def prepare_fourth_order_state(space: FockSpace, r: float, leakage_tol: float = LEAKAGE_TOL) -> FockState:
    """Fourth-order two-mode squeezed vacuum ``exp(G)|0,0>``."""
    if space.n_modes != 2:
        raise ValueError("fourth-order squeezing acts on two modes")
    vac = space.basis_state([0, 0])
    if r == 0:
        return FockState.pure(space, vac)
    return _finish(space, expm_multiply_taylor(fourth_order_generator(space, r), vac), leakage_tol, "fourth-order state")


def gate_generator(space: FockSpace, gate) -> sp.csr_matrix:
    """Anti-Hermitian generator of a Gaussian gate on the truncated space."""
    if isinstance(gate, Squeezer):
        a, ad = ladder_ops(space, gate.mode)
        return (gate.r / 2) * (ad @ ad - a @ a)
    i, j = gate.modes
    ai, aid = ladder_ops(space, i)
    aj, ajd = ladder_ops(space, j)
    if isinstance(gate, TwoModeSqueezer):
        return gate.r * (aid @ ajd - ai @ aj)
    if isinstance(gate, BeamSplitter):
        return gate.theta * (ai @ ajd - aid @ aj)
    raise TypeError(f"unknown gate {gate!r}")


def prepare_gaussian_state(space: FockSpace, circuit: Circuit, leakage_tol: float = LEAKAGE_TOL) -> FockState:
    """Apply a Gaussian circuit to the Fock vacuum, gate by gate."""
    if circuit.n_modes != space.n_modes:
        raise ValueError("circuit and Fock space disagree on the number of modes")
    psi = space.basis_state([0] * space.n_modes)
    for gate in circuit.gates:
        psi = expm_multiply_taylor(gate_generator(space, gate), psi)
    return _finish(space, psi, leakage_tol, "Gaussian circuit state")


def mix_with_vacuum(psi: FockState, s: float) -> FockState:
    """``(|psi><psi| + s |0><0|) / (1 + s)``."""
    if s < 0:
        raise ValueError("mixing weight s must be nonnegative")
    if not psi.is_pure:
        raise ValueError("mix_with_vacuum expects a pure state")
    if s == 0:
        return psi
    space = psi.space
    kets = np.column_stack([psi.vector, space.basis_state([0] * space.n_modes)])
    return FockState(space, np.array([1.0, s]) / (1 + s), kets, psi.converged)


def partial_trace_product(state: FockState, partition: Partition | str | None = None) -> FockState:
    """Tensor product of the reduced states on the partition blocks."""
    space = state.space
    partition = as_partition(partition, space.n_modes)
    d, n = space.cutoff, space.n_modes
    weights = np.ones(1)
    kets = np.ones((1, 1), dtype=complex)  # rows: joint block index, cols: components
    order: list[int] = []
    for block in partition.blocks:
        lam, vecs = np.linalg.eigh(state.reduced(block))
        keep = lam > 1e-15
        lam, vecs = lam[keep], vecs[:, keep]
        weights = np.kron(weights, lam)
        kets = np.einsum("ak,bl->abkl", kets, vecs).reshape(kets.shape[0] * vecs.shape[0], -1)
        order.extend(m - 1 for m in block)
    K = kets.shape[1]
    T = kets.T.reshape((K,) + (d,) * n)
    T = np.transpose(T, [0] + [1 + order.index(i) for i in range(n)])
    return FockState(space, weights / weights.sum(), T.reshape(K, -1).T, state.converged)


def _block_operator(space: FockSpace, locals_: Sequence, block: Sequence[int]) -> np.ndarray:
    """``sum_{i in block} A_i`` on the block's own ``d**|block|`` space."""
    d = space.cutoff
    k = len(block)
    out = np.zeros((d**k, d**k), dtype=complex)
    for pos, mode in enumerate(block):
        op = locals_[mode - 1]
        if op is None:
            continue
        out += np.kron(np.kron(np.eye(d**pos), np.asarray(op)), np.eye(d ** (k - pos - 1)))
    return out


def uncorrelated_variance(state: FockState, locals_: Sequence, partition: Partition | str | None = None) -> float:
    """``Var(sum_i A_i)`` on the correlation-free state, summed block by block."""
    space = state.space
    partition = as_partition(partition, space.n_modes)
    if len(locals_) != space.n_modes:
        raise ValueError(f"need one local operator per mode ({space.n_modes})")
    total = 0.0
    for block in partition.blocks:
        if all(locals_[m - 1] is None for m in block):
            continue
        rho = state.reduced(block)
        O = _block_operator(space, locals_, block)
        mean = np.trace(rho @ O).real
        total += np.trace(rho @ O @ O).real - mean**2
    return float(total)


def _locals_of(obs) -> tuple:
    if isinstance(obs, ObservableMatrix):
        if obs.locals is None:
            raise ValueError(f"observable {obs.label!r} is not a sum of local operators")
        return obs.locals
    return tuple(obs)


def _matrix_of(space: FockSpace, obs) -> sp.csr_matrix:
    if isinstance(obs, ObservableMatrix):
        return obs.matrix
    if isinstance(obs, (list, tuple)):
        return space.embed_sum(obs)
    return sp.csr_matrix(obs)


@dataclass(frozen=True)
class SqueezingRatio:
    """``4 Var(A)_Pi Var(B) / |<[A, B]>|^2`` with its ingredients."""

    value: float
    var_uncorrelated: float
    var_full: float
    commutator: complex


def general_squeezing_ratio(
    state: FockState,
    A_locals,
    B,
    partition: Partition | str | None = None,
    commutator_floor: float = COMMUTATOR_FLOOR,
) -> SqueezingRatio:
    space = state.space
    locals_ = _locals_of(A_locals)
    A = space.embed_sum(locals_)
    Bm = _matrix_of(space, B)
    comm = state.commutator_expectation(A, Bm)
    if abs(comm) < commutator_floor:
        raise InapplicableCriterionError(
            "commutator expectation vanishes; criterion inapplicable for this operator pair"
        )
    var_pi = uncorrelated_variance(state, locals_, partition)
    var_b = state.variance(Bm)
    return SqueezingRatio(4 * var_pi * var_b / abs(comm) ** 2, var_pi, var_b, comm)


def general_xi_squared(state: FockState, A_locals, B, partition: Partition | str | None = None, **kwargs) -> float:
    """``4 Var(A)_Pi(rho) Var(B)_rho / |<[A, B]>_rho|^2`` for ``A = sum_i A_i``.

    Separable states give values of at least one. ``A_locals`` lists one
    single-mode operator per mode (or an :class:`ObservableMatrix` that carries
    them); ``B`` is any Hermitian operator on the full space.
    """
    return general_squeezing_ratio(state, A_locals, B, partition, **kwargs).value


def default_directions(c1: float = 1.0, c2: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """``mu0 = (c1, c2, -c1, c2)`` and its maximally non-commuting partner ``Omega mu0``."""
    mu0 = np.array([c1, c2, -c1, c2], dtype=float)
    return mu0, build_symplectic_form(2) @ mu0


def giovannetti_directions(c1: float = 1.0, c2: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Second-order directions for the product criterion: ``mu0`` and ``(c2, -c1, -c2, -c1)``."""
    return np.array([c1, c2, -c1, c2], dtype=float), np.array([c2, -c1, -c2, -c1], dtype=float)


def chi_ratio(state: FockState, mu, nu, partition: Partition | str | None = None) -> SqueezingRatio:
    """Non-Gaussian coefficient with its ingredients; ``D(nu)`` is the uncorrelated side."""
    space = state.space
    return general_squeezing_ratio(state, second_order_locals(space, nu), nonlinear_observable(space, mu), partition)


def chi_coefficient(state: FockState, mu, nu, partition: Partition | str | None = None) -> float:
    """``4 Var(D(mu))_rho Var(D(nu))_Pi(rho) / |<[D(mu), D(nu)]>_rho|^2``; below one means entangled."""
    return chi_ratio(state, mu, nu, partition).value


def giovannetti_general(state: FockState, A_locals, B_locals, alpha, beta) -> BoundCheck:
    """``Var(sum a_i A_i) Var(sum b_i B_i) >= (sum_i |a_i b_i <[A_i, B_i]>|)^2 / 4`` for separable states."""
    space = state.space
    A_locals, B_locals = _locals_of(A_locals), _locals_of(B_locals)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if not (len(A_locals) == len(B_locals) == alpha.size == beta.size == space.n_modes):
        raise ValueError(f"need {space.n_modes} local operators and coefficients on each side")
    A_terms = [None if op is None else a * np.asarray(op) for a, op in zip(alpha, A_locals)]
    B_terms = [None if op is None else b * np.asarray(op) for b, op in zip(beta, B_locals)]
    lhs = state.variance(space.embed_sum(A_terms)) * state.variance(space.embed_sum(B_terms))
    rhs = 0.0
    for mode, (a, b, Ai, Bi) in enumerate(zip(alpha, beta, A_locals, B_locals), start=1):
        if Ai is None or Bi is None or a * b == 0:
            continue
        rhs += abs(a * b * state.commutator_expectation(space.embed(Ai, mode), space.embed(Bi, mode)))
    return BoundCheck(float(lhs), float(rhs**2 / 4))


def fisher_density_pure(
    state: FockState,
    A_locals,
    partition: Partition | str | None = None,
    variance_floor: float = VARIANCE_FLOOR,
) -> float:
    """``Var(A)_psi / Var(A)_Pi(psi)``, the Fisher density of a pure state.

    Uses ``F_Q = 4 Var`` for pure states; values above one reveal
    entanglement across the partition.
    """
    if not state.is_pure:
        raise ValueError("the Fisher density is only available for pure states")
    locals_ = _locals_of(A_locals)
    var_pi = uncorrelated_variance(state, locals_, partition)
    if var_pi < variance_floor:
        raise InapplicableCriterionError("uncorrelated variance vanishes; Fisher density undefined")
    return state.variance(state.space.embed_sum(locals_)) / var_pi


def fock_moments(state: FockState) -> tuple[np.ndarray, np.ndarray]:
    """First moments and symmetrized covariance matrix of the quadratures."""
    space = state.space
    x, p = local_quadratures(space)
    ops = []
    for mode in range(1, space.n_modes + 1):
        ops += [space.embed(x, mode), space.embed(p, mode)]
    vecs = [op @ state.kets for op in ops]
    mean = np.array([np.sum(state.weights * np.einsum("ik,ik->k", state.kets.conj(), v)).real for v in vecs])
    n = len(ops)
    gamma = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            second = np.sum(state.weights * np.einsum("ik,ik->k", vecs[i].conj(), vecs[j])).real
            gamma[i, j] = gamma[j, i] = second - mean[i] * mean[j]
    return mean, gamma


def gaussian_crosscheck(state: FockState, gamma_expected, mean_expected=None) -> float:
    """Largest absolute deviation between Fock-space moments and the expected ones."""
    mean, gamma = fock_moments(state)
    gamma_expected = np.asarray(gamma_expected, dtype=float)
    mean_expected = np.zeros_like(mean) if mean_expected is None else np.asarray(mean_expected, dtype=float)
    return float(max(np.max(np.abs(gamma - gamma_expected)), np.max(np.abs(mean - mean_expected))))


@dataclass(frozen=True)
class ChiPoint:
    """One point of the non-Gaussian witness with its truncation diagnostics."""

    r: float
    s: float
    chi: float | None
    converged: bool
    cutoff_used: int
    leakage: float
    drift: float
    giovannetti: BoundCheck | None = None

    @property
    def applicable(self) -> bool:
        return self.chi is not None


def _chi_quantities(r, s, cutoff, mu, nu, mu_g, nu_g, memory_budget):
    space = FockSpace(2, cutoff, memory_budget)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        psi = prepare_fourth_order_state(space, r)
    rho = mix_with_vacuum(psi, s)
    leak = rho.leakage()
    try:
        ratio = chi_ratio(rho, mu, nu)
    except InapplicableCriterionError:
        return None, leak, None, None
    A_g, B_g = second_order_locals(space, mu_g), second_order_locals(space, nu_g)
    gio = giovannetti_general(rho, A_g, B_g, np.ones(2), np.ones(2))
    # expectation values behind both criteria, compared across cutoffs
    reported = [
        ratio.value,
        ratio.var_full,
        ratio.var_uncorrelated,
        abs(ratio.commutator),
        rho.variance(space.embed_sum(A_g)),
        rho.variance(space.embed_sum(B_g)),
    ]
    reported += [
        abs(rho.commutator_expectation(space.embed(a, m), space.embed(b, m)))
        for m, (a, b) in enumerate(zip(A_g, B_g), start=1)
    ]
    return ratio.value, leak, np.array(reported), gio


def fourth_order_chi(
    r: float,
    s: float,
    cutoff: int = 20,
    *,
    auto: bool = False,
    c: tuple[float, float] = (1.0, 0.0),
    leakage_tol: float = LEAKAGE_TOL,
    convergence_tol: float = CONVERGENCE_TOL,
    max_cutoff: int = 160,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> ChiPoint:
    """Witness the fourth-order squeezed state mixed with the vacuum.

    A result counts as converged when the leakage into the top Fock levels is
    below ``leakage_tol`` and the coefficient and every expectation value
    behind it and behind the product criterion (variances and commutators)
    move by less than ``convergence_tol`` when the cutoff is raised by four.
    With ``auto`` the cutoff doubles until that holds, the memory budget is
    exhausted, or ``max_cutoff`` is passed.
    """
    mu, nu = default_directions(*c)
    mu_g, nu_g = giovannetti_directions(*c)
    d = cutoff
    while True:
        chi, leak, reported, gio = _chi_quantities(r, s, d, mu, nu, mu_g, nu_g, memory_budget)
        if chi is None:
            return ChiPoint(r, s, None, True, d, leak, 0.0, None)
        _, _, reported_up, _ = _chi_quantities(r, s, d + CUTOFF_STEP, mu, nu, mu_g, nu_g, memory_budget)
        drift = float(np.max(np.abs(reported_up - reported)))
        converged = leak < leakage_tol and drift < convergence_tol
        if converged or not auto or 2 * d > max_cutoff:
            return ChiPoint(r, s, chi, converged, d, leak, drift, gio)
        try:
            FockSpace(2, 2 * d + CUTOFF_STEP, memory_budget)
        except MemoryError:
            return ChiPoint(r, s, chi, converged, d, leak, drift, gio)
        d *= 2

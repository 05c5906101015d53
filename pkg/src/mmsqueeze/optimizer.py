"""Minimization of a normalized product of two quadratic forms.

The objective is ``4 (g^T A g)(g^T B g) / (g^T g)^2``, which is invariant under
``g -> c g``. Each local search runs Nelder-Mead in a chart of the unit sphere
around its start point, ``g(u) = g0 + Q u`` with ``Q`` an orthonormal basis of
the complement of ``g0``; since the objective is even in ``g`` this chart
covers every direction except a null set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize as _scipy_minimize

from .phase_space import PSD_TOL, SYMMETRY_TOL


@dataclass(frozen=True)
class OptimizerConfig:
    seed: int = 42
    n_random: int = 16
    tol: float = 1e-12
    max_iter: int = 10_000
    simplex_step: float = 0.25


@dataclass(frozen=True)
class RayleighProductProblem:
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        B = np.array(self.B, dtype=float)
        if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A and B must be square and of equal shape, got {A.shape} and {B.shape}")
        for name, M in (("A", A), ("B", B)):
            if np.max(np.abs(M - M.T)) > SYMMETRY_TOL:
                raise ValueError(f"{name} is not symmetric")
            if np.linalg.eigvalsh(M)[0] < -PSD_TOL:
                raise ValueError(f"{name} is not positive semidefinite")
        object.__setattr__(self, "A", 0.5 * (A + A.T))
        object.__setattr__(self, "B", 0.5 * (B + B.T))

    @property
    def dim(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class OptimizationResult:
    g_opt: np.ndarray
    value: float
    n_restarts_used: int
    converged: bool


def objective(problem: RayleighProductProblem, g) -> float:
    g = np.asarray(g, dtype=float)
    nrm2 = g @ g
    if nrm2 == 0.0:
        raise ValueError("direction must be nonzero")
    return float(4.0 * (g @ problem.A @ g) * (g @ problem.B @ g) / nrm2**2)


def objective_gradient(problem: RayleighProductProblem, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    Ag, Bg = problem.A @ g, problem.B @ g
    a, b, s = g @ Ag, g @ Bg, g @ g
    if s == 0.0:
        raise ValueError("direction must be nonzero")
    return 8 * (b * Ag + a * Bg) / s**2 - 16 * a * b * g / s**3


def canonical_sign(g: np.ndarray) -> np.ndarray:
    """Normalize ``g`` and flip it so its first non-negligible entry is positive."""
    g = np.asarray(g, dtype=float)
    g = g / np.linalg.norm(g)
    nz = np.flatnonzero(np.abs(g) > 1e-12)
    if nz.size and g[nz[0]] < 0:
        g = -g
    return g


def start_points(problem: RayleighProductProblem, config: OptimizerConfig) -> list[np.ndarray]:
    """Eigenvectors of B, eigenvectors of A, then seeded random unit vectors."""
    starts = [v for v in np.linalg.eigh(problem.B)[1].T]
    starts += [v for v in np.linalg.eigh(problem.A)[1].T]
    rng = np.random.default_rng(config.seed)
    for _ in range(config.n_random):
        v = rng.normal(size=problem.dim)
        starts.append(v / np.linalg.norm(v))
    return starts


def _nelder_mead_in_chart(problem, g0, config, max_iter, step):
    Q = null_space(g0[None, :])
    m = Q.shape[1]
    # quadratic forms restricted to the chart: g = [g0 Q] (1, u)
    basis = np.column_stack([g0, Q])
    A = basis.T @ problem.A @ basis
    B = basis.T @ problem.B @ basis
    w = np.ones(m + 1)

    def f(u):
        w[1:] = u
        return 4.0 * (w @ A @ w) * (w @ B @ w) / (w @ w) ** 2

    simplex = np.vstack([np.zeros(m), step * np.eye(m)])
    res = _scipy_minimize(
        f,
        np.zeros(m),
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "fatol": config.tol,
            "xatol": np.inf,
            "maxiter": max_iter,
            "maxfev": 20 * max_iter,
        },
    )
    g = g0 + Q @ res.x
    return g / np.linalg.norm(g), res.nit, res.status == 0


def local_search(problem: RayleighProductProblem, g0, config: OptimizerConfig) -> tuple[np.ndarray, float, bool]:
    """Nelder-Mead from ``g0``, re-centred on the incumbent until it stops improving.

    Re-centring rebuilds the simplex (ten times smaller each round), which gets the search out of the
    collapsed simplices Nelder-Mead is known to stall in. The iteration budget
    ``config.max_iter`` is shared across all rounds.
    """
    g = np.asarray(g0, dtype=float)
    g = g / np.linalg.norm(g)
    value = objective(problem, g)
    if problem.dim == 1:
        return g, value, True
    budget = config.max_iter
    converged = False
    step = config.simplex_step
    while budget > 0:
        g_new, nit, converged = _nelder_mead_in_chart(problem, g, config, budget, step)
        step *= 0.1
        budget -= max(nit, 1)
        new_value = objective(problem, g_new)
        if new_value >= value:
            break
        improvement = value - new_value
        g, value = g_new, new_value
        if improvement <= config.tol:
            break
    return canonical_sign(g), value, converged


def minimize(problem: RayleighProductProblem, config: OptimizerConfig | None = None) -> OptimizationResult:
    """Multi-start minimization of :func:`objective`.

    Returns the best local minimum over all starts; ties in value (within
    1e-14 relative) go to the lexicographically smallest ``|g|``.
    """
    config = config or OptimizerConfig()
    starts = start_points(problem, config)
    results = [local_search(problem, g0, config) for g0 in starts]
    best_value = min(v for _, v, _ in results)
    tie = 1e-14 * max(1.0, abs(best_value))
    candidates = [(tuple(np.abs(g)), i) for i, (g, v, _) in enumerate(results) if v <= best_value + tie]
    _, i_best = min(candidates)
    g, _, _ = results[i_best]
    return OptimizationResult(
        g_opt=g,
        value=float(objective(problem, g)),
        n_restarts_used=len(starts),
        converged=any(c for _, _, c in results),
    )

"""Covariance-level entanglement witnesses.

The central quantity is the multi-mode squeezing coefficient

    xi^2_g = 4 (g^T Omega^T gamma_Pi Omega g)(g^T gamma g) / (g^T g)^2,

minimized over phase-space directions ``g``, where ``gamma_Pi`` is ``gamma``
with the correlations between partition blocks removed. Values below one
certify that the state is not separable with respect to the partition.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .optimizer import OptimizationResult, OptimizerConfig, RayleighProductProblem, minimize, objective
from .phase_space import (
    Partition,
    as_partition,
    build_symplectic_form,
    commutator_form,
    direction_from_complex,
    n_modes_of,
    quadratic_variance,
    remove_correlations,
)

VERDICT_MARGIN = 1e-9
BOUND_TOL = 1e-12


@dataclass(frozen=True)
class SqueezingVerdict:
    xi_squared: float
    g_opt: np.ndarray
    partition: Partition
    converged: bool = True

    @property
    def entangled(self) -> bool:
        return bool(self.xi_squared < 1 - VERDICT_MARGIN)

    @property
    def margin(self) -> float:
        return 1 - self.xi_squared

    def to_dict(self) -> dict:
        return {
            "xi2": float(self.xi_squared),
            "g_opt": [float(x) for x in self.g_opt],
            "partition": [list(b) for b in self.partition.blocks],
            "entangled": bool(self.entangled),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class BoundCheck:
    """A separability inequality ``lhs >= rhs``; ``violated`` flags entanglement."""

    lhs: float
    rhs: float

    @property
    def violated(self) -> bool:
        return self.lhs < self.rhs - BOUND_TOL


def squeezing_problem(gamma: np.ndarray, partition: Partition | str | None = None) -> RayleighProductProblem:
    """A = Omega^T gamma_Pi Omega (correlation-free side), B = gamma."""
    gamma = np.asarray(gamma, dtype=float)
    n = n_modes_of(gamma)
    omega = build_symplectic_form(n)
    gamma_pi = remove_correlations(gamma, as_partition(partition, n))
    return RayleighProductProblem(omega.T @ gamma_pi @ omega, gamma)


def xi_squared(
    gamma: np.ndarray,
    partition: Partition | str | None = None,
    config: OptimizerConfig | None = None,
) -> SqueezingVerdict:
    """Minimized multi-mode squeezing coefficient for ``partition`` (default: all modes split)."""
    partition = as_partition(partition, n_modes_of(gamma))
    result: OptimizationResult = minimize(squeezing_problem(gamma, partition), config)
    return SqueezingVerdict(result.value, result.g_opt, partition, result.converged)


def xi_squared_at(gamma: np.ndarray, partition: Partition | str | None, g) -> float:
    """``xi^2_g`` for one fixed direction, no optimization."""
    return objective(squeezing_problem(gamma, partition), g)


def variance_bound(gamma: np.ndarray, partition: Partition | str | None, h, g) -> BoundCheck:
    """``(h^T gamma_Pi h)(g^T gamma g) >= (h^T Omega g)^2 / 4`` for separable states.

    With ``h = Omega g`` this is the test ``xi^2_g >= 1``.
    """
    gamma = np.asarray(gamma, dtype=float)
    gamma_pi = remove_correlations(gamma, partition)
    lhs = quadratic_variance(gamma_pi, h) * quadratic_variance(gamma, g)
    return BoundCheck(lhs, commutator_form(h, g) ** 2 / 4)


def quadrature_bound(gamma: np.ndarray, v, w, partition: Partition | str | None = None) -> BoundCheck:
    """Bound for ``M(v) = sum_j n_j x_j + m_j p_j`` with complex ``v_j = n_j + i m_j``.

    ``Var(M(v))_Pi Var(M(w)) >= |sum_j Im(conj(v_j) w_j)|^2 / 4``.
    """
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    check = variance_bound(gamma, partition, direction_from_complex(v), direction_from_complex(w))
    rhs = abs(np.sum(np.imag(np.conj(v) * w))) ** 2 / 4
    return BoundCheck(check.lhs, float(rhs))


def multidim_xp_bound(gamma: np.ndarray, n, m, partition: Partition | str | None = None, uncorrelated: str = "x") -> BoundCheck:
    """Collective position ``X_n`` against collective momentum ``P_m``.

    ``uncorrelated`` picks which of the two is evaluated on the
    correlation-free state: ``"x"`` gives ``Var(X_n)_Pi Var(P_m)``, ``"p"``
    gives ``Var(P_m)_Pi Var(X_n)``. Both are bounded below by ``(n.m)^2 / 4``.
    """
    n = np.asarray(n, dtype=float)
    m = np.asarray(m, dtype=float)
    N = n_modes_of(gamma)
    if n.shape != (N,) or m.shape != (N,):
        raise ValueError(f"coefficient vectors must have length {N}")
    gx = direction_from_complex(n)
    gp = direction_from_complex(1j * m)
    if uncorrelated == "x":
        h, g = gx, gp
    elif uncorrelated == "p":
        h, g = gp, gx
    else:
        raise ValueError("uncorrelated must be 'x' or 'p'")
    lhs = quadratic_variance(remove_correlations(gamma, partition), h) * quadratic_variance(gamma, g)
    return BoundCheck(lhs, float(n @ m) ** 2 / 4)


def giovannetti_product_bound(gamma: np.ndarray, alpha, beta, theta=None, phi=None) -> BoundCheck:
    """Product criterion for local quadratures ``A_i = q_i(theta_i)``, ``B_i = q_i(phi_i)``.

    Defaults are ``A_i = x_i`` and ``B_i = p_i``. With ``[q(theta), q(phi)] =
    i sin(phi - theta)`` separable states obey

        Var(sum_i alpha_i A_i) Var(sum_i beta_i B_i)
            >= (sum_i |alpha_i beta_i sin(phi_i - theta_i)|)^2 / 4.
    """
    N = n_modes_of(gamma)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    theta = np.zeros(N) if theta is None else np.asarray(theta, dtype=float)
    phi = np.full(N, np.pi / 2) if phi is None else np.asarray(phi, dtype=float)
    for name, vec in (("alpha", alpha), ("beta", beta), ("theta", theta), ("phi", phi)):
        if vec.shape != (N,):
            raise ValueError(f"{name} must have length {N}, got shape {vec.shape}")
    gA = direction_from_complex(alpha * np.exp(1j * theta))
    gB = direction_from_complex(beta * np.exp(1j * phi))
    lhs = quadratic_variance(gamma, gA) * quadratic_variance(gamma, gB)
    rhs = np.sum(np.abs(alpha * beta * np.sin(phi - theta))) ** 2 / 4
    return BoundCheck(lhs, float(rhs))

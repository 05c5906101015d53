"""Phase-space algebra for N bosonic modes.

Quadratures are ordered ``(x_1, p_1, ..., x_N, p_N)`` and the units are fixed by
``[x, p] = i`` (hbar = 1), so the vacuum has variance 1/2 in every quadrature.
Mode indices in the public API are 1-based, as in the covariance file format.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import chain
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import block_diag

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-9

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class CovarianceError(ValueError):
    """Raised for matrices that cannot be used as a covariance matrix."""


class PartitionError(ValueError):
    """Raised for malformed mode partitions."""


class UnphysicalCovarianceWarning(UserWarning):
    """The matrix violates ``gamma + i*Omega/2 >= 0``."""


def n_modes_of(gamma: np.ndarray) -> int:
    gamma = np.asarray(gamma)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape[0] % 2:
        raise CovarianceError(f"expected a 2N x 2N matrix, got shape {gamma.shape}")
    return gamma.shape[0] // 2


def build_symplectic_form(n_modes: int) -> np.ndarray:
    """Return Omega, the direct sum of ``n_modes`` copies of [[0, 1], [-1, 0]]."""
    if n_modes < 1:
        raise ValueError("n_modes must be positive")
    return block_diag(*([_OMEGA_1] * n_modes))


def _check_vector(v, dim: int, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (dim,):
        raise ValueError(f"{name} has shape {v.shape}, expected ({dim},)")
    return v


def commutator_form(h, g, omega: np.ndarray | None = None) -> float:
    """Return ``h^T Omega g``, so that ``[M(h), M(g)] = i h^T Omega g``."""
    h = np.asarray(h, dtype=float)
    if omega is None:
        if h.ndim != 1 or h.size % 2:
            raise ValueError("phase-space vectors must have even length")
        omega = build_symplectic_form(h.size // 2)
    dim = omega.shape[0]
    h = _check_vector(h, dim, "h")
    g = _check_vector(g, dim, "g")
    return float(h @ omega @ g)


def quadratic_variance(gamma: np.ndarray, g) -> float:
    """Variance of the collective quadrature ``M(g) = sum_i g_i r_i``."""
    gamma = np.asarray(gamma, dtype=float)
    g = _check_vector(g, gamma.shape[0], "g")
    return float(g @ gamma @ g)


def validate_covariance(gamma, *, strict: bool = False, check_physical: bool = True) -> np.ndarray:
    """Check symmetry, positivity and (optionally) physicality of ``gamma``.

    Matrices that are symmetric to within ``SYMMETRY_TOL`` are returned
    symmetrized. An unphysical matrix triggers
    :class:`UnphysicalCovarianceWarning`, or :class:`CovarianceError` when
    ``strict`` is set.
    """
    gamma = np.array(gamma, dtype=float)
    n_modes_of(gamma)
    if not np.all(np.isfinite(gamma)):
        raise CovarianceError("covariance matrix has non-finite entries")
    asym = np.max(np.abs(gamma - gamma.T))
    if asym > SYMMETRY_TOL:
        raise CovarianceError(f"covariance matrix is not symmetric (max |g - g^T| = {asym:.3e})")
    gamma = 0.5 * (gamma + gamma.T)
    lam_min = np.linalg.eigvalsh(gamma)[0]
    if lam_min < -PSD_TOL:
        raise CovarianceError(f"covariance matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
    if check_physical:
        viol = physicality_violation(gamma)
        if viol > PSD_TOL:
            msg = f"covariance matrix violates the uncertainty principle by {viol:.3e}"
            if strict:
                raise CovarianceError(msg)
            warnings.warn(msg, UnphysicalCovarianceWarning, stacklevel=2)
    return gamma


def physicality_violation(gamma: np.ndarray) -> float:
    """Return ``max(0, -lambda_min(gamma + i Omega / 2))``."""
    gamma = np.asarray(gamma, dtype=float)
    omega = build_symplectic_form(n_modes_of(gamma))
    lam = np.linalg.eigvalsh(gamma + 0.5j * omega)[0]
    return max(0.0, -float(lam))


def is_physical(gamma: np.ndarray, tol: float = PSD_TOL) -> bool:
    return physicality_violation(gamma) <= tol


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks of 1-based mode indices that together cover all modes.

    >>> Partition.parse("1,2|3").blocks
    ((1, 2), (3,))
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(m) for m in b) for b in self.blocks)
        if not blocks or any(len(b) == 0 for b in blocks):
            raise PartitionError("a partition needs at least one non-empty block")
        flat = list(chain.from_iterable(blocks))
        if len(set(flat)) != len(flat):
            raise PartitionError(f"blocks overlap: {blocks}")
        if sorted(flat) != list(range(1, len(flat) + 1)):
            raise PartitionError(f"blocks must cover modes 1..N exactly once: {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n_modes(self) -> int:
        return sum(len(b) for b in self.blocks)

    @classmethod
    def singletons(cls, n_modes: int) -> "Partition":
        return cls(tuple((i,) for i in range(1, n_modes + 1)))

    @classmethod
    def trivial(cls, n_modes: int) -> "Partition":
        return cls((tuple(range(1, n_modes + 1)),))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"1,2|3"``: blocks separated by ``|``, modes by ``,``."""
        try:
            blocks = [tuple(int(tok) for tok in blk.split(",")) for blk in text.strip().split("|")]
        except ValueError as exc:
            raise PartitionError(f"cannot parse partition {text!r}") from exc
        return cls(tuple(blocks))

    def __str__(self) -> str:
        return "|".join(",".join(str(m) for m in b) for b in self.blocks)

    def refines(self, other: "Partition") -> bool:
        """True if every block of ``self`` lies inside a block of ``other``."""
        outer = [set(b) for b in other.blocks]
        return self.n_modes == other.n_modes and all(any(set(b) <= o for o in outer) for b in self.blocks)

    def block_labels(self) -> np.ndarray:
        """Block index of every mode, 0-based mode order."""
        labels = np.empty(self.n_modes, dtype=int)
        for k, b in enumerate(self.blocks):
            labels[[m - 1 for m in b]] = k
        return labels


def as_partition(partition: Partition | str | Iterable[Sequence[int]] | None, n_modes: int) -> Partition:
    """Coerce ``partition`` and check it matches ``n_modes``; None means singletons."""
    if partition is None:
        return Partition.singletons(n_modes)
    if isinstance(partition, str):
        partition = Partition.parse(partition)
    elif not isinstance(partition, Partition):
        partition = Partition(tuple(tuple(b) for b in partition))
    if partition.n_modes != n_modes:
        raise PartitionError(f"partition {partition} covers {partition.n_modes} modes, state has {n_modes}")
    return partition


def remove_correlations(gamma: np.ndarray, partition: Partition | str | None = None) -> np.ndarray:
    """Zero every covariance entry that couples modes in different blocks.

    With the default singleton partition only the local 2x2 blocks survive,
    which is the covariance matrix of the product of the single-mode marginals.
    """
    gamma = np.asarray(gamma, dtype=float)
    n = n_modes_of(gamma)
    labels = np.repeat(as_partition(partition, n).block_labels(), 2)
    return np.where(labels[:, None] == labels[None, :], gamma, 0.0)


def heisenberg_gap(gamma: np.ndarray, h, g) -> float:
    """``(h^T gamma h)(g^T gamma g) - (h^T Omega g)^2 / 4``; nonnegative for physical states."""
    return quadratic_variance(gamma, h) * quadratic_variance(gamma, g) - commutator_form(h, g) ** 2 / 4


def direction_from_complex(v) -> np.ndarray:
    """Map ``v_j = n_j + i m_j`` to the phase-space vector of ``sum_j n_j x_j + m_j p_j``."""
    v = np.asarray(v, dtype=complex)
    g = np.empty(2 * v.size)
    g[0::2] = v.real
    g[1::2] = v.imag
    return g


def xxpp_to_xpxp(matrix: np.ndarray) -> np.ndarray:
    """Reorder a matrix given in ``(x_1..x_N, p_1..p_N)`` order to interleaved order."""
    matrix = np.asarray(matrix)
    n = matrix.shape[0] // 2
    perm = np.ravel(np.column_stack([np.arange(n), np.arange(n) + n]))
    if matrix.ndim == 1:
        return matrix[perm]
    return matrix[np.ix_(perm, perm)]

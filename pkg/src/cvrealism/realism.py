"""Unrevealed-measurement (dephasing) map, irreality and its uncertainty relations.

The irreality of an observable ``A`` given ``rho`` is the entropy gap
``S(Phi_A(rho)) - S(rho)``, where ``Phi_A`` removes every coherence in the
eigenbasis of ``A``.  It vanishes exactly on the fixed points of ``Phi_A``.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import grid as _grid
from .errors import DimensionError, ValidityError
from .numerics import (
    as_matrix,
    eig_hermitian,
    relative_entropy,
    theta3_gaussian_norm,
    von_neumann_entropy,
)
from .states import as_density, eta

__all__ = [
    "ObservableBasis",
    "BipartiteState",
    "Decomposition",
    "position_basis",
    "momentum_basis",
    "dephase",
    "dephase_local",
    "irreality",
    "irreality_decomposition",
    "mutual_information",
    "info_lower_bound",
    "info_lower_bound_relative",
    "uncertainty_slack",
    "max_overlap",
    "unbiased_partner",
    "qp_irreality_sum",
    "gaussian_irreality",
    "random_unitary",
    "random_density_matrix",
    "random_bipartite_state",
    "maximally_entangled_state",
    "is_fixed_point",
    "basis_of",
]

UNITARY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ObservableBasis:
    """Orthonormal eigenbasis of an observable; columns are the eigenvectors."""

    vectors: np.ndarray

    def __post_init__(self):
        U = np.array(self.vectors, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise DimensionError(f"basis must be square, got shape {U.shape}")
        if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) > UNITARY_TOL:
            raise ValueError("basis vectors are not orthonormal within 1e-10")
        U.setflags(write=False)
        object.__setattr__(self, "vectors", U)

    @property
    def dim(self):
        return self.vectors.shape[0]

    @classmethod
    def computational(cls, d):
        return cls(np.eye(d))

    @classmethod
    def fourier(cls, d):
        """Basis mutually unbiased to the computational one."""
        k = np.arange(d)
        return cls(np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d))


def position_basis(grid):
    return ObservableBasis.computational(grid.xi)


def momentum_basis(grid):
    return ObservableBasis(_grid.fourier_matrix(grid))


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Density matrix on ``H_A (x) H_B`` with local dimensions ``dims``."""

    matrix: np.ndarray
    dims: tuple

    def __post_init__(self):
        M = np.array(as_matrix(self.matrix), dtype=complex)
        dA, dB = (int(d) for d in self.dims)
        if M.shape != (dA * dB, dA * dB):
            raise DimensionError(f"matrix shape {M.shape} does not match dims {self.dims}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "dims", (dA, dB))

    @property
    def d_a(self):
        return self.dims[0]

    @property
    def d_b(self):
        return self.dims[1]

    def _tensor(self):
        dA, dB = self.dims
        return self.matrix.reshape(dA, dB, dA, dB)

    def reduced_a(self):
        return np.einsum("ijkj->ik", self._tensor())

    def reduced_b(self):
        return np.einsum("ijil->jl", self._tensor())

    @classmethod
    def product(cls, rho_a, rho_b):
        rho_a, rho_b = as_matrix(rho_a), as_matrix(rho_b)
        return cls(np.kron(rho_a, rho_b), (rho_a.shape[0], rho_b.shape[0]))


class Decomposition(NamedTuple):
    local_coherence: float
    discord: float

    @property
    def total(self):
        return self.local_coherence + self.discord


def _check_basis(basis, d):
    if basis.dim != d:
        raise DimensionError(f"basis dimension {basis.dim} does not match {d}")


def dephase(rho, basis):
    """``sum_a |a><a| rho |a><a|`` for the eigenvectors ``|a>`` of ``basis``."""
    M = as_density(rho)
    _check_basis(basis, M.shape[0])
    U = basis.vectors
    populations = np.real(np.einsum("ia,ij,ja->a", U.conj(), M, U))
    return (U * populations) @ U.conj().T


def dephase_local(rho, basis):
    """Dephase subsystem A of a :class:`BipartiteState` in ``basis``."""
    dA, dB = rho.dims
    _check_basis(basis, dA)
    U = basis.vectors
    T = rho.matrix.reshape(dA, dB, dA, dB)
    # rotate A to the basis, keep the a == a' blocks, rotate back
    rot = np.einsum("ia,ijkl,kb->ajbl", U.conj(), T, U)
    blocks = np.einsum("ajal->ajl", rot)
    out = np.einsum("ia,ajl,ka->ijkl", U, blocks, U.conj())
    return BipartiteState(out.reshape(dA * dB, dA * dB), rho.dims)


def irreality(rho, basis):
    """``S(Phi(rho)) - S(rho)`` in nats (local dephasing for bipartite input)."""
    if isinstance(rho, BipartiteState):
        return (von_neumann_entropy(dephase_local(rho, basis).matrix)
                - von_neumann_entropy(rho.matrix))
    M = as_density(rho)
    return von_neumann_entropy(dephase(M, basis)) - von_neumann_entropy(M)


def mutual_information(rho):
    """``S(rho_A) + S(rho_B) - S(rho)``."""
    return (von_neumann_entropy(rho.reduced_a()) + von_neumann_entropy(rho.reduced_b())
            - von_neumann_entropy(rho.matrix))


def irreality_decomposition(rho, basis):
    """Split the irreality into local coherence of ``rho_A`` and basis-dependent discord."""
    local = irreality(rho.reduced_a(), basis)
    discord = mutual_information(rho) - mutual_information(dephase_local(rho, basis))
    return Decomposition(local, discord)


def info_lower_bound(rho):
    """``ln d_A - S(rho) + S(rho_B)``: information about A available from B."""
    return (np.log(rho.d_a) - von_neumann_entropy(rho.matrix)
            + von_neumann_entropy(rho.reduced_b()))


def info_lower_bound_relative(rho):
    """:func:`info_lower_bound` evaluated as ``S(rho || 1/d_A (x) rho_B)``."""
    ref = np.kron(np.eye(rho.d_a) / rho.d_a, rho.reduced_b())
    return relative_entropy(rho.matrix, ref)


def uncertainty_slack(rho, basis_a, basis_a2):
    """``I(A|rho) + I(A'|rho) - I_{A|B}(rho)``.

    Non-negative (up to rounding) when the two bases are mutually unbiased.
    For arbitrary bases the slack can be negative but never drops below
    ``-ln(d_A c)``, with ``c`` the :func:`max_overlap` of the bases.
    """
    return irreality(rho, basis_a) + irreality(rho, basis_a2) - info_lower_bound(rho)


def max_overlap(basis_a, basis_a2):
    """``max |<a|a'>|^2`` between the vectors of two bases; ``1/d`` iff mutually unbiased."""
    return float(np.max(np.abs(basis_a.vectors.conj().T @ basis_a2.vectors) ** 2))


def unbiased_partner(basis):
    """A basis mutually unbiased to ``basis``: its vectors rotated by the Fourier kernel."""
    return ObservableBasis(basis.vectors @ ObservableBasis.fourier(basis.dim).vectors)


def qp_irreality_sum(Delta_q, Delta_p):
    """Closed-form ``I(Q) + I(P) = ln(2 pi e Delta_q Delta_p)`` for Gaussian states.

    Returns ``(value, satisfied)`` where ``satisfied`` flags ``value >= ln(2 pi e)``.

    Raises
    ------
    ValidityError
        If either width is below one resolution cell.
    """
    if Delta_q < 1 or Delta_p < 1:
        raise ValidityError(
            f"closed form needs Delta_q, Delta_p >= 1, got ({Delta_q}, {Delta_p})"
        )
    value = float(np.log(2 * np.pi * np.e * Delta_q * Delta_p))
    return value, value >= np.log(2 * np.pi * np.e)


def gaussian_irreality(Delta):
    """Position irreality of a pure sampled Gaussian of width ``Delta`` cells.

    Exact Shannon entropy of the weights ``exp(-k^2/(2 Delta^2))/N``, i.e.
    ``ln N + eta^2/2``; tends to ``ln(sqrt(2 pi e) Delta)`` for ``Delta >= 1``
    and to 0 as ``Delta -> 0``.
    """
    if Delta == 0:
        return 0.0
    return float(np.log(theta3_gaussian_norm(Delta)) + 0.5 * eta(Delta) ** 2)


def random_unitary(d, rng):
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(d, rng, rank=None):
    """Dirichlet mixture of ``rank`` Haar-random pure states."""
    rank = d if rank is None else rank
    vecs = random_unitary(d, rng)[:, :rank]
    w = rng.dirichlet(np.ones(rank))
    return (vecs * w) @ vecs.conj().T


def random_bipartite_state(d_a, d_b, rng, rank=None):
    return BipartiteState(random_density_matrix(d_a * d_b, rng, rank), (d_a, d_b))


def maximally_entangled_state(d):
    """``sum_i |i>|i> / sqrt(d)`` as a :class:`BipartiteState`."""
    v = np.eye(d).reshape(d * d) / np.sqrt(d)
    return BipartiteState(np.outer(v, v), (d, d))


def is_fixed_point(rho, basis, tol=1e-9):
    """Realism criterion: ``Phi(rho) == rho`` entrywise within ``tol``."""
    M = as_density(rho)
    return bool(np.max(np.abs(dephase(M, basis) - M)) <= tol)


def basis_of(observable):
    """Eigenbasis of a Hermitian matrix, in ascending eigenvalue order."""
    return ObservableBasis(eig_hermitian(observable).eigenvectors)

"""Shared numerical kernels: Hermitian spectra, entropies, purity, theta sums."""
from typing import NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "Spectrum",
    "as_matrix",
    "eig_hermitian",
    "density_eigenvalues",
    "von_neumann_entropy",
    "shannon_entropy",
    "relative_entropy",
    "purity",
    "linear_entropy",
    "theta3_gaussian_norm",
    "n_approx",
]

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-9
SUPPORT_TOL = 1e-10


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(rho):
    """Return the bare ndarray behind a density-matrix-like object."""
    return np.asarray(getattr(rho, "matrix", rho))


def eig_hermitian(M):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    ValueError
        If ``M`` is not square or deviates from Hermiticity by more than 1e-10.
    """
    M = as_matrix(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.size and np.max(np.abs(M - M.conj().T)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within 1e-10")
    w, v = np.linalg.eigh(0.5 * (M + M.conj().T))
    return Spectrum(w, v)


def density_eigenvalues(rho):
    """Validated, clamped eigenvalues of a density matrix."""
    w = eig_hermitian(rho).eigenvalues
    if abs(w.sum() - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace {w.sum():.12g} differs from 1")
    if w[0] < -PSD_TOL:
        raise ValueError(f"density matrix has eigenvalue {w[0]:.3e} < -1e-10")
    return np.clip(w, 0.0, None)


def shannon_entropy(p):
    """Shannon entropy (nats) of a probability vector, with 0 ln 0 = 0."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def von_neumann_entropy(rho):
    """``-Tr(rho ln rho)`` in nats."""
    return shannon_entropy(density_eigenvalues(rho))


def relative_entropy(rho, sigma):
    """``Tr[rho (ln rho - ln sigma)]`` in nats.

    Returns ``inf`` when the support of ``rho`` is not contained in that of
    ``sigma``.
    """
    r = density_eigenvalues(rho)
    s_spec = eig_hermitian(sigma)
    s = s_spec.eigenvalues
    if abs(s.sum() - 1.0) > TRACE_TOL or s[0] < -PSD_TOL:
        raise ValueError("sigma is not a valid density matrix")
    V = s_spec.eigenvectors
    # diagonal of rho in sigma's eigenbasis
    weights = np.real(np.einsum("ij,ik,kj->j", V.conj(), as_matrix(rho), V))
    inside = s > SUPPORT_TOL
    if np.sum(weights[~inside]) > SUPPORT_TOL:
        return np.inf
    cross = float(np.sum(weights[inside] * np.log(s[inside])))
    return max(-shannon_entropy(r) - cross, 0.0)


def purity(rho):
    M = as_matrix(rho)
    return float(np.real(np.vdot(M.conj().T, M)))


def linear_entropy(rho):
    return 1.0 - purity(rho)


def _theta_terms(delta):
    # e^{-K^2/(2 delta^2)} < 1e-17 once K > delta*sqrt(2*39.2)
    K = int(np.ceil(delta * np.sqrt(2.0 * 39.2))) + 1
    k = np.arange(1, K + 1)
    return k, np.exp(-(k**2) / (2.0 * delta * delta))


def theta3_gaussian_norm(Delta_q):
    """``sum_k exp(-k^2 / (2 Delta_q^2))`` over all integers.

    This is the Jacobi theta value ``theta_3(0, exp(-1/(2 Delta_q^2)))``, summed
    directly until the dropped tail is below 1e-15 of the total.
    """
    if Delta_q < 0:
        raise DomainError(f"Delta_q must be >= 0, got {Delta_q}")
    if Delta_q == 0:
        return 1.0
    _, terms = _theta_terms(Delta_q)
    return float(1.0 + 2.0 * np.sum(terms[::-1]))


def _n_small(Delta_q):
    if Delta_q == 0:
        return 1.0
    j = np.array([1.0, 4.0, 9.0])
    return float(1.0 + 2.0 * np.sum(np.exp(-j / (2.0 * Delta_q**2))))


def n_approx(Delta_q):
    """Piecewise closed-form approximation of :func:`theta3_gaussian_norm`.

    Three exponentials below 1, ``sqrt(2 pi) Delta_q`` above 1, and the larger
    of the two at exactly 1.
    """
    if Delta_q < 0:
        raise DomainError(f"Delta_q must be >= 0, got {Delta_q}")
    large = float(np.sqrt(2.0 * np.pi) * Delta_q)
    if Delta_q < 1:
        return _n_small(Delta_q)
    if Delta_q > 1:
        return large
    return max(_n_small(Delta_q), large)

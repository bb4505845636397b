"""Discretized position/momentum space.

A grid of odd dimension ``xi = 2L + 1`` carries positions ``q_k = k*delta_q`` and
momenta ``p_l = l*delta_p`` with ``k, l`` in ``[-L, L]``.  The resolutions are
tied together by ``xi * delta_q * delta_p = 2*pi*hbar``; ``xi`` and ``delta_q``
are chosen, ``delta_p`` is derived.

States are stored as dimensionless coefficients ``c_k = sqrt(delta_q) psi(q_k)``
so that the resolution-weighted trace of the continuum formulas becomes the
ordinary matrix trace.  Storage slot ``k + L`` holds physical index ``k``.
Boundaries are periodic, which makes the discrete Fourier pair exact.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError

__all__ = [
    "GridSpec",
    "make_grid",
    "fourier_matrix",
    "to_momentum",
    "to_position",
    "projector_q",
    "projector_p",
    "translation_op",
    "position_operator",
    "momentum_operator",
    "momentum_forward_diff",
]


@dataclass(frozen=True)
class GridSpec:
    """Geometry of a discretized phase space.

    Use :func:`make_grid` to build one; the constructor does not validate.
    """

    delta_q: float
    xi: int
    hbar: float = 1.0

    @property
    def delta_p(self):
        return 2.0 * np.pi * self.hbar / (self.xi * self.delta_q)

    @property
    def L(self):
        return (self.xi - 1) // 2

    @property
    def dim(self):
        return self.xi

    @property
    def indices(self):
        """Physical indices ``-L..L`` in storage order."""
        return np.arange(-self.L, self.L + 1)

    @property
    def q(self):
        return self.indices * self.delta_q

    @property
    def p(self):
        return self.indices * self.delta_p

    def slot(self, k):
        """Storage slot of physical index ``k``."""
        k = int(k)
        if abs(k) > self.L:
            raise IndexError(f"index {k} outside [-{self.L}, {self.L}]")
        return k + self.L


def make_grid(delta_q, xi, hbar=1.0):
    """Build a validated :class:`GridSpec`.

    Parameters
    ----------
    delta_q : float
        Position resolution, > 0.
    xi : int
        Space dimension; odd and at least 3.
    hbar : float
        Reduced Planck constant in the chosen units, > 0.

    Raises
    ------
    DimensionError
        If ``xi`` is not an odd integer >= 3.
    DomainError
        If ``delta_q`` or ``hbar`` is not positive.
    """
    if isinstance(xi, (bool, np.bool_)) or int(xi) != xi:
        raise DimensionError(f"xi must be an integer, got {xi!r}")
    xi = int(xi)
    if xi < 3 or xi % 2 == 0:
        raise DimensionError(f"xi must be an odd integer >= 3, got {xi}")
    if not delta_q > 0:
        raise DomainError(f"delta_q must be positive, got {delta_q}")
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    return GridSpec(delta_q=float(delta_q), xi=xi, hbar=float(hbar))


def fourier_matrix(grid):
    """Unitary kernel with entry ``(l, k) = exp(2j*pi*k*l/xi)/sqrt(xi)``.

    The matrix is symmetric.  Its columns are the momentum eigenvectors written
    in the position basis, so momentum coefficients of a state ``c`` are
    ``F.conj().T @ c`` and ``F`` is the momentum :class:`ObservableBasis`.
    """
    k = grid.indices
    return np.exp(2j * np.pi * np.outer(k, k) / grid.xi) / np.sqrt(grid.xi)


def to_momentum(grid, coeffs):
    """Position coefficients to momentum coefficients (FFT, same as ``F^H c``)."""
    c = np.fft.ifftshift(np.asarray(coeffs, dtype=complex), axes=-1)
    return np.fft.fftshift(np.fft.fft(c, norm="ortho", axis=-1), axes=-1)


def to_position(grid, coeffs):
    """Inverse of :func:`to_momentum`."""
    c = np.fft.ifftshift(np.asarray(coeffs, dtype=complex), axes=-1)
    return np.fft.fftshift(np.fft.ifft(c, norm="ortho", axis=-1), axes=-1)


def projector_q(grid, k):
    """Rank-one position projector onto slot ``k``."""
    out = np.zeros((grid.xi, grid.xi))
    s = grid.slot(k)
    out[s, s] = 1.0
    return out


def projector_p(grid, l):
    """Rank-one momentum projector onto momentum index ``l``."""
    s = grid.slot(l)
    col = fourier_matrix(grid)[:, s]
    return np.outer(col, col.conj())


def translation_op(grid, n):
    """Cyclic shift by ``n`` position slots, built spectrally from momentum.

    ``T(n) = F diag(exp(-2j*pi*n*l/xi)) F^H``; it maps the basis vector of index
    ``k`` to that of index ``k + n`` (wrapping at the edges).
    """
    F = fourier_matrix(grid)
    phase = np.exp(-2j * np.pi * int(n) * grid.indices / grid.xi)
    return (F * phase) @ F.conj().T


def position_operator(grid):
    return np.diag(grid.q).astype(complex)


def momentum_operator(grid):
    F = fourier_matrix(grid)
    P = (F * grid.p) @ F.conj().T
    return 0.5 * (P + P.conj().T)


def momentum_forward_diff(grid, psi):
    """First-order forward-difference momentum, ``(hbar/i)(c[k+1]-c[k])/delta_q``.

    Periodic wrap at the upper edge.  Only useful for comparing with the exact
    spectral momentum; it is not Hermitian.
    """
    psi = np.asarray(psi, dtype=complex)
    return (grid.hbar / 1j) * (np.roll(psi, -1, axis=-1) - psi) / grid.delta_q

"""Discrete quantum states on a grid and their moments."""
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.special import erfc

from . import grid as _grid
from .errors import DimensionError, DomainError, LeakageError
from .numerics import _n_small, _theta_terms, as_matrix, eig_hermitian

__all__ = [
    "PureState",
    "DensityMatrix",
    "GaussianSpec",
    "Moments",
    "gaussian_state",
    "uniform_state",
    "moments",
    "eta",
    "eta_approx",
    "forward_diff_mean_p",
    "window_probability",
    "save_state",
    "load_state",
]

NORM_TOL = 1e-10
LEAKAGE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized coefficient vector ``c_k = sqrt(delta_q) psi(q_k)`` on a grid."""

    grid: _grid.GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.grid.xi,):
            raise DimensionError(f"expected {self.grid.xi} coefficients, got shape {c.shape}")
        norm = np.vdot(c, c).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm:.12g} differs from 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_unnormalized(cls, grid, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        return cls(grid, c / np.sqrt(np.vdot(c, c).real))

    @property
    def probabilities(self):
        return np.abs(self.coeffs) ** 2

    @property
    def momentum_coeffs(self):
        return _grid.to_momentum(self.grid, self.coeffs)

    def density_matrix(self):
        return DensityMatrix(np.outer(self.coeffs, self.coeffs.conj()), grid=self.grid)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix (checked to 1e-10)."""

    matrix: np.ndarray
    grid: Optional[_grid.GridSpec] = None

    def __post_init__(self):
        M = np.array(self.matrix, dtype=complex)
        w = eig_hermitian(M).eigenvalues
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValueError(f"trace {w.sum():.12g} differs from 1")
        if w.size and w[0] < -1e-10:
            raise ValueError(f"matrix is not positive semidefinite (eigenvalue {w[0]:.3e})")
        if self.grid is not None and M.shape[0] != self.grid.xi:
            raise DimensionError("matrix size does not match the grid")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True)
class GaussianSpec:
    """Discrete Gaussian: centre slots ``k_bar``, ``l_bar`` and width ``Delta_q``.

    ``Delta_q`` is the position standard deviation in units of ``delta_q``.
    """

    Delta_q: float
    k_bar: int = 0
    l_bar: int = 0


class Moments(NamedTuple):
    mean_q: float
    mean_p: float
    sd_q: float
    sd_p: float


def _gaussian_leakage(grid, spec):
    # continuum mass of the sampled envelope beyond the outermost cells
    s = np.sqrt(2.0) * spec.Delta_q
    upper = (grid.L + 0.5 - spec.k_bar) / s
    lower = (grid.L + 0.5 + spec.k_bar) / s
    return 0.5 * (erfc(upper) + erfc(lower))


def gaussian_state(grid, spec):
    """Sampled minimum-uncertainty Gaussian, normalized numerically.

    ``c_k ~ exp(-(k-k_bar)^2 / (4 Delta_q^2)) exp(2j pi l_bar (k-k_bar) / xi)``.

    Raises
    ------
    LeakageError
        If more than 1e-8 of the envelope falls outside the grid window.
    """
    if not spec.Delta_q > 0:
        raise DomainError(f"Delta_q must be positive, got {spec.Delta_q}")
    for name in ("k_bar", "l_bar"):
        v = getattr(spec, name)
        if int(v) != v or abs(v) > grid.L:
            raise DomainError(f"{name}={v} must be an integer in [-{grid.L}, {grid.L}]")
    leak = _gaussian_leakage(grid, spec)
    if leak > LEAKAGE_TOL:
        raise LeakageError(
            f"Gaussian of width {spec.Delta_q} leaks {leak:.2e} outside a grid of xi={grid.xi}"
        )
    d = grid.indices - spec.k_bar
    c = np.exp(-(d**2) / (4.0 * spec.Delta_q**2)) * np.exp(2j * np.pi * spec.l_bar * d / grid.xi)
    return PureState.from_unnormalized(grid, c)


def uniform_state(grid, Delta_q):
    """Flat superposition over the ``Delta_q`` (odd) central slots."""
    if int(Delta_q) != Delta_q or Delta_q < 1 or Delta_q % 2 == 0:
        raise DomainError(f"Delta_q must be a positive odd integer, got {Delta_q}")
    if Delta_q > grid.xi:
        raise DomainError(f"Delta_q={Delta_q} exceeds the grid dimension {grid.xi}")
    half = (int(Delta_q) - 1) // 2
    c = np.where(np.abs(grid.indices) <= half, 1.0 / np.sqrt(Delta_q), 0.0)
    return PureState(grid, c.astype(complex))


def moments(state):
    """Means and standard deviations from the spectral position and momentum."""
    g = state.grid
    pq = state.probabilities
    pp = np.abs(state.momentum_coeffs) ** 2
    mq, mp = float(pq @ g.q), float(pp @ g.p)
    vq = float(pq @ g.q**2) - mq**2
    vp = float(pp @ g.p**2) - mp**2
    return Moments(mq, mp, np.sqrt(max(vq, 0.0)), np.sqrt(max(vp, 0.0)))


def forward_diff_mean_p(state):
    """Complex ``<psi|P_fd|psi>`` with the forward-difference momentum.

    The imaginary part is the artefact of the non-Hermitian first-order
    derivative; for a Gaussian it is ``hbar/(8 Delta_q^2 delta_q)`` at leading
    order.  Diagnostic only.
    """
    return complex(np.vdot(state.coeffs, _grid.momentum_forward_diff(state.grid, state.coeffs)))


def eta(Delta_q):
    """Discrete uncertainty product ``2 dQ dP / hbar`` of the sampled Gaussian.

    ``eta^2 = sum_k k^2 w_k / Delta_q^2`` with normalized weights
    ``w_k ~ exp(-k^2/(2 Delta_q^2))`` over all integers.
    """
    if Delta_q < 0:
        raise DomainError(f"Delta_q must be >= 0, got {Delta_q}")
    if Delta_q == 0:
        return 0.0
    k, terms = _theta_terms(Delta_q)
    N = 1.0 + 2.0 * np.sum(terms[::-1])
    second = 2.0 * np.sum((k**2 * terms)[::-1]) / N
    return float(np.sqrt(second) / Delta_q)


def eta_approx(Delta_q):
    """``eta`` from the piecewise closed form of the normalization.

    Differentiating the three-exponential branch gives a three-term sum; the
    large-width branch gives exactly 1.  At ``Delta_q == 1`` the branch chosen
    by :func:`numerics.n_approx` is used.
    """
    if Delta_q < 0:
        raise DomainError(f"Delta_q must be >= 0, got {Delta_q}")
    if Delta_q == 0:
        return 0.0
    if Delta_q > 1 or (Delta_q == 1 and np.sqrt(2 * np.pi) >= _n_small(1.0)):
        return 1.0
    j = np.array([1.0, 2.0, 3.0])
    e = np.exp(-(j**2) / (2.0 * Delta_q**2))
    return float(np.sqrt(2.0 * np.sum(j**2 * e) / _n_small(Delta_q)) / Delta_q)


def window_probability(state, center, width):
    """Probability of finding the position in ``(center - width/2, center + width/2)``.

    Each slot's probability is spread uniformly over its cell
    ``[q_k - delta_q/2, q_k + delta_q/2]``; boundary cells count by overlap.
    """
    g = state.grid
    lo, hi = center - 0.5 * width, center + 0.5 * width
    left = g.q - 0.5 * g.delta_q
    right = g.q + 0.5 * g.delta_q
    overlap = np.clip(np.minimum(right, hi) - np.maximum(left, lo), 0.0, None) / g.delta_q
    return float(np.sum(overlap * state.probabilities))


def save_state(state, path):
    """Write ``k, Re c_k, Im c_k`` columns (header records the grid)."""
    g = state.grid
    data = np.column_stack([g.indices, state.coeffs.real, state.coeffs.imag])
    header = f"delta_q={g.delta_q!r} xi={g.xi} hbar={g.hbar!r}\nk,re,im"
    np.savetxt(path, data, fmt=["%d", "%.17g", "%.17g"], delimiter=",", header=header)


def load_state(path):
    with open(path) as fh:
        first = fh.readline().lstrip("# ").split()
    meta = dict(item.split("=") for item in first)
    g = _grid.make_grid(float(meta["delta_q"]), int(meta["xi"]), float(meta["hbar"]))
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if not np.array_equal(data[:, 0].astype(int), g.indices):
        raise DimensionError("state file indices do not match the grid")
    return PureState(g, data[:, 1] + 1j * data[:, 2])


def as_density(rho):
    """Matrix of a :class:`PureState`, :class:`DensityMatrix` or array."""
    if isinstance(rho, PureState):
        return np.outer(rho.coeffs, rho.coeffs.conj())
    return as_matrix(rho)

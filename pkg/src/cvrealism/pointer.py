"""Particle plus pointer: two bodies coupled through a damped relative coordinate.

With ``M = m + m_p``, the centre of mass ``X = (m x + m_p x_p)/M`` moves freely
while the relative coordinate ``q = x - x_p`` follows the damped oscillator with
the reduced mass ``mu = m m_p / M``.  The joint state stays a product in
``(X, q)`` but is entangled in the lab coordinates ``(x, x_p)``; the reduced
purity of either body depends only on ``gamma = dq / dX`` and the mass fractions.
"""
from dataclasses import dataclass

import numpy as np

from .ck import CKParams, widths
from .errors import ConvergenceError, DomainError, LeakageError
from .states import DensityMatrix

__all__ = [
    "PointerParams",
    "gamma",
    "reduced_purity",
    "entanglement",
    "purity_from_gamma",
    "product_state_sigma_cm",
    "purity_oracle",
    "asymptotic_pointer_state",
]


@dataclass(frozen=True)
class PointerParams:
    """Masses, centre-of-mass width and the damped relative-coordinate parameters.

    ``lam``, ``k``, ``sigma0`` and ``hbar`` describe the relative motion; its
    mass is the reduced mass, exposed through :attr:`relative`.
    """

    m: float
    m_p: float
    sigma_cm: float
    lam: float
    k: float
    sigma0: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.m > 0 and self.m_p > 0):
            raise DomainError("masses must be positive")
        if not self.sigma_cm > 0:
            raise DomainError(f"sigma_cm must be positive, got {self.sigma_cm}")
        self.relative  # validates the remaining fields

    @classmethod
    def from_relative(cls, rel, mass_ratio, sigma_cm):
        """Split the mass of ``rel`` (taken as the reduced mass) with ``m_p/m = mass_ratio``."""
        if not mass_ratio > 0:
            raise DomainError(f"mass_ratio must be positive, got {mass_ratio}")
        m = rel.m * (1.0 + mass_ratio) / mass_ratio
        return cls(m=m, m_p=m * mass_ratio, sigma_cm=sigma_cm, lam=rel.lam, k=rel.k,
                   sigma0=rel.sigma0, hbar=rel.hbar)

    @property
    def M(self):
        return self.m + self.m_p

    @property
    def mu(self):
        return self.m * self.m_p / self.M

    @property
    def frac_m(self):
        return self.m / self.M

    @property
    def frac_mp(self):
        return self.m_p / self.M

    @property
    def t_E_cm(self):
        return 2.0 * self.M * self.sigma_cm**2 / self.hbar

    @property
    def relative(self):
        return CKParams(lam=self.lam, m=self.mu, k=self.k, sigma0=self.sigma0, hbar=self.hbar)

    def cm_width(self, t):
        """Free spreading ``sigma_cm sqrt(1 + (t/t_E_cm)^2)``."""
        t = np.asarray(t, dtype=float)
        return self.sigma_cm * np.sqrt(1.0 + (t / self.t_E_cm) ** 2)


def gamma(params, t):
    """Relative width over centre-of-mass width."""
    return widths(params.relative, t).delta_q / params.cm_width(t)


def purity_from_gamma(g, frac_m, frac_mp):
    """``Tr rho^2 = sqrt(g^2 / ((1 + frac_m^2 g^2)(1 + frac_mp^2 g^2)))``."""
    g2 = np.asarray(g, dtype=float) ** 2
    return np.sqrt(g2 / ((1.0 + frac_m**2 * g2) * (1.0 + frac_mp**2 * g2)))


def reduced_purity(params, t):
    """Purity ``Tr rho^2`` of either body's reduced state (equal for a pure joint state)."""
    return purity_from_gamma(gamma(params, t), params.frac_m, params.frac_mp)


def entanglement(params, t):
    """Linear-entropy entanglement ``1 - purity``."""
    return 1.0 - reduced_purity(params, t)


def product_state_sigma_cm(rel, mass_ratio):
    """Centre-of-mass width making the initial state a product in lab coordinates.

    Solves ``gamma_0^2 = 1/(frac_m frac_mp)`` for ``sigma_cm``.
    """
    fm, fp = 1.0 / (1.0 + mass_ratio), mass_ratio / (1.0 + mass_ratio)
    return rel.sigma0 * np.sqrt(fm * fp)


def _lab_purity(s_cm, s_q, fm, fp, cells):
    # amplitude exp(-X^2/(4 s_cm^2) - q^2/(4 s_q^2)), X = fm x + fp y, q = x - y
    sd_x = np.hypot(s_cm, fp * s_q)
    sd_y = np.hypot(s_cm, fm * s_q)
    A = (np.outer([fm, fp], [fm, fp]) / (2.0 * s_cm**2)
         + np.outer([1.0, -1.0], [1.0, -1.0]) / (2.0 * s_q**2))
    s_min = 1.0 / np.sqrt(np.linalg.eigvalsh(A)[-1])
    h = s_min / cells
    nx = 2 * int(np.ceil(10.0 * sd_x / h)) + 1
    ny = 2 * int(np.ceil(10.0 * sd_y / h)) + 1
    if max(nx, ny) > 6001:
        return None
    x = np.linspace(-10.0 * sd_x, 10.0 * sd_x, nx)
    y = np.linspace(-10.0 * sd_y, 10.0 * sd_y, ny)
    hx, hy = x[1] - x[0], y[1] - y[0]
    X = fm * x[:, None] + fp * y[None, :]
    q = x[:, None] - y[None, :]
    psi = np.exp(-(X**2) / (4.0 * s_cm**2) - q**2 / (4.0 * s_q**2))
    rho = (psi @ psi.T) * hy
    tr = np.trace(rho) * hx
    return float(np.sum(rho**2) * hx * hx / tr**2)


def purity_oracle(params, t, cells=1.5, tol=1e-9):
    """Reduced purity by direct trapezoid quadrature in the lab coordinates.

    The joint wave function is sampled with real Gaussian envelopes of the
    centre-of-mass and relative widths, ``rho(x, x') = int psi(x, y) psi(x', y) dy``,
    and ``Tr rho^2 / (Tr rho)^2`` is returned.  The spacing is ``1/cells`` of
    the narrowest amplitude width; the result is accepted when halving the
    spacing changes it by less than ``tol``.

    Raises
    ------
    ConvergenceError
        If the refinement test fails or the grid would be too large; the
        exception carries the achieved change as ``estimate``.
    """
    s_q = float(widths(params.relative, t).delta_q)
    s_cm = float(params.cm_width(t))
    fm, fp = params.frac_m, params.frac_mp
    coarse = _lab_purity(s_cm, s_q, fm, fp, cells)
    fine = _lab_purity(s_cm, s_q, fm, fp, 2.0 * cells)
    if coarse is None or fine is None:
        raise ConvergenceError(f"width ratio {s_q / s_cm:.3g} needs too fine a grid", np.nan)
    err = abs(fine - coarse)
    if err > tol:
        raise ConvergenceError(f"quadrature changed by {err:.2e} on refinement", err)
    return fine


def asymptotic_pointer_state(params, grid, width_fraction=1.0 / 12.0):
    """Late-time pointer state on a rescaled grid: a diagonal Gaussian mixture.

    The physical envelope keeps spreading, so it is drawn with a standard
    deviation of ``width_fraction * xi`` cells.  Only the shape of the state
    matters here: it has no coherence in the position basis.
    """
    if not 0 < width_fraction:
        raise DomainError("width_fraction must be positive")
    s = width_fraction * grid.xi
    w = np.exp(-(grid.indices.astype(float) ** 2) / (2.0 * s * s))
    w /= w.sum()
    if w[0] + w[-1] > 1e-8:
        raise LeakageError(f"pointer envelope reaches the grid edge ({w[0] + w[-1]:.2e})")
    return DensityMatrix(np.diag(w).astype(complex), grid=grid)

"""Caldirola-Kanai damped oscillator: classical orbits and the quantum Gaussian solution.

The Hamiltonian ``H_t = P^2 exp(-2 tau)/(2m) + k Q^2 exp(2 tau)/2`` with
``tau = lam * t`` produces ``q'' + 2 lam q' + omega^2 q = 0``.  Every closed form
here is written through two regime-independent functions of ``tau``::

    C(tau) = cosh(zeta tau)          (cos for imaginary zeta, 1 at zeta = 0)
    S(tau) = sinh(zeta tau) / zeta   (sin(|zeta| tau)/|zeta|, tau at zeta = 0)

with ``zeta^2 = 1 - omega^2/lam^2``, so the overdamped, critical and
underdamped cases share one code path and nothing divides by ``zeta``.

The quantum solution follows the factorized propagator
``U_t = exp(i c+ J+) exp(c0 J0) exp(i c- J-)``.  :func:`tdse_propagate` is an
independent split-step integrator used to check it.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import grid as _grid
from .errors import DomainError, LeakageError
from .realism import gaussian_irreality
from .states import PureState

__all__ = [
    "CKParams",
    "Trajectory",
    "RegimeExponents",
    "Coefficients",
    "Widths",
    "Centroid",
    "CKSnapshot",
    "classical_trajectory",
    "regime_exponents",
    "ck_coefficients",
    "u_derivative",
    "widths",
    "centroid",
    "density_q",
    "density_p",
    "irreality_variation",
    "irreality_series",
    "tdse_propagate",
    "suggest_grid",
]

CRITICAL_TOL = 1e-12
SQRT_2PI_E = np.sqrt(2.0 * np.pi * np.e)


@dataclass(frozen=True)
class CKParams:
    """Physical parameters of the damped oscillator.

    ``lam`` is the damping frequency, ``m`` the mass, ``k`` the spring constant
    and ``sigma0`` the initial position spread of the Gaussian packet.
    """

    lam: float
    m: float
    k: float
    sigma0: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"lam must be positive (no factorized solution at lam=0), got {self.lam}")
        if not self.m > 0:
            raise DomainError(f"m must be positive, got {self.m}")
        if not self.k >= 0:
            raise DomainError(f"k must be non-negative, got {self.k}")
        if not (self.sigma0 > 0 and self.hbar > 0):
            raise DomainError("sigma0 and hbar must be positive")

    @classmethod
    def from_dimensionless(cls, epsilon, tau_E, lam=1.0, sigma0=1.0, hbar=1.0):
        """Build from ``epsilon = k sigma0^2/(hbar lam)`` and ``tau_E = lam t_E``."""
        if not tau_E > 0:
            raise DomainError(f"tau_E must be positive, got {tau_E}")
        m = hbar * tau_E / (2.0 * lam * sigma0**2)
        k = epsilon * hbar * lam / sigma0**2
        return cls(lam=lam, m=m, k=k, sigma0=sigma0, hbar=hbar)

    @classmethod
    def from_zeta(cls, zeta, tau_E, **kw):
        """Build from the damping discriminant and ``tau_E``; ``zeta`` may be 0..1."""
        return cls.from_dimensionless(tau_E * (1.0 - zeta**2) / 2.0, tau_E, **kw)

    @property
    def omega(self):
        return float(np.sqrt(self.k / self.m))

    @property
    def zeta_sq(self):
        return 1.0 - self.k / (self.m * self.lam**2)

    @property
    def zeta(self):
        """Real for over/critical damping, purely imaginary when underdamped."""
        return np.emath.sqrt(self.zeta_sq)

    @property
    def regime(self):
        if abs(self.zeta_sq) <= CRITICAL_TOL:
            return "critical"
        return "overdamped" if self.zeta_sq > 0 else "underdamped"

    @property
    def t_E(self):
        return 2.0 * self.m * self.sigma0**2 / self.hbar

    @property
    def tau_E(self):
        return self.lam * self.t_E

    @property
    def epsilon(self):
        return self.k * self.sigma0**2 / (self.hbar * self.lam)

    def tau(self, t):
        return self.lam * np.asarray(t, dtype=float)


class Trajectory(NamedTuple):
    q: np.ndarray
    p: np.ndarray
    v: np.ndarray
    h: np.ndarray


class RegimeExponents(NamedTuple):
    """Long-time growth rates in ``tau``: ``|x| ~ tau^power exp(rate tau)``."""

    regime: str
    q: float
    p: float
    v: float
    power: int
    h_rate: float
    h_behavior: str


class Coefficients(NamedTuple):
    u: np.ndarray
    c_plus: np.ndarray
    c_zero: np.ndarray
    c_minus: np.ndarray
    T: np.ndarray


class Widths(NamedTuple):
    delta_q: np.ndarray
    delta_p: np.ndarray
    delta_v: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    f: np.ndarray
    chi: np.ndarray


class Centroid(NamedTuple):
    mean_q: np.ndarray
    mean_v: np.ndarray


@dataclass(frozen=True)
class CKSnapshot:
    """Analytic state of the damped Gaussian packet at one instant.

    ``irreality_*`` use the closed form ``ln(sqrt(2 pi e) width/resolution)``,
    trustworthy only where the matching ``valid_*`` flag is set.  The
    ``*_discrete`` values are the exact entropy of the sampled Gaussian and stay
    meaningful below one resolution cell.
    """

    tau: float
    c_plus: float
    c_zero: float
    c_minus: float
    T: float
    alpha: float
    beta: float
    f: float
    chi: float
    delta_q: float
    delta_p: float
    delta_v: float
    mean_q: float
    mean_v: float
    irreality_q: float
    irreality_p: float
    irreality_v: float
    irreality_q_discrete: float
    irreality_v_discrete: float
    valid_q: bool
    valid_p: bool
    valid_v: bool
    regime: str


def _cs(zeta_sq, tau):
    """``cosh(zeta tau)`` and ``sinh(zeta tau)/zeta`` for any sign of ``zeta^2``."""
    tau = np.asarray(tau, dtype=float)
    z = np.sqrt(abs(zeta_sq))
    x = z * tau
    small = np.abs(x) < 1e-4
    x2 = zeta_sq * tau**2
    series = tau * (1.0 + x2 / 6.0 + x2**2 / 120.0)
    if zeta_sq > 0:
        C = np.cosh(x)
        with np.errstate(invalid="ignore", divide="ignore"):
            S = np.where(small, series, np.sinh(x) / (z if z else 1.0))
    elif zeta_sq < 0:
        C = np.cos(x)
        with np.errstate(invalid="ignore", divide="ignore"):
            S = np.where(small, series, np.sin(x) / (z if z else 1.0))
    else:
        C, S = np.ones_like(tau), tau.copy()
    return C, S


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("time must be non-negative")
    return t


def classical_trajectory(params, q0, p0, t):
    """Classical orbit ``(q_t, p_t, v_t, h_t)``; ``t`` may be an array.

    The ``1/(lam q0 p0)`` grouping of the textbook form is multiplied out, so
    ``q0 = 0`` or ``p0 = 0`` need no special casing.
    """
    tau = params.tau(t)
    C, S = _cs(params.zeta_sq, tau)
    m, k, lam = params.m, params.k, params.lam
    q = np.exp(-tau) * (q0 * C + (q0 + p0 / (m * lam)) * S)
    p = np.exp(tau) * (p0 * C - (p0 + k * q0 / lam) * S)
    v = p * np.exp(-2.0 * tau) / m
    h = p**2 * np.exp(-2.0 * tau) / (2.0 * m) + k * q**2 * np.exp(2.0 * tau) / 2.0
    return Trajectory(q, p, v, h)


def regime_exponents(params):
    """Asymptotic ``tau``-exponents of ``q, p, v`` and the behaviour of ``h``."""
    regime = params.regime
    if regime == "underdamped":
        return RegimeExponents(regime, -1.0, 1.0, -1.0, 0, np.nan, "oscillates")
    if regime == "critical":
        return RegimeExponents(regime, -1.0, 1.0, -1.0, 1, 0.0, "tau^2")
    z = float(np.sqrt(params.zeta_sq))
    return RegimeExponents(regime, -(1.0 - z), 1.0 + z, -(1.0 - z), 0, 2.0 * z,
                           "exp(2 zeta tau)")


def ck_coefficients(params, t):
    """Propagator coefficients ``c+, c0, c-``, the auxiliary ``u_t`` and ``T_t``.

    ``lam T_t = S/(C+S)``, the regular form of ``1/(1 + zeta coth(zeta tau))``,
    so every coefficient is 0 at ``t = 0``.  In the underdamped regime ``u_t``
    changes sign and ``c0`` is reported as ``-2 ln|u_t|``.
    """
    t = _check_time(t)
    tau = params.tau(t)
    C, S = _cs(params.zeta_sq, tau)
    CS = C + S
    with np.errstate(divide="ignore", invalid="ignore"):
        lamT = S / CS
        u = np.exp(-tau) * CS
        c0 = 2.0 * tau - 2.0 * np.log(np.abs(CS))
    c_plus = -(params.k / params.lam) * np.exp(2.0 * tau) * lamT
    c_minus = -lamT / (params.m * params.lam)
    return Coefficients(u, c_plus, c0, c_minus, lamT / params.lam)


def u_derivative(params, t):
    """Analytic ``du/dt`` of the auxiliary solution, ``lam e^{-tau} (zeta^2 - 1) S``."""
    tau = params.tau(_check_time(t))
    _, S = _cs(params.zeta_sq, tau)
    return params.lam * np.exp(-tau) * (params.zeta_sq - 1.0) * S


def widths(params, t):
    """Position, momentum and velocity spreads of the evolved Gaussian.

    ``delta_q = sigma0 alpha exp(-c0/2)`` and
    ``delta_p = hbar/(2 sigma0) beta exp(c0/2)`` with
    ``beta^2 = 1 + 4 exp(-c0) f`` and
    ``f = chi (T/t_E + chi exp(-c0) alpha^2)``, ``chi = c+ sigma0^2/hbar``.
    """
    co = ck_coefficients(params, t)
    tau = params.tau(t)
    C, S = _cs(params.zeta_sq, tau)
    ratio = co.T / params.t_E
    alpha = np.sqrt(1.0 + ratio**2)
    chi = co.c_plus * params.sigma0**2 / params.hbar
    shrink = np.exp(-co.c_zero)
    f = chi * (ratio + chi * shrink * alpha**2)
    beta = np.sqrt(1.0 + 4.0 * shrink * f)
    # alpha*|u| written without T so the underdamped zeros of u are harmless
    delta_q = params.sigma0 * np.exp(-tau) * np.sqrt((C + S) ** 2 + (S / params.tau_E) ** 2)
    delta_p = params.hbar / (2.0 * params.sigma0) * beta * np.exp(co.c_zero / 2.0)
    delta_v = delta_p * np.exp(-2.0 * tau) / params.m
    return Widths(delta_q, delta_p, delta_v, alpha, beta, f, chi)


def centroid(params, q0, p0, t):
    """``<Q>_t = exp(-c0/2)(q0 + p0 T/m)`` and its time derivative ``<V>_t``."""
    co = ck_coefficients(params, t)
    tau = params.tau(t)
    drift = q0 + p0 * co.T / params.m
    mean_q = co.u * drift
    with np.errstate(divide="ignore", invalid="ignore"):
        mean_v = u_derivative(params, t) * drift + p0 * np.exp(-2.0 * tau) / (params.m * co.u)
    return Centroid(mean_q, mean_v)


def _gauss(x, mu, sd):
    return np.exp(-0.5 * ((x - mu) / sd) ** 2) / np.sqrt(2.0 * np.pi * sd**2)


def density_q(params, q, t, q0=0.0, p0=0.0):
    """Position density ``|psi_t(q)|^2``."""
    w = widths(params, t)
    return _gauss(np.asarray(q, dtype=float), centroid(params, q0, p0, t).mean_q, w.delta_q)


def density_p(params, p, t, q0=0.0, p0=0.0):
    """Canonical-momentum density; centred at ``m exp(2 tau) <V>_t``."""
    w = widths(params, t)
    mean_p = params.m * np.exp(2.0 * params.tau(t)) * centroid(params, q0, p0, t).mean_v
    return _gauss(np.asarray(p, dtype=float), mean_p, w.delta_p)


def irreality_variation(params, t):
    """Resolution-free changes ``(dI_Q, dI_P)`` of the irrealities since ``t = 0``."""
    w = widths(params, t)
    sigma_p = params.hbar / (2.0 * params.sigma0)
    return np.log(w.delta_q / params.sigma0), np.log(w.delta_p / sigma_p)


def irreality_series(params, delta_q_res, delta_p_res, times, q0=0.0, p0=0.0):
    """Snapshots of the evolving packet at strictly increasing ``times``.

    ``delta_q_res`` and ``delta_p_res`` are the detector resolutions; the
    velocity resolution is ``delta_p_res / m``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d sequence")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    if not (delta_q_res > 0 and delta_p_res > 0):
        raise DomainError("resolutions must be positive")
    co = ck_coefficients(params, times)
    w = widths(params, times)
    cen = centroid(params, q0, p0, times)
    delta_v_res = delta_p_res / params.m
    Dq = w.delta_q / delta_q_res
    Dp = w.delta_p / delta_p_res
    Dv = w.delta_v / delta_v_res
    out = []
    for i, tau in enumerate(params.tau(times)):
        out.append(CKSnapshot(
            tau=float(tau),
            c_plus=float(co.c_plus[i]),
            c_zero=float(co.c_zero[i]),
            c_minus=float(co.c_minus[i]),
            T=float(co.T[i]),
            alpha=float(w.alpha[i]),
            beta=float(w.beta[i]),
            f=float(w.f[i]),
            chi=float(w.chi[i]),
            delta_q=float(w.delta_q[i]),
            delta_p=float(w.delta_p[i]),
            delta_v=float(w.delta_v[i]),
            mean_q=float(cen.mean_q[i]),
            mean_v=float(cen.mean_v[i]),
            irreality_q=float(np.log(SQRT_2PI_E * Dq[i])),
            irreality_p=float(np.log(SQRT_2PI_E * Dp[i])),
            irreality_v=float(np.log(SQRT_2PI_E * Dv[i])),
            irreality_q_discrete=gaussian_irreality(float(Dq[i])),
            irreality_v_discrete=gaussian_irreality(float(Dv[i])),
            valid_q=bool(Dq[i] >= 1.0),
            valid_p=bool(Dp[i] >= 1.0),
            valid_v=bool(Dv[i] >= 1.0),
            regime=params.regime,
        ))
    return out


def _edge_mass(probs, frac=0.05):
    n = max(1, int(frac * probs.size))
    return float(probs[:n].sum() + probs[-n:].sum())


def tdse_propagate(grid, params, psi0, t_final, dt, t0=0.0, leakage_tol=1e-6):
    """Integrate ``i hbar d/dt psi = H_t psi`` with midpoint Strang splitting.

    Each step applies half a potential kick, a full kinetic drift in the
    momentum basis and another half kick, all evaluated at the step's midpoint
    ``tau``.  The step is shrunk slightly so that an integer number of steps
    lands on ``t_final``.

    Raises
    ------
    LeakageError
        If more than ``leakage_tol`` of the probability reaches the outer 5% of
        the position or momentum window.
    """
    if grid.hbar != params.hbar:
        raise DomainError("grid and parameters use different hbar")
    span = float(t_final) - float(t0)
    if span < 0 or not dt > 0:
        raise DomainError("need t_final >= t0 and dt > 0")
    n = int(np.ceil(span / dt - 1e-12)) if span > 0 else 0
    h = span / n if n else 0.0
    q2, p2 = grid.q**2, grid.p**2
    hb, m, k, lam = params.hbar, params.m, params.k, params.lam
    c = np.array(psi0.coeffs, dtype=complex)
    check_every = max(1, n // 20)

    def check():
        for probs, where in ((np.abs(c) ** 2, "position"),
                             (np.abs(_grid.to_momentum(grid, c)) ** 2, "momentum")):
            leak = _edge_mass(probs)
            if leak > leakage_tol:
                raise LeakageError(f"{leak:.2e} of the probability reached the {where} window edge")

    for i in range(n):
        tau = lam * (t0 + (i + 0.5) * h)
        kick = np.exp(-0.5j * k * q2 * np.exp(2.0 * tau) * h / (2.0 * hb))
        drift = np.exp(-1j * p2 * np.exp(-2.0 * tau) * h / (2.0 * m * hb))
        c = kick * c
        c = _grid.to_position(grid, drift * _grid.to_momentum(grid, c))
        c = kick * c
        if (i + 1) % check_every == 0:
            check()
    check()
    # the integrator is unitary; skip the constructor's strict norm check on drift
    out = PureState.__new__(PureState)
    c.setflags(write=False)
    object.__setattr__(out, "grid", grid)
    object.__setattr__(out, "coeffs", c)
    return out


def suggest_grid(params, t_max, q0=0.0, p0=0.0, cells_per_width=4.0, span=10.0, max_xi=2**16 + 1):
    """Grid wide and fine enough to carry the packet up to ``t_max`` in both bases."""
    t = np.linspace(0.0, t_max, 201)
    w = widths(params, t)
    cen = centroid(params, q0, p0, t)
    mean_p = params.m * np.exp(2.0 * params.tau(t)) * cen.mean_v
    reach_q = np.max(np.abs(cen.mean_q) + span * w.delta_q)
    reach_p = np.max(np.abs(mean_p) + span * w.delta_p)
    dq = min(np.min(w.delta_q) / cells_per_width, np.pi * params.hbar / reach_p)
    L = int(np.ceil(max(reach_q / dq, np.pi * params.hbar / (dq * dq) / reach_p)))
    xi = 2 * L + 1
    if xi > max_xi:
        raise DomainError(f"packet needs xi={xi} > {max_xi}; shorten t_max")
    return _grid.make_grid(dq, xi, params.hbar)
